"""Trace and radargram types with the spectral primitives built on them.

Time is measured in nanoseconds, frequency in megahertz and trace spacing in
metres throughout the package. The DFT convention is the unnormalized forward
transform with kernel e^{-j2πkn/N}; the inverse carries the 1/N factor.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft
from scipy.signal import hilbert

from .errors import InvalidInput

MHZ_PER_GHZ = 1000.0
IMAG_TOLERANCE = 1e-10
MIN_ANALYTIC_LENGTH = 4


def _finite_samples(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        raise InvalidInput(f"{name} contains non-finite values")
    return array


@dataclass(eq=False)
class Trace:
    """Uniformly sampled real-valued time series (A-scan).

    Attributes:
        samples: Amplitudes, at least two
        dt: Sampling interval in ns
        t0: Time of the first sample in ns
    """

    samples: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        self.samples = _finite_samples(self.samples, "trace")
        if self.samples.ndim != 1:
            raise InvalidInput(f"trace samples must be one-dimensional, got shape {self.samples.shape}")
        if self.samples.size < 2:
            raise InvalidInput(f"trace needs at least 2 samples, got {self.samples.size}")
        if not self.dt > 0 or not np.isfinite(self.dt):
            raise InvalidInput(f"sampling interval must be positive, got {self.dt}")
        self.dt = float(self.dt)
        self.t0 = float(self.t0)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        """Sample times in ns."""
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def nyquist(self) -> float:
        """Nyquist frequency in MHz."""
        return MHZ_PER_GHZ / (2.0 * self.dt)

    def energy(self) -> float:
        """Squared L2 norm of the samples."""
        return float(np.dot(self.samples, self.samples))

    def with_samples(self, samples) -> "Trace":
        """Create a trace on the same time axis with new samples."""
        return Trace(samples, self.dt, self.t0)


@dataclass(eq=False)
class Radargram:
    """Ordered equal-length traces forming a B-scan.

    Data are stored trace-major: ``data[i]`` is trace ``i``. A radargram may
    hold zero traces (a header-only file reads back that way); processing
    operations reject it.

    Attributes:
        data: Array of shape (traces, samples)
        dt: Sampling interval in ns
        dx: Trace spacing in m
        t0: Time of the first sample in ns
    """

    data: np.ndarray
    dt: float
    dx: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        self.data = _finite_samples(self.data, "radargram")
        if self.data.ndim != 2:
            raise InvalidInput(f"radargram data must be two-dimensional, got shape {self.data.shape}")
        if self.data.shape[0] > 0 and self.data.shape[1] < 2:
            raise InvalidInput(f"traces need at least 2 samples, got {self.data.shape[1]}")
        if not self.dt > 0 or not np.isfinite(self.dt):
            raise InvalidInput(f"sampling interval must be positive, got {self.dt}")
        if not self.dx >= 0 or not np.isfinite(self.dx):
            raise InvalidInput(f"trace spacing must be non-negative, got {self.dx}")
        self.dt = float(self.dt)
        self.dx = float(self.dx)
        self.t0 = float(self.t0)

    @classmethod
    def from_traces(cls, traces: list[Trace], dx: float) -> "Radargram":
        """Stack traces sharing length and sampling interval.

        Args:
            traces: Traces in acquisition order, at least one
            dx: Trace spacing in m

        Returns:
            Radargram holding copies of the trace samples

        Raises:
            InvalidInput: If the list is empty or the traces disagree
        """
        if not traces:
            raise InvalidInput("radargram needs at least one trace")
        first = traces[0]
        for index, trace in enumerate(traces[1:], start=1):
            if len(trace) != len(first):
                raise InvalidInput(f"trace {index} has {len(trace)} samples, expected {len(first)}")
            if trace.dt != first.dt:
                raise InvalidInput(f"trace {index} has dt={trace.dt}, expected {first.dt}")
        return cls(np.stack([t.samples for t in traces]), first.dt, dx, first.t0)

    @property
    def n_traces(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    def trace(self, index: int) -> Trace:
        """Return trace ``index`` as a Trace."""
        return Trace(self.data[index], self.dt, self.t0)

    @property
    def traces(self) -> list[Trace]:
        return [self.trace(i) for i in range(self.n_traces)]

    def with_data(self, data) -> "Radargram":
        """Create a radargram with the same geometry and new data."""
        return Radargram(data, self.dt, self.dx, self.t0)

    def require_traces(self) -> None:
        """Raise InvalidInput for an empty radargram."""
        if self.n_traces == 0:
            raise InvalidInput("radargram has no traces")


@dataclass(eq=False)
class Spectrum:
    """Full two-sided DFT of a trace.

    Attributes:
        bins: Complex DFT bins, one per time sample
        dt: Sampling interval of the originating trace in ns
        t0: Start time of the originating trace in ns
    """

    bins: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        self.bins = np.asarray(self.bins, dtype=complex)
        if self.bins.ndim != 1 or self.bins.size < 2:
            raise InvalidInput("spectrum needs a one-dimensional array of at least 2 bins")
        if not np.all(np.isfinite(self.bins)):
            raise InvalidInput("spectrum contains non-finite bins")
        if not self.dt > 0:
            raise InvalidInput(f"sampling interval must be positive, got {self.dt}")

    @property
    def n(self) -> int:
        """Original sample count."""
        return self.bins.size

    @property
    def df(self) -> float:
        """Bin spacing in MHz."""
        return MHZ_PER_GHZ / (self.n * self.dt)

    @property
    def frequencies(self) -> np.ndarray:
        """Signed bin frequencies in MHz, in DFT order."""
        return fft.fftfreq(self.n, self.dt) * MHZ_PER_GHZ


def forward_spectrum(trace: Trace) -> Spectrum:
    """Compute the unnormalized DFT of a trace.

    Args:
        trace: Input trace

    Returns:
        Two-sided spectrum with df = 1/(n*dt) expressed in MHz
    """
    return Spectrum(fft.fft(trace.samples), trace.dt, trace.t0)


def inverse_spectrum(spectrum: Spectrum) -> Trace:
    """Invert a spectrum back to a real trace.

    The imaginary part of the inverse transform is discarded once it is
    verified to be negligible.

    Args:
        spectrum: Two-sided spectrum of a real signal

    Returns:
        Reconstructed trace

    Raises:
        InvalidInput: If the spectrum is not conjugate-symmetric
    """
    values = fft.ifft(spectrum.bins)
    imag_norm = np.linalg.norm(values.imag)
    if imag_norm > IMAG_TOLERANCE * np.linalg.norm(values):
        raise InvalidInput(
            f"spectrum is not conjugate-symmetric (imaginary residue {imag_norm:.3e})"
        )
    return Trace(values.real, spectrum.dt, spectrum.t0)


def analytic_signal(trace: Trace) -> np.ndarray:
    """Analytic signal x + jH{x} built in the frequency domain.

    Negative-frequency bins are zeroed, positive bins doubled, DC and Nyquist
    kept.

    Args:
        trace: Input trace with at least 4 samples

    Returns:
        Complex array whose real part equals the trace samples

    Raises:
        InvalidInput: If the trace is shorter than 4 samples
    """
    if len(trace) < MIN_ANALYTIC_LENGTH:
        raise InvalidInput(f"analytic signal needs at least {MIN_ANALYTIC_LENGTH} samples, got {len(trace)}")
    return hilbert(trace.samples)


def mirror_extend(trace: Trace) -> Trace:
    """Extend a trace by mirrored halves on both sides.

    For n samples the result has 2n: the first half of the trace reversed,
    the trace, then its second half reversed.

    Args:
        trace: Input trace

    Returns:
        Extended trace whose t0 is shifted back by n//2 samples
    """
    x = trace.samples
    half = x.size // 2
    extended = np.concatenate([x[:half][::-1], x, x[half:][::-1]])
    return Trace(extended, trace.dt, trace.t0 - half * trace.dt)


def extract_center(extended: np.ndarray, n: int) -> np.ndarray:
    """Undo mirror_extend on an array (last axis) of an n-sample signal."""
    half = n // 2
    return extended[..., half:half + n]
