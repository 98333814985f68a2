"""Synthetic GPR data: Ricker wavelet traces and convolutional sections."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .signal import MHZ_PER_GHZ, Radargram, Trace

logger = logging.getLogger(__name__)

DEFAULT_RICKER_SAMPLES = 1024
DEFAULT_RICKER_DT = 1000.0 / DEFAULT_RICKER_SAMPLES
MIN_SAMPLES_PER_PERIOD = 10


def ricker_values(t, fc: float, t0: float) -> np.ndarray:
    """Evaluate (1 - 2 a) exp(-a), a = (pi fc (t - t0))^2, with t in ns and fc in MHz."""
    arg = (np.pi * fc / MHZ_PER_GHZ * (np.asarray(t, dtype=float) - t0)) ** 2
    return (1.0 - 2.0 * arg) * np.exp(-arg)


def check_sampling(fc: float, dt: float) -> None:
    """Require at least ten samples per period at the center frequency."""
    period = MHZ_PER_GHZ / fc
    if not dt < period / MIN_SAMPLES_PER_PERIOD:
        raise InvalidInput(
            f"dt={dt} ns gives fewer than {MIN_SAMPLES_PER_PERIOD} samples per period at {fc} MHz"
        )


@dataclass
class RickerSpec:
    """Sampled Ricker wavelet.

    Attributes:
        fc: Center frequency in MHz
        dt: Sampling interval in ns
        n: Number of samples
        t0: Peak time in ns; defaults to the sample closest to the window center
    """

    fc: float = 50.0
    dt: float = DEFAULT_RICKER_DT
    n: int = DEFAULT_RICKER_SAMPLES
    t0: float | None = None

    def __post_init__(self) -> None:
        if not self.fc > 0:
            raise InvalidInput(f"center frequency must be positive, got {self.fc}")
        if not self.dt > 0:
            raise InvalidInput(f"sampling interval must be positive, got {self.dt}")
        if self.n < 2:
            raise InvalidInput(f"wavelet needs at least 2 samples, got {self.n}")
        check_sampling(self.fc, self.dt)
        if self.t0 is None:
            self.t0 = (self.n // 2) * self.dt


def ricker(spec: RickerSpec) -> Trace:
    """Sample a Ricker wavelet with unit peak at ``spec.t0``."""
    times = spec.dt * np.arange(spec.n)
    return Trace(ricker_values(times, spec.fc, spec.t0), spec.dt)


@dataclass
class Reflector:
    """Planar interface, possibly dipping, given by its two-way time at both section ends.

    Attributes:
        t_left: Two-way time in ns under the first trace
        t_right: Two-way time in ns under the last trace
        amplitude: Reflection amplitude
    """

    t_left: float
    t_right: float
    amplitude: float = 1.0


@dataclass
class Diffractor:
    """Point scatterer producing a diffraction hyperbola.

    Attributes:
        position: Horizontal position in m
        t_apex: Two-way time in ns at the apex
        amplitude: Apex amplitude
        velocity: Propagation velocity in m/ns
    """

    position: float
    t_apex: float
    amplitude: float = 1.0
    velocity: float = 0.1


DEFAULT_REFLECTORS = (
    Reflector(12.0, 12.0, 1.0),
    Reflector(20.0, 32.0, -0.6),
)
DEFAULT_DIFFRACTORS = (Diffractor(64.0, 40.0, 0.8),)


def layered_section(
    traces: int = 256,
    samples: int = 400,
    dt: float = 0.125,
    dx: float = 0.5,
    fc: float = 100.0,
    reflectors: Sequence[Reflector] = DEFAULT_REFLECTORS,
    diffractors: Sequence[Diffractor] = DEFAULT_DIFFRACTORS,
) -> Radargram:
    """Build a noise-free section by placing Ricker wavelets at reflector times.

    Wavelets are evaluated analytically at their exact arrival times, so
    arrivals between samples need no interpolation.

    Args:
        traces: Number of traces
        samples: Samples per trace
        dt: Sampling interval in ns
        dx: Trace spacing in m
        fc: Wavelet center frequency in MHz
        reflectors: Planar interfaces
        diffractors: Point scatterers

    Returns:
        Clean radargram of shape (traces, samples)
    """
    if traces < 1:
        raise InvalidInput(f"section needs at least one trace, got {traces}")
    check_sampling(fc, dt)
    times = dt * np.arange(samples)
    positions = dx * np.arange(traces)
    data = np.zeros((traces, samples))
    fraction = positions / positions[-1] if traces > 1 else np.zeros(1)
    for reflector in reflectors:
        arrivals = reflector.t_left + (reflector.t_right - reflector.t_left) * fraction
        data += reflector.amplitude * ricker_values(times[None, :], fc, arrivals[:, None])
    for diffractor in diffractors:
        offsets = 2.0 * (positions - diffractor.position) / diffractor.velocity
        arrivals = np.sqrt(diffractor.t_apex**2 + offsets**2)
        spreading = diffractor.t_apex / arrivals
        data += (diffractor.amplitude * spreading)[:, None] * ricker_values(times[None, :], fc, arrivals[:, None])
    logger.debug("Built %dx%d synthetic section at %.3f ns", traces, samples, dt)
    return Radargram(data, dt, dx)
