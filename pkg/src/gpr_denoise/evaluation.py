"""SNR measurement and noise injection."""

import logging
import math
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

from .errors import InvalidInput
from .signal import Radargram, Trace

logger = logging.getLogger(__name__)

Signal = TypeVar("Signal", Trace, Radargram)


@dataclass(frozen=True)
class SnrMeasure:
    """Signal-to-noise energy ratio of a test signal against its clean reference.

    Attributes:
        ratio: ||clean||^2 / ||test - clean||^2, +inf when they are identical
        db: 10 log10(ratio)
    """

    ratio: float
    db: float

    @classmethod
    def from_energies(cls, signal_energy: float, noise_energy: float) -> "SnrMeasure":
        if noise_energy == 0:
            return cls(math.inf, math.inf)
        ratio = signal_energy / noise_energy
        return cls(ratio, 10.0 * math.log10(ratio))

    @property
    def infinite(self) -> bool:
        """True when the test signal equals the reference exactly."""
        return math.isinf(self.ratio)


def _values(signal: Trace | Radargram) -> np.ndarray:
    if isinstance(signal, Trace):
        return signal.samples
    signal.require_traces()
    return signal.data


def snr(clean: Trace | Radargram, test: Trace | Radargram) -> SnrMeasure:
    """Measure the SNR of ``test`` against ``clean`` over all samples.

    Args:
        clean: Clean reference with non-zero energy
        test: Signal of the same shape

    Returns:
        SnrMeasure; identical inputs give an infinite measure

    Raises:
        InvalidInput: On shape mismatch or an all-zero reference
    """
    m = _values(clean)
    s = _values(test)
    if m.shape != s.shape:
        raise InvalidInput(f"shape mismatch: clean {m.shape}, test {s.shape}")
    signal_energy = float(np.sum(m * m))
    if signal_energy == 0:
        raise InvalidInput("clean reference has zero energy")
    noise = s - m
    return SnrMeasure.from_energies(signal_energy, float(np.sum(noise * noise)))


def add_noise(clean: Signal, target_db: float, seed: int) -> Signal:
    """Add white Gaussian noise at an exact SNR.

    The realized noise vector is scaled so that ``snr(clean, noisy).db``
    equals ``target_db``. A radargram gets one global scale over all samples.

    Args:
        clean: Clean trace or radargram with non-zero energy
        target_db: Target SNR in dB
        seed: Seed of the numpy default generator

    Returns:
        Noisy copy of the same type and geometry

    Raises:
        InvalidInput: If the clean signal has zero energy or the target is not finite
    """
    if not math.isfinite(target_db):
        raise InvalidInput(f"target SNR must be finite, got {target_db}")
    values = _values(clean)
    signal_energy = float(np.sum(values * values))
    if signal_energy == 0:
        raise InvalidInput("cannot scale noise against a zero-energy signal")
    noise = np.random.default_rng(seed).standard_normal(values.shape)
    noise_energy = float(np.sum(noise * noise))
    scale = math.sqrt(signal_energy / (noise_energy * 10.0 ** (target_db / 10.0)))
    noisy = values + scale * noise
    logger.debug("Added noise at %.3f dB (seed %d, scale %.4g)", target_db, seed, scale)
    if isinstance(clean, Trace):
        return clean.with_samples(noisy)
    return clean.with_data(noisy)
