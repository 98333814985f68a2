"""Sample entropy of a time series."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidInput, SampleEntropyUndefined

logger = logging.getLogger(__name__)


@dataclass
class SampEnParams:
    """Sample entropy parameters.

    Attributes:
        m: Embedding dimension
        r: Tolerance radius; a fraction of the series standard deviation when
            ``relative`` is set, otherwise an absolute amplitude
        relative: Whether ``r`` scales with the series
    """

    m: int = 2
    r: float = 0.2
    relative: bool = True

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InvalidInput(f"embedding dimension must be at least 1, got {self.m}")
        if not self.r > 0:
            raise InvalidInput(f"tolerance must be positive, got {self.r}")

    def radius(self, x: np.ndarray) -> float:
        """Resolve the tolerance against a series."""
        if self.relative:
            return self.r * float(np.std(x))
        return self.r


def match_counts(x: np.ndarray, m: int, r: float) -> tuple[int, int]:
    """Count template pairs within Chebyshev distance r.

    Both template lengths use the same N - m starting points so the counts are
    comparable. Self-matches are excluded and each unordered pair counts once.

    Returns:
        (A, B): matches of length m + 1 and of length m
    """
    templates = sliding_window_view(x, m + 1)
    a = b = 0
    for i in range(templates.shape[0] - 1):
        diff = np.abs(templates[i + 1:] - templates[i])
        short = diff[:, :m].max(axis=1) <= r
        b += int(np.count_nonzero(short))
        a += int(np.count_nonzero(short & (diff[:, m] <= r)))
    return a, b


def sample_entropy(x, params: SampEnParams | None = None) -> float:
    """Compute -ln(A/B) for a series.

    Args:
        x: Real-valued series of length N > m + 1
        params: Embedding dimension and tolerance, defaults to m=2, r=0.2*std

    Returns:
        Non-negative entropy, or +inf when no (m+1)-length template matches

    Raises:
        InvalidInput: If the series is too short or not finite
        SampleEntropyUndefined: If no m-length template pair matches
    """
    params = params or SampEnParams()
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidInput(f"series must be one-dimensional, got shape {x.shape}")
    if x.size <= params.m + 1:
        raise InvalidInput(f"series of length {x.size} is too short for m={params.m}")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("series contains non-finite values")

    r = params.radius(x)
    a, b = match_counts(x, params.m, r)
    if b == 0:
        raise SampleEntropyUndefined(
            f"no template pairs of length {params.m} within r={r:.4g} (N={x.size})"
        )
    if a == 0:
        return float("inf")
    return float(np.log(b / a))
