"""Comparison de-noisers: ensemble empirical mode decomposition and wavelet thresholding."""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pywt
from PyEMD import EEMD, EMD

from .denoise import DenoiseConfig, gate, mode_entropies
from .errors import InvalidInput
from .signal import Trace

logger = logging.getLogger(__name__)

MAD_TO_SIGMA = 0.6745
THRESHOLD_MODES = ("soft", "hard")


@dataclass
class EmdConfig:
    """Sifting and ensemble parameters.

    Attributes:
        max_imfs: IMF cap, floor(log2 n) when None
        sift_stop: Standard-deviation criterion ending the sifting of one IMF
        max_sifts: Sifting iterations per IMF
        ensemble_size: Number of noise-perturbed EMD runs in EEMD
        ensemble_noise_std: Added noise standard deviation as a fraction of std(x)
        seed: Seed of the generator the ensemble noise is drawn from
    """

    max_imfs: int | None = None
    sift_stop: float = 0.2
    max_sifts: int = 10
    ensemble_size: int = 100
    ensemble_noise_std: float = 0.2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_imfs is not None and self.max_imfs < 1:
            raise InvalidInput(f"max_imfs must be at least 1, got {self.max_imfs}")
        if not 0 < self.sift_stop < 1:
            raise InvalidInput(f"sift_stop must be in (0, 1), got {self.sift_stop}")
        if self.max_sifts < 1:
            raise InvalidInput(f"max_sifts must be at least 1, got {self.max_sifts}")
        if self.ensemble_size < 1:
            raise InvalidInput(f"ensemble_size must be at least 1, got {self.ensemble_size}")
        if not self.ensemble_noise_std >= 0:
            raise InvalidInput(f"ensemble_noise_std must be non-negative, got {self.ensemble_noise_std}")


@dataclass(eq=False)
class EmdResult:
    """IMFs from highest to lowest frequency and the remaining residue."""

    imfs: np.ndarray
    residue: np.ndarray

    def ascending(self) -> np.ndarray:
        """IMFs in ascending frequency order."""
        return self.imfs[::-1]


def _sifter(cfg: EmdConfig) -> EMD:
    # MAX_ITERATION counts the sift that hits the cap
    return EMD(
        spline_kind="cubic",
        nbsym=2,
        energy_ratio_thr=cfg.sift_stop,
        std_thr=cfg.sift_stop,
        MAX_ITERATION=cfg.max_sifts + 1,
    )


def _imf_cap(cfg: EmdConfig, n: int) -> int:
    return cfg.max_imfs or int(math.log2(n))


def emd(trace: Trace, cfg: EmdConfig | None = None) -> EmdResult:
    """Empirical mode decomposition by cubic-spline envelope sifting.

    Envelopes mirror the two outermost extrema past each end. Sifting of one
    IMF stops when the removed mean carries less than ``sift_stop`` of its
    energy or after ``max_sifts`` sifts. Plateaus count as extrema only when
    the slope changes sign across them. A trace with too few extrema comes
    back as the residue with no IMFs.

    Args:
        trace: Input trace
        cfg: Sifting parameters

    Returns:
        IMFs and residue with sum(IMFs) + residue equal to the input
    """
    cfg = cfg or EmdConfig()
    x = trace.samples
    sifter = _sifter(cfg)
    sifter.emd(x, max_imf=_imf_cap(cfg, x.size))
    imfs, _ = sifter.get_imfs_and_residue()
    imfs = np.asarray(imfs, dtype=float).reshape(-1, x.size)
    return EmdResult(imfs, x - imfs.sum(axis=0))


def eemd(trace: Trace, cfg: EmdConfig | None = None) -> EmdResult:
    """Ensemble EMD: rank-wise average of IMFs over noise-perturbed copies.

    Members run sequentially from one generator seeded with ``cfg.seed``.
    The added noise has ``ensemble_noise_std`` times the standard deviation
    of the trace. Each member also contributes its residue as its last row.
    The returned residue is the input minus the averaged rows.

    Args:
        trace: Input trace
        cfg: Sifting and ensemble parameters

    Returns:
        Averaged IMFs and residue
    """
    cfg = cfg or EmdConfig()
    x = trace.samples
    span = float(np.ptp(x))
    if span == 0:
        return EmdResult(np.zeros((0, x.size)), x.copy())
    ensemble = EEMD(
        trials=cfg.ensemble_size,
        noise_width=cfg.ensemble_noise_std * float(np.std(x)) / span,
        ext_EMD=_sifter(cfg),
        parallel=False,
    )
    ensemble.noise_seed(cfg.seed)
    imfs = np.asarray(ensemble.eemd(x, max_imf=_imf_cap(cfg, x.size)), dtype=float).reshape(-1, x.size)
    logger.debug("EEMD: %d members, %d IMFs", cfg.ensemble_size, imfs.shape[0])
    return EmdResult(imfs, x - imfs.sum(axis=0))


@dataclass
class EemdReport:
    """Gate outcome over the EEMD IMFs in ascending frequency order."""

    entropies: list[float]
    mask: list[bool]

    @property
    def retained(self) -> int:
        return sum(self.mask)


def eemd_denoise(
    trace: Trace,
    cfg: EmdConfig | None = None,
    gate_cfg: DenoiseConfig | None = None,
    keep_residue: bool = False,
) -> tuple[Trace, EemdReport]:
    """De-noise with EEMD and the sample-entropy gate.

    IMFs are gated in ascending frequency order, so the prefix strategy keeps
    the smooth end of the decomposition. The output is the sum of the
    retained IMFs, plus the ensemble residue when ``keep_residue`` is set. A
    trace without IMFs is returned unchanged.

    Raises:
        EmptySelection: If every IMF is rejected
    """
    gate_cfg = gate_cfg or DenoiseConfig()
    result = eemd(trace, cfg)
    imfs = result.ascending()
    if len(imfs) == 0:
        return trace.with_samples(trace.samples.copy()), EemdReport([], [])
    entropies = mode_entropies([trace.with_samples(imf) for imf in imfs], gate_cfg.sampen)
    mask = gate(entropies, gate_cfg.threshold, gate_cfg.strategy)
    output = imfs[np.array(mask)].sum(axis=0)
    if keep_residue:
        output = output + result.residue
    return trace.with_samples(output), EemdReport(entropies, mask)


@dataclass
class DwtConfig:
    """Wavelet thresholding parameters.

    Attributes:
        wavelet: PyWavelets wavelet name
        levels: Decomposition levels
        mode: "soft" or "hard" thresholding
        threshold_scale: Multiplier on the universal threshold; 0 disables thresholding
    """

    wavelet: str = "db4"
    levels: int = 4
    mode: str = "soft"
    threshold_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise InvalidInput(f"levels must be at least 1, got {self.levels}")
        if self.mode not in THRESHOLD_MODES:
            raise InvalidInput(f"threshold mode must be soft or hard, got {self.mode!r}")
        if not self.threshold_scale >= 0:
            raise InvalidInput(f"threshold_scale must be non-negative, got {self.threshold_scale}")
        if self.wavelet not in pywt.wavelist(kind="discrete"):
            raise InvalidInput(f"unknown discrete wavelet {self.wavelet!r}")


def universal_threshold(finest: np.ndarray, n: int) -> float:
    """sigma * sqrt(2 ln n) with sigma estimated from the finest detail coefficients."""
    sigma = float(np.median(np.abs(finest))) / MAD_TO_SIGMA
    return sigma * math.sqrt(2.0 * math.log(n))


def dwt_denoise(trace: Trace, cfg: DwtConfig | None = None) -> Trace:
    """Threshold the detail coefficients of a multi-level DWT.

    Args:
        trace: Input trace
        cfg: Wavelet parameters

    Returns:
        Reconstructed trace of the input length

    Raises:
        InvalidInput: If ``cfg.levels`` exceeds log2 of the trace length
    """
    cfg = cfg or DwtConfig()
    n = len(trace)
    if cfg.levels > math.log2(n):
        raise InvalidInput(f"{cfg.levels} levels exceed log2({n})")
    coeffs = pywt.wavedec(trace.samples, cfg.wavelet, mode="symmetric", level=cfg.levels)
    threshold = cfg.threshold_scale * universal_threshold(coeffs[-1], n)
    logger.debug("DWT threshold %.4g (%s, %d levels)", threshold, cfg.wavelet, cfg.levels)
    denoised = [coeffs[0]] + [pywt.threshold(c, threshold, mode=cfg.mode) for c in coeffs[1:]]
    return trace.with_samples(pywt.waverec(denoised, cfg.wavelet, mode="symmetric")[:n])
