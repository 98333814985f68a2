"""De-noising by VMD with a sample-entropy mode gate.

A trace is decomposed into modes ordered by center frequency, each mode is
scored by its sample entropy and the retained modes are summed. Regular
(low-entropy) modes carry the reflections; noise modes score high.

By default one mode is extracted and kept while its entropy is at most 1.0.
Narrow modes score about 0.5 and broadband noise above 2. Below about -10 dB
every narrow mode scores about 0.5 whether it holds a reflection or not, so
the gate cannot rank K > 1 modes there.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .entropy import SampEnParams, sample_entropy
from .errors import EmptySelection, InvalidInput, SampleEntropyUndefined
from .evaluation import snr
from .executor import map_ordered
from .signal import Radargram, Trace
from .vmd import VmdConfig, VmdResult, decompose

logger = logging.getLogger(__name__)

STRATEGIES = ("prefix", "per-mode")
DEFAULT_THRESHOLD = 1.0
DEFAULT_MODES = 1


def pipeline_vmd(modes: int = DEFAULT_MODES, **overrides) -> VmdConfig:
    """Decomposition settings used for de-noising.

    A single mode starts at 0 Hz, so its first iterate is the low-pass of
    :func:`~gpr_denoise.vmd.single_mode_first_step` and it then climbs onto
    the dominant reflection band. Several modes keep the spread start.

    Args:
        modes: Number of modes K
        **overrides: Further :class:`VmdConfig` fields

    Returns:
        Solver parameters
    """
    overrides.setdefault("omega_init", "zero" if modes == 1 else "uniform")
    return VmdConfig(modes=modes, **overrides)


@dataclass
class DenoiseConfig:
    """De-noising pipeline parameters.

    Attributes:
        vmd: Decomposition parameters
        sampen: Sample entropy parameters
        threshold: Entropy threshold R; modes scoring at or below it are kept
        strategy: "prefix" keeps the leading run of modes below R,
            "per-mode" keeps every mode below R
    """

    vmd: VmdConfig = field(default_factory=pipeline_vmd)
    sampen: SampEnParams = field(default_factory=SampEnParams)
    threshold: float = DEFAULT_THRESHOLD
    strategy: str = "prefix"

    def __post_init__(self) -> None:
        if not self.threshold > 0:
            raise InvalidInput(f"threshold must be positive, got {self.threshold}")
        if self.strategy not in STRATEGIES:
            raise InvalidInput(f"strategy must be one of {', '.join(STRATEGIES)}, got {self.strategy!r}")


@dataclass
class DenoiseReport:
    """Per-trace outcome of the gate.

    Attributes:
        entropies: Sample entropy per mode, +inf where undefined
        mask: Retained flag per mode
        omegas: Mode center frequencies in MHz
        iterations: Decomposition iterations
        converged: Decomposition convergence flag
        snr_before: Input SNR in dB when a clean reference was given
        snr_after: Output SNR in dB when a clean reference was given
        error: Message when the trace was passed through unchanged
    """

    entropies: list[float]
    mask: list[bool]
    omegas: list[float]
    iterations: int
    converged: bool
    snr_before: float | None = None
    snr_after: float | None = None
    error: str | None = None

    @property
    def retained(self) -> int:
        return sum(self.mask)


def gate(entropies: Sequence[float], threshold: float, strategy: str = "prefix") -> list[bool]:
    """Select modes whose entropy does not exceed ``threshold``.

    Args:
        entropies: Per-mode entropies in ascending center-frequency order
        threshold: Entropy threshold
        strategy: "prefix" or "per-mode"

    Returns:
        Retained mask, same length as ``entropies``

    Raises:
        EmptySelection: If no mode is retained
        InvalidInput: On an unknown strategy
    """
    passing = [e <= threshold for e in entropies]
    if strategy == "per-mode":
        mask = passing
    elif strategy == "prefix":
        mask = []
        for ok in passing:
            if not ok:
                break
            mask.append(True)
        mask += [False] * (len(passing) - len(mask))
    else:
        raise InvalidInput(f"unknown strategy {strategy!r}")
    if not any(mask):
        raise EmptySelection(list(entropies), threshold)
    return mask


def mode_entropies(modes: Sequence[Trace], params: SampEnParams) -> list[float]:
    """Sample entropy of each mode; undefined entropies count as +inf."""
    entropies = []
    for index, mode in enumerate(modes):
        try:
            entropies.append(sample_entropy(mode.samples, params))
        except SampleEntropyUndefined as e:
            logger.debug("mode %d: %s", index, e)
            entropies.append(math.inf)
    return entropies


def select_modes(result: VmdResult, cfg: DenoiseConfig) -> tuple[list[bool], list[float]]:
    """Gate the modes of a decomposition.

    Args:
        result: Decomposition with modes in ascending frequency order
        cfg: Pipeline parameters

    Returns:
        (mask, entropies)

    Raises:
        EmptySelection: If every mode is rejected
    """
    entropies = mode_entropies(result.modes, cfg.sampen)
    return gate(entropies, cfg.threshold, cfg.strategy), entropies


def _snr_db(clean: Trace | None, test: Trace) -> float | None:
    if clean is None or not np.any(clean.samples):
        return None
    return snr(clean, test).db


def _report(result: VmdResult, entropies: list[float], mask: list[bool], **extra) -> DenoiseReport:
    return DenoiseReport(
        entropies=entropies,
        mask=mask,
        omegas=[float(w) for w in result.omegas],
        iterations=result.iterations,
        converged=result.converged,
        **extra,
    )


def denoise_trace(trace: Trace, cfg: DenoiseConfig, clean: Trace | None = None) -> tuple[Trace, DenoiseReport]:
    """De-noise a single trace.

    Args:
        trace: Noisy trace
        cfg: Pipeline parameters
        clean: Optional clean reference for SNR reporting

    Returns:
        (sum of retained modes, report)

    Raises:
        EmptySelection: If every mode is rejected
    """
    result = decompose(trace, cfg.vmd)
    try:
        mask, entropies = select_modes(result, cfg)
    except EmptySelection as e:
        e.decomposition = result
        raise
    output = trace.with_samples(result.mode_array[np.array(mask)].sum(axis=0))
    report = _report(
        result, entropies, mask,
        snr_before=_snr_db(clean, trace),
        snr_after=_snr_db(clean, output),
    )
    logger.debug("retained %d of %d modes (entropies %s)", report.retained, len(mask), entropies)
    return output, report


def _denoise_item(cfg: DenoiseConfig, item: tuple[int, Trace, Trace | None]) -> tuple[np.ndarray, DenoiseReport]:
    index, trace, clean = item
    try:
        output, report = denoise_trace(trace, cfg, clean)
    except EmptySelection as e:
        logger.warning("trace %d: %s; passing it through unchanged", index, e)
        before = _snr_db(clean, trace)
        report = _report(
            e.decomposition, e.entropies, [False] * len(e.entropies),
            snr_before=before, snr_after=before, error=str(e),
        )
        return trace.samples, report
    return output.samples, report


def denoise_radargram(
    radargram: Radargram,
    cfg: DenoiseConfig,
    clean: Radargram | None = None,
    jobs: int = 1,
) -> tuple[Radargram, list[DenoiseReport]]:
    """De-noise every trace of a radargram independently.

    A trace whose modes are all rejected is copied through unchanged and its
    report carries the error; the batch always completes.

    Args:
        radargram: Noisy radargram with at least one trace
        cfg: Pipeline parameters shared by all traces
        clean: Optional clean radargram of the same shape for SNR reporting
        jobs: Maximum number of traces processed concurrently

    Returns:
        (de-noised radargram with the input geometry, reports in trace order)

    Raises:
        InvalidInput: If the radargram is empty or the reference shape differs
    """
    radargram.require_traces()
    if clean is not None and clean.data.shape != radargram.data.shape:
        raise InvalidInput(f"clean reference shape {clean.data.shape} differs from {radargram.data.shape}")
    items = [
        (i, radargram.trace(i), clean.trace(i) if clean is not None else None)
        for i in range(radargram.n_traces)
    ]
    outputs = map_ordered(partial(_denoise_item, cfg), items, jobs)
    data = np.stack([samples for samples, _ in outputs])
    reports = [report for _, report in outputs]
    failed = sum(1 for r in reports if r.error)
    if failed:
        logger.warning("%d of %d traces passed through unchanged", failed, len(reports))
    return radargram.with_data(data), reports
