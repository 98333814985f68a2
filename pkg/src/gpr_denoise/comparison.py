"""Side-by-side scoring of VMD, EEMD and wavelet de-noising against a clean reference."""

import csv
import logging
import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import DwtConfig, EmdConfig, dwt_denoise, eemd_denoise
from .denoise import DenoiseConfig, denoise_radargram, denoise_trace
from .errors import EmptySelection, GprError, InvalidInput
from .evaluation import snr
from .executor import map_ordered
from .gprio import atomic_output
from .signal import Radargram, Trace

logger = logging.getLogger(__name__)

METHODS = ("dwt", "eemd", "vmd")
TABLE_COLUMNS = ("method", "seed", "input_snr_db", "output_snr_db", "runtime_ms")


@dataclass
class MethodConfigs:
    """Parameters of each compared method."""

    vmd: DenoiseConfig = field(default_factory=DenoiseConfig)
    emd: EmdConfig = field(default_factory=EmdConfig)
    dwt: DwtConfig = field(default_factory=DwtConfig)


@dataclass
class ComparisonRow:
    """One method's score.

    Attributes:
        method: Method name
        seed: Noise seed of the input, if known
        input_snr_db: SNR of the noisy input
        output_snr_db: SNR of the de-noised output, NaN when the method failed
        runtime_ms: Wall-clock time of the method
        error: Failure message
    """

    method: str
    seed: int | None
    input_snr_db: float
    output_snr_db: float
    runtime_ms: float
    error: str | None = None


def _pass_through_on_empty(func: Callable[[Trace], Trace], trace: Trace) -> np.ndarray:
    try:
        return func(trace).samples
    except EmptySelection as e:
        logger.warning("%s; keeping the noisy trace", e)
        return trace.samples


def _per_trace(func: Callable[[Trace], Trace], radargram: Radargram, jobs: int) -> Radargram:
    rows = map_ordered(lambda t: _pass_through_on_empty(func, t), radargram.traces, jobs)
    return radargram.with_data(np.stack(rows))


def _method_runner(method: str, configs: MethodConfigs, jobs: int) -> Callable:
    def vmd_trace(t: Trace) -> Trace:
        return denoise_trace(t, configs.vmd)[0]

    def eemd_trace(t: Trace) -> Trace:
        return eemd_denoise(t, configs.emd, configs.vmd)[0]

    def dwt_trace(t: Trace) -> Trace:
        return dwt_denoise(t, configs.dwt)

    per_trace = {"vmd": vmd_trace, "eemd": eemd_trace, "dwt": dwt_trace}[method]

    def run(noisy: Trace | Radargram) -> Trace | Radargram:
        if isinstance(noisy, Trace):
            return per_trace(noisy)
        if method == "vmd":
            return denoise_radargram(noisy, configs.vmd, jobs=jobs)[0]
        return _per_trace(per_trace, noisy, jobs)

    return run


def compare_methods(
    clean: Trace | Radargram,
    noisy: Trace | Radargram,
    methods: Iterable[str],
    configs: MethodConfigs | None = None,
    seed: int | None = None,
    jobs: int = 1,
) -> list[ComparisonRow]:
    """De-noise ``noisy`` with each method and score it against ``clean``.

    A method that raises a library error gets a row with NaN output SNR and
    the message is logged. For radargrams, traces whose modes are all
    rejected pass through unchanged.

    Args:
        clean: Clean reference
        noisy: Noisy signal of the same shape
        methods: Subset of "dwt", "eemd", "vmd"
        configs: Method parameters
        seed: Noise seed reported in the table
        jobs: Maximum number of traces processed concurrently

    Returns:
        Rows ordered by method name

    Raises:
        InvalidInput: On an unknown method or mismatched shapes
    """
    configs = configs or MethodConfigs()
    selected = sorted(set(methods))
    unknown = [m for m in selected if m not in METHODS]
    if unknown:
        raise InvalidInput(f"unknown method(s): {', '.join(unknown)} (choose from {', '.join(METHODS)})")
    input_db = snr(clean, noisy).db

    rows = []
    for method in selected:
        started = time.perf_counter()
        try:
            output = _method_runner(method, configs, jobs)(noisy)
            output_db, error = snr(clean, output).db, None
        except GprError as e:
            logger.warning("%s failed: %s", method, e)
            output_db, error = math.nan, str(e)
        runtime_ms = (time.perf_counter() - started) * 1000.0
        logger.debug("%s: %.3f dB -> %.3f dB in %.0f ms", method, input_db, output_db, runtime_ms)
        rows.append(ComparisonRow(method, seed, input_db, output_db, runtime_ms, error))
    return rows


def write_table(rows: Iterable[ComparisonRow], path: str | Path) -> None:
    """Write comparison rows as CSV with a header line."""
    with atomic_output(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for row in rows:
            writer.writerow([
                row.method,
                "" if row.seed is None else row.seed,
                f"{row.input_snr_db:.4f}",
                f"{row.output_snr_db:.4f}",
                f"{row.runtime_ms:.1f}",
            ])
