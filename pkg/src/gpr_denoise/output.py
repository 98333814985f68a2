"""Terminal summaries with ANSI colors."""

import math
import sys

from .comparison import ComparisonRow
from .denoise import DenoiseReport


class ColorFormatter:
    """Handles colored terminal output with configurable color mode."""

    # ANSI escape codes
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BOLD = "\033[1m"
    RESET = "\033[0m"

    def __init__(self, mode: str = "auto") -> None:
        """Initialize formatter with color mode.

        Args:
            mode: "auto", "always", or "never"
        """
        if mode == "always":
            self.use_colors = True
        elif mode == "never":
            self.use_colors = False
        else:
            self.use_colors = sys.stdout.isatty()

    def _wrap(self, code: str, text: str) -> str:
        if not self.use_colors:
            return text
        return f"{code}{text}{self.RESET}"

    def red(self, text: str) -> str:
        return self._wrap(self.RED, text)

    def green(self, text: str) -> str:
        return self._wrap(self.GREEN, text)

    def yellow(self, text: str) -> str:
        return self._wrap(self.YELLOW, text)

    def bold(self, text: str) -> str:
        return self._wrap(self.BOLD, text)


def format_db(value: float | None) -> str:
    """Format an SNR in dB, spelling out infinite and missing values."""
    if value is None:
        return "n/a"
    if math.isnan(value):
        return "failed"
    if math.isinf(value):
        return "inf dB"
    return f"{value:.3f} dB"


class SummaryPrinter:
    """Prints one-line command summaries to standard output."""

    def __init__(self, formatter: ColorFormatter) -> None:
        self.fmt = formatter

    def print_success(self, message: str) -> None:
        print(self.fmt.green(message))

    def print_snr(self, label: str, value: float) -> None:
        print(f"{label}: {self.fmt.bold(format_db(value))}")

    def print_modes(self, omegas: list[float], iterations: int, converged: bool) -> None:
        """Print decomposition center frequencies and convergence."""
        freqs = ", ".join(f"{w:.2f}" for w in omegas)
        status = self.fmt.green("converged") if converged else self.fmt.yellow("not converged")
        print(f"{len(omegas)} modes at [{freqs}] MHz, {iterations} iterations, {status}")

    def print_denoise(self, reports: list[DenoiseReport], snr_before: float | None, snr_after: float | None) -> None:
        """Print a de-noising batch summary."""
        passed = sum(1 for r in reports if r.error)
        retained = sum(r.retained for r in reports) / len(reports)
        line = f"De-noised {len(reports)} traces, {retained:.2f} modes retained on average"
        if passed:
            line += ", " + self.fmt.yellow(f"{passed} passed through unchanged")
        print(line)
        if snr_before is not None:
            print(f"SNR {format_db(snr_before)} -> {self.fmt.bold(format_db(snr_after))}")

    def print_comparison(self, rows: list[ComparisonRow]) -> None:
        """Print one line per compared method."""
        for row in rows:
            result = format_db(row.output_snr_db)
            if row.error:
                result = self.fmt.red(f"{result} ({row.error})")
            else:
                result = self.fmt.bold(result)
            print(f"{row.method:5} {format_db(row.input_snr_db)} -> {result} in {row.runtime_ms:.0f} ms")
