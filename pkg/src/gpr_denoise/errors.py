"""Exception hierarchy for gpr-denoise."""


class GprError(Exception):
    """Base class for all library errors."""


class DataError(GprError):
    """Input data or files cannot be used."""


class InvalidInput(DataError):
    """Argument violates an operation precondition."""


class InvalidModel(DataError):
    """Forward model is not simulatable (stability, geometry)."""


class CorruptFile(DataError):
    """Binary radargram file is malformed or truncated."""


class UnsupportedVersion(DataError):
    """Binary radargram file has an unknown format version."""

    def __init__(self, version: int) -> None:
        super().__init__(f"unsupported format version {version}")
        self.version = version


class ParseError(DataError):
    """Text input (CSV, model file) cannot be parsed.

    Attributes:
        row: 1-based row or line number, if known
        column: 1-based column number, if known
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None) -> None:
        location = ""
        if row is not None:
            location = f"row {row}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.row = row
        self.column = column


class NumericalError(GprError):
    """Computation finished without a usable result."""


class SampleEntropyUndefined(NumericalError):
    """No template pairs of length m match within tolerance."""


class EmptySelection(NumericalError):
    """Entropy gate rejected every mode.

    Attributes:
        entropies: Per-mode sample entropies that were gated
        threshold: Threshold every entropy exceeded
        decomposition: Decomposition the entropies came from, when known
    """

    def __init__(self, entropies: list[float], threshold: float) -> None:
        formatted = ", ".join(f"{e:.3f}" for e in entropies)
        super().__init__(f"all modes rejected by threshold {threshold} (entropies: {formatted})")
        self.entropies = list(entropies)
        self.threshold = threshold
        self.decomposition = None
