"""Radargram files, CSV exchange and grayscale B-scan rendering.

Binary radargram layout (little-endian)::

    offset  size  field
    0       4     magic b"GPRD"
    4       2     format version (1)
    6       2     reserved, zero
    8       4     trace count
    12      4     samples per trace
    16      8     dt in ns (float64)
    24      8     dx in m (float64)
    32      ...   trace-major float64 samples

The start time t0 is not stored; read radargrams start at 0 ns.
"""

import csv
import logging
import os
import struct
import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import IO

import numpy as np

from .errors import CorruptFile, InvalidInput, ParseError, UnsupportedVersion
from .signal import Radargram

logger = logging.getLogger(__name__)

MAGIC = b"GPRD"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sHHIIdd")
SAMPLE_DTYPE = np.dtype("<f8")
DEFAULT_CLIP_PERCENTILE = 99.0


@contextmanager
def atomic_output(path: str | Path, mode: str = "wb") -> Iterator[IO]:
    """Open a temporary file next to ``path`` and move it into place on success.

    On any exception the temporary file is removed and ``path`` is untouched.
    """
    path = Path(path)
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        if "b" in mode:
            handle = os.fdopen(fd, mode)
        else:
            handle = os.fdopen(fd, mode, encoding="utf-8", newline="")
        with handle:
            yield handle
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def write_radargram(radargram: Radargram, path: str | Path) -> None:
    """Write a radargram in the binary format."""
    header = HEADER.pack(
        MAGIC, FORMAT_VERSION, 0,
        radargram.n_traces, radargram.n_samples,
        radargram.dt, radargram.dx,
    )
    with atomic_output(path) as f:
        f.write(header)
        f.write(np.ascontiguousarray(radargram.data, dtype=SAMPLE_DTYPE).tobytes())
    logger.debug("Wrote %d traces x %d samples to %s", radargram.n_traces, radargram.n_samples, path)


def read_radargram(path: str | Path) -> Radargram:
    """Read a radargram from the binary format.

    Raises:
        CorruptFile: On a bad magic, truncated or oversized payload, or invalid header values
        UnsupportedVersion: On an unknown format version
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise CorruptFile(f"{path}: file shorter than the {HEADER.size}-byte header")
    magic, version, _, traces, samples, dt, dx = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptFile(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(version)
    expected = HEADER.size + traces * samples * SAMPLE_DTYPE.itemsize
    if len(raw) != expected:
        raise CorruptFile(f"{path}: expected {expected} bytes for {traces}x{samples} samples, got {len(raw)}")
    if traces * samples:
        data = np.frombuffer(raw, dtype=SAMPLE_DTYPE, offset=HEADER.size).reshape(traces, samples)
    else:
        data = np.zeros((traces, samples))
    try:
        return Radargram(data.astype(float), dt, dx)
    except InvalidInput as e:
        raise CorruptFile(f"{path}: {e}") from None


def import_csv(path: str | Path, dt: float, dx: float) -> Radargram:
    """Read a CSV whose rows are time samples and columns are traces.

    Raises:
        ParseError: On ragged rows, non-numeric cells or an empty file
    """
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if not row:
                continue
            if rows and len(row) != len(rows[0]):
                raise ParseError(f"expected {len(rows[0])} columns, got {len(row)}", row=row_number)
            values = []
            for column, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(f"non-numeric value {cell!r}", row=row_number, column=column) from None
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return Radargram(np.array(rows).T, dt, dx)


def export_csv(radargram: Radargram, path: str | Path) -> None:
    """Write samples as rows and traces as columns with 17 significant digits."""
    with atomic_output(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in radargram.data.T:
            writer.writerow(format(value, ".17g") for value in row)


def bscan_pixels(radargram: Radargram, clip_percentile: float = DEFAULT_CLIP_PERCENTILE) -> np.ndarray:
    """Map amplitudes to 8-bit gray levels, one row per time sample.

    Amplitudes are clipped symmetrically at the given percentile of |a| and
    mapped linearly so that -clip is black, zero is mid-gray and +clip white.
    When the percentile is zero the largest amplitude is used instead.

    Returns:
        uint8 array of shape (samples, traces)
    """
    radargram.require_traces()
    if not 0 < clip_percentile <= 100:
        raise InvalidInput(f"clip percentile must be in (0, 100], got {clip_percentile}")
    magnitude = np.abs(radargram.data)
    clip = float(np.percentile(magnitude, clip_percentile))
    if clip == 0:
        clip = float(magnitude.max())
    if clip == 0:
        return np.full((radargram.n_samples, radargram.n_traces), 128, dtype=np.uint8)
    scaled = (np.clip(radargram.data, -clip, clip) / clip + 1.0) / 2.0 * 255.0
    return np.rint(scaled).astype(np.uint8).T


def render_bscan(radargram: Radargram, path: str | Path, clip_percentile: float = DEFAULT_CLIP_PERCENTILE) -> None:
    """Write a binary PGM image: x is the trace index, time increases downward."""
    pixels = bscan_pixels(radargram, clip_percentile)
    height, width = pixels.shape
    with atomic_output(path) as f:
        f.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary PGM written by render_bscan.

    Raises:
        CorruptFile: If the file is not an 8-bit P5 image
    """
    parts = Path(path).read_bytes().split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise CorruptFile(f"{path}: not an 8-bit binary PGM")
    try:
        width, height = (int(v) for v in parts[1].split())
    except ValueError:
        raise CorruptFile(f"{path}: bad image size {parts[1]!r}") from None
    pixels = np.frombuffer(parts[3], dtype=np.uint8)
    if pixels.size != width * height:
        raise CorruptFile(f"{path}: expected {width * height} pixels, got {pixels.size}")
    return pixels.reshape(height, width)


def load_radargram(path: str | Path, dt: float | None = None, dx: float = 1.0) -> Radargram:
    """Read a radargram by extension: ``.csv`` needs ``dt``, everything else is binary."""
    if Path(path).suffix.lower() == ".csv":
        if dt is None:
            raise InvalidInput(f"{path}: CSV input needs a sampling interval (--dt)")
        return import_csv(path, dt, dx)
    return read_radargram(path)


def save_radargram(radargram: Radargram, path: str | Path) -> None:
    """Write a radargram by extension: ``.csv`` or binary."""
    if Path(path).suffix.lower() == ".csv":
        export_csv(radargram, path)
    else:
        write_radargram(radargram, path)
