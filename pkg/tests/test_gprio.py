"""Tests for radargram files, CSV exchange and B-scan rendering."""

import struct
import tempfile
import unittest
from pathlib import Path

import numpy as np

from gpr_denoise.errors import CorruptFile, InvalidInput, ParseError, UnsupportedVersion
from gpr_denoise.gprio import (
    HEADER,
    atomic_output,
    bscan_pixels,
    export_csv,
    import_csv,
    load_radargram,
    read_pgm,
    read_radargram,
    render_bscan,
    save_radargram,
    write_radargram,
)
from gpr_denoise.signal import Radargram


class GprioTestCase(unittest.TestCase):
    """Base class providing a temporary directory."""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmpdir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()


class TestBinaryFormat(GprioTestCase):
    """Tests for the binary radargram format."""

    def test_round_trip_is_bit_exact(self):
        """Test a field-scale radargram survives a round trip unchanged."""
        data = np.random.default_rng(0).standard_normal((256, 400))
        radargram = Radargram(data, dt=0.125, dx=0.5)
        path = self.tmpdir / "r.gprd"

        write_radargram(radargram, path)
        restored = read_radargram(path)

        self.assertEqual(restored.data.tobytes(), data.tobytes())
        self.assertEqual(restored.dt, 0.125)
        self.assertEqual(restored.dx, 0.5)

    def test_header_layout(self):
        """Test the 32-byte little-endian header."""
        path = self.tmpdir / "r.gprd"

        write_radargram(Radargram(np.ones((3, 5)), dt=0.5, dx=0.25), path)
        raw = path.read_bytes()

        self.assertEqual(HEADER.size, 32)
        self.assertEqual(raw[:4], b"GPRD")
        self.assertEqual(struct.unpack_from("<HHIIdd", raw, 4), (1, 0, 3, 5, 0.5, 0.25))
        self.assertEqual(len(raw), 32 + 3 * 5 * 8)

    def test_header_only_file(self):
        """Test zero traces read back as an empty radargram."""
        path = self.tmpdir / "empty.gprd"
        path.write_bytes(HEADER.pack(b"GPRD", 1, 0, 0, 400, 0.125, 0.5))

        radargram = read_radargram(path)

        self.assertEqual(radargram.n_traces, 0)

    def test_truncated_payload(self):
        """Test a short payload is corrupt."""
        path = self.tmpdir / "r.gprd"
        write_radargram(Radargram(np.ones((2, 4)), 1.0, 1.0), path)
        path.write_bytes(path.read_bytes()[:-3])

        with self.assertRaises(CorruptFile):
            read_radargram(path)

    def test_truncated_header(self):
        """Test a file shorter than the header is corrupt."""
        path = self.tmpdir / "r.gprd"
        path.write_bytes(b"GPRD\x01")

        with self.assertRaises(CorruptFile):
            read_radargram(path)

    def test_bad_magic(self):
        """Test a foreign file is corrupt."""
        path = self.tmpdir / "r.gprd"
        path.write_bytes(HEADER.pack(b"SEGY", 1, 0, 0, 4, 1.0, 1.0))

        with self.assertRaises(CorruptFile):
            read_radargram(path)

    def test_unknown_version(self):
        """Test a newer version is reported as unsupported."""
        path = self.tmpdir / "r.gprd"
        path.write_bytes(HEADER.pack(b"GPRD", 7, 0, 0, 4, 1.0, 1.0))

        with self.assertRaises(UnsupportedVersion) as ctx:
            read_radargram(path)

        self.assertEqual(ctx.exception.version, 7)

    def test_invalid_header_values(self):
        """Test a non-positive dt in the header is corrupt."""
        path = self.tmpdir / "r.gprd"
        path.write_bytes(HEADER.pack(b"GPRD", 1, 0, 0, 4, -1.0, 1.0))

        with self.assertRaises(CorruptFile):
            read_radargram(path)


class TestCsv(GprioTestCase):
    """Tests for CSV import and export."""

    def test_orientation(self):
        """Test rows are samples and columns are traces."""
        path = self.tmpdir / "r.csv"
        path.write_text("1,2\n3,4\n")

        radargram = import_csv(path, dt=1.0, dx=0.5)

        np.testing.assert_array_equal(radargram.trace(0).samples, [1.0, 3.0])
        np.testing.assert_array_equal(radargram.trace(1).samples, [2.0, 4.0])

    def test_round_trip(self):
        """Test 17 significant digits preserve values exactly."""
        data = np.random.default_rng(1).standard_normal((3, 7)) * 1e-3
        path = self.tmpdir / "r.csv"

        export_csv(Radargram(data, 0.5, 1.0), path)
        restored = import_csv(path, 0.5, 1.0)

        np.testing.assert_array_equal(restored.data, data)

    def test_ragged_rows(self):
        """Test a short row reports its row number."""
        path = self.tmpdir / "r.csv"
        path.write_text("1,2\n3\n")

        with self.assertRaises(ParseError) as ctx:
            import_csv(path, 1.0, 1.0)

        self.assertEqual(ctx.exception.row, 2)

    def test_non_numeric_cell(self):
        """Test a bad cell reports row and column."""
        path = self.tmpdir / "r.csv"
        path.write_text("1,2\n3,x\n")

        with self.assertRaises(ParseError) as ctx:
            import_csv(path, 1.0, 1.0)

        self.assertEqual((ctx.exception.row, ctx.exception.column), (2, 2))
        self.assertIn("row 2, column 2", str(ctx.exception))

    def test_empty_file(self):
        """Test a file without rows is rejected."""
        path = self.tmpdir / "r.csv"
        path.write_text("")

        with self.assertRaises(ParseError):
            import_csv(path, 1.0, 1.0)


class TestLoadSave(GprioTestCase):
    """Tests for extension-based dispatch."""

    def test_csv_needs_dt(self):
        """Test CSV input requires a sampling interval."""
        path = self.tmpdir / "r.csv"
        path.write_text("1,2\n3,4\n")

        with self.assertRaises(InvalidInput):
            load_radargram(path)
        self.assertEqual(load_radargram(path, dt=0.5).dt, 0.5)

    def test_dispatch(self):
        """Test the extension selects the format."""
        radargram = Radargram(np.arange(6.0).reshape(2, 3), 1.0, 1.0)

        save_radargram(radargram, self.tmpdir / "r.csv")
        save_radargram(radargram, self.tmpdir / "r.gprd")

        self.assertEqual((self.tmpdir / "r.csv").read_text().splitlines()[0], "0,3")
        np.testing.assert_array_equal(load_radargram(self.tmpdir / "r.gprd").data, radargram.data)


class TestAtomicOutput(GprioTestCase):
    """Tests for atomic_output."""

    def test_failure_leaves_no_file(self):
        """Test an exception removes the partial output."""
        path = self.tmpdir / "out.gprd"

        with self.assertRaises(RuntimeError):
            with atomic_output(path) as f:
                f.write(b"partial")
                raise RuntimeError("boom")

        self.assertEqual(list(self.tmpdir.iterdir()), [])

    def test_failure_keeps_previous_file(self):
        """Test an existing file survives a failed rewrite."""
        path = self.tmpdir / "out.csv"
        path.write_text("old")

        with self.assertRaises(RuntimeError):
            with atomic_output(path, "w") as f:
                f.write("new")
                raise RuntimeError("boom")

        self.assertEqual(path.read_text(), "old")


class TestBscan(GprioTestCase):
    """Tests for B-scan rendering."""

    def test_zero_radargram_is_mid_gray(self):
        """Test silence renders uniform mid-gray."""
        pixels = bscan_pixels(Radargram(np.zeros((4, 6)), 1.0, 1.0))

        self.assertTrue(np.all(pixels == 128))

    def test_single_spike(self):
        """Test one positive sample is the only white pixel."""
        data = np.zeros((5, 8))
        data[2, 6] = 3.0

        pixels = bscan_pixels(Radargram(data, 1.0, 1.0), 99.0)

        self.assertEqual(pixels.shape, (8, 5))
        self.assertEqual(pixels[6, 2], 255)
        self.assertEqual(int(np.count_nonzero(pixels == 255)), 1)

    def test_linear_mapping(self):
        """Test -clip maps to black and +clip to white."""
        data = np.array([[-1.0, 0.0, 1.0]])

        pixels = bscan_pixels(Radargram(data, 1.0, 1.0), 100.0)

        self.assertEqual(pixels[:, 0].tolist(), [0, 128, 255])

    def test_pgm_file(self):
        """Test the image file dimensions and determinism."""
        radargram = Radargram(np.random.default_rng(2).standard_normal((7, 11)), 1.0, 1.0)
        first = self.tmpdir / "a.pgm"
        second = self.tmpdir / "b.pgm"

        render_bscan(radargram, first)
        render_bscan(radargram, second)

        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertTrue(first.read_bytes().startswith(b"P5\n7 11\n255\n"))
        self.assertEqual(read_pgm(first).shape, (11, 7))

    def test_empty_radargram(self):
        """Test an empty radargram cannot be rendered."""
        with self.assertRaises(InvalidInput):
            bscan_pixels(Radargram(np.zeros((0, 4)), 1.0, 1.0))

    def test_bad_percentile(self):
        """Test the clip percentile must be in (0, 100]."""
        with self.assertRaises(InvalidInput):
            bscan_pixels(Radargram(np.ones((2, 2)), 1.0, 1.0), 0.0)

    def test_read_pgm_rejects_other_files(self):
        """Test a non-PGM file is corrupt."""
        path = self.tmpdir / "x.pgm"
        path.write_bytes(b"P2\n1 1\n255\n0")

        with self.assertRaises(CorruptFile):
            read_pgm(path)


if __name__ == "__main__":
    unittest.main()
