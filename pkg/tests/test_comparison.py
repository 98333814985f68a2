"""Tests for the method comparison harness."""

import csv
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np

from gpr_denoise.baselines import DwtConfig, EmdConfig
from gpr_denoise.comparison import TABLE_COLUMNS, ComparisonRow, MethodConfigs, compare_methods, write_table
from gpr_denoise.denoise import DenoiseConfig
from gpr_denoise.errors import InvalidInput
from gpr_denoise.evaluation import add_noise
from gpr_denoise.signal import Radargram
from gpr_denoise.synth import RickerSpec, ricker


class TestCompareMethods(unittest.TestCase):
    """Tests for compare_methods."""

    def setUp(self):
        self.clean = ricker(RickerSpec())
        self.noisy = add_noise(self.clean, -13.769, seed=7)
        self.configs = MethodConfigs(
            vmd=DenoiseConfig(threshold=1.0),
            emd=EmdConfig(ensemble_size=4),
        )

    def test_vmd_only(self):
        """Test a single method gives a single improving row."""
        rows = compare_methods(self.clean, self.noisy, {"vmd"}, self.configs, seed=7)

        self.assertEqual(len(rows), 1)
        row = rows[0]
        self.assertEqual(row.method, "vmd")
        self.assertEqual(row.seed, 7)
        self.assertAlmostEqual(row.input_snr_db, -13.769, delta=0.01)
        self.assertGreater(row.output_snr_db, row.input_snr_db)
        self.assertIsNone(row.error)
        self.assertGreaterEqual(row.runtime_ms, 0.0)

    def test_empty_method_set(self):
        """Test no methods give an empty table."""
        self.assertEqual(compare_methods(self.clean, self.noisy, set(), self.configs), [])

    def test_rows_sorted_by_method(self):
        """Test rows come out in method-name order."""
        rows = compare_methods(self.clean, self.noisy, ["vmd", "eemd", "dwt"], self.configs)

        self.assertEqual([r.method for r in rows], ["dwt", "eemd", "vmd"])
        for row in rows:
            self.assertTrue(math.isfinite(row.output_snr_db))

    def test_vmd_ranks_first_on_heavy_noise(self):
        """Test VMD scores above both baselines on the -13.769 dB wavelet."""
        noisy = add_noise(self.clean, -13.769, seed=1)
        configs = MethodConfigs(emd=EmdConfig(ensemble_size=20))

        rows = compare_methods(self.clean, noisy, ["dwt", "eemd", "vmd"], configs, seed=1)

        scores = {row.method: row.output_snr_db for row in rows}
        self.assertGreater(scores["vmd"], scores["dwt"])
        self.assertGreater(scores["vmd"], scores["eemd"])
        self.assertGreaterEqual(scores["vmd"] - rows[0].input_snr_db, 10.0)

    def test_unknown_method(self):
        """Test an unknown method name is rejected."""
        with self.assertRaises(InvalidInput):
            compare_methods(self.clean, self.noisy, ["fft"], self.configs)

    def test_failure_is_recorded(self):
        """Test a failing method gets a NaN row and a logged warning."""
        configs = MethodConfigs(dwt=DwtConfig(levels=20))

        with self.assertLogs("gpr_denoise.comparison", level="WARNING"):
            rows = compare_methods(self.clean, self.noisy, ["dwt"], configs)

        self.assertTrue(math.isnan(rows[0].output_snr_db))
        self.assertIn("levels", rows[0].error)

    def test_radargram(self):
        """Test methods run trace by trace on a radargram."""
        clean = Radargram(np.stack([self.clean.samples, np.roll(self.clean.samples, 40)]), self.clean.dt, 0.5)
        noisy = add_noise(clean, -5.0, seed=1)

        rows = compare_methods(clean, noisy, ["dwt", "vmd"], self.configs, jobs=2)

        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertGreater(row.output_snr_db, row.input_snr_db)


class TestWriteTable(unittest.TestCase):
    """Tests for write_table."""

    def test_csv_layout(self):
        """Test the header and formatting of the table."""
        rows = [
            ComparisonRow("dwt", 3, -13.769, -2.5, 12.34),
            ComparisonRow("vmd", None, -13.769, math.nan, 1.0, error="failed"),
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "table.csv"

            write_table(rows, path)

            with open(path, newline="") as f:
                lines = list(csv.reader(f))

        self.assertEqual(tuple(lines[0]), TABLE_COLUMNS)
        self.assertEqual(lines[1], ["dwt", "3", "-13.7690", "-2.5000", "12.3"])
        self.assertEqual(lines[2], ["vmd", "", "-13.7690", "nan", "1.0"])


if __name__ == "__main__":
    unittest.main()
