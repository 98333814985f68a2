"""Tests for trace, radargram and spectrum primitives."""

import unittest

import numpy as np

from gpr_denoise.errors import InvalidInput
from gpr_denoise.signal import (
    Radargram,
    Spectrum,
    Trace,
    analytic_signal,
    extract_center,
    forward_spectrum,
    inverse_spectrum,
    mirror_extend,
)


class TestTrace(unittest.TestCase):
    """Tests for the Trace type."""

    def test_times_and_nyquist(self):
        """Test sample times start at t0 and Nyquist follows dt."""
        trace = Trace(np.zeros(4), dt=0.5, t0=2.0)

        np.testing.assert_allclose(trace.times, [2.0, 2.5, 3.0, 3.5])
        self.assertAlmostEqual(trace.nyquist, 1000.0)

    def test_rejects_short_trace(self):
        """Test a single sample is not a trace."""
        with self.assertRaises(InvalidInput):
            Trace(np.ones(1), dt=1.0)

    def test_rejects_non_finite_samples(self):
        """Test NaN samples are rejected."""
        with self.assertRaises(InvalidInput):
            Trace(np.array([0.0, np.nan, 1.0]), dt=1.0)

    def test_rejects_non_positive_dt(self):
        """Test the sampling interval must be positive."""
        with self.assertRaises(InvalidInput):
            Trace(np.ones(4), dt=0.0)

    def test_energy(self):
        """Test energy is the squared norm."""
        self.assertEqual(Trace(np.array([3.0, 4.0]), dt=1.0).energy(), 25.0)


class TestRadargram(unittest.TestCase):
    """Tests for the Radargram type."""

    def test_from_traces(self):
        """Test stacking traces keeps order and geometry."""
        traces = [Trace(np.full(5, float(i)), dt=0.25) for i in range(3)]
        radargram = Radargram.from_traces(traces, dx=0.1)

        self.assertEqual(radargram.n_traces, 3)
        self.assertEqual(radargram.n_samples, 5)
        self.assertEqual(radargram.dt, 0.25)
        np.testing.assert_array_equal(radargram.trace(2).samples, np.full(5, 2.0))

    def test_from_traces_rejects_mismatched_lengths(self):
        """Test traces of different length cannot be stacked."""
        with self.assertRaises(InvalidInput):
            Radargram.from_traces([Trace(np.ones(4), 1.0), Trace(np.ones(5), 1.0)], dx=1.0)

    def test_from_traces_rejects_mismatched_dt(self):
        """Test traces with different sampling cannot be stacked."""
        with self.assertRaises(InvalidInput):
            Radargram.from_traces([Trace(np.ones(4), 1.0), Trace(np.ones(4), 2.0)], dx=1.0)

    def test_empty_radargram(self):
        """Test a radargram may hold no traces but processing rejects it."""
        radargram = Radargram(np.zeros((0, 8)), dt=1.0, dx=1.0)

        self.assertEqual(radargram.n_traces, 0)
        with self.assertRaises(InvalidInput):
            radargram.require_traces()


class TestSpectrum(unittest.TestCase):
    """Tests for forward and inverse spectra."""

    def test_round_trip(self):
        """Test the inverse recovers the trace."""
        rng = np.random.default_rng(1)
        trace = Trace(rng.standard_normal(64), dt=0.5)

        restored = inverse_spectrum(forward_spectrum(trace))

        np.testing.assert_allclose(restored.samples, trace.samples, atol=1e-12)
        self.assertEqual(restored.dt, 0.5)

    def test_bin_spacing(self):
        """Test df is 1/(n dt) in MHz."""
        spectrum = forward_spectrum(Trace(np.zeros(100), dt=2.0))

        self.assertAlmostEqual(spectrum.df, 5.0)
        self.assertAlmostEqual(spectrum.frequencies[1], 5.0)

    def test_pure_tone_peak(self):
        """Test a cosine puts its energy in the matching bin."""
        n, dt = 256, 1.0
        k = 16
        samples = np.cos(2 * np.pi * k * np.arange(n) / n)

        spectrum = forward_spectrum(Trace(samples, dt))

        self.assertEqual(int(np.argmax(np.abs(spectrum.bins[: n // 2]))), k)
        self.assertAlmostEqual(abs(spectrum.bins[k]), n / 2)

    def test_parseval(self):
        """Test time and frequency energy agree over many random traces."""
        rng = np.random.default_rng(5)
        for _ in range(1000):
            samples = rng.standard_normal(int(rng.integers(2, 200)))

            spectrum = forward_spectrum(Trace(samples, 1.0))

            self.assertAlmostEqual(
                np.sum(np.abs(spectrum.bins) ** 2) / spectrum.n / np.sum(samples**2), 1.0, delta=1e-10
            )

    def test_linearity(self):
        """Test the spectrum of a combination is the combination of spectra."""
        rng = np.random.default_rng(6)
        x, y = rng.standard_normal(128), rng.standard_normal(128)

        combined = forward_spectrum(Trace(2.5 * x - 0.75 * y, 1.0)).bins
        separate = 2.5 * forward_spectrum(Trace(x, 1.0)).bins - 0.75 * forward_spectrum(Trace(y, 1.0)).bins

        np.testing.assert_allclose(combined, separate, atol=1e-10)

    def test_impulse_is_flat(self):
        """Test a unit impulse at t0 has every bin equal to one."""
        samples = np.zeros(32)
        samples[0] = 1.0

        spectrum = forward_spectrum(Trace(samples, 1.0))

        np.testing.assert_allclose(spectrum.bins, np.ones(32), atol=1e-12)

    def test_constant_is_dc_only(self):
        """Test a constant trace has energy only in bin zero."""
        spectrum = forward_spectrum(Trace(np.full(50, 3.0), 1.0))

        self.assertAlmostEqual(spectrum.bins[0].real, 150.0)
        np.testing.assert_allclose(spectrum.bins[1:], 0.0, atol=1e-10)

    def test_inverse_rejects_asymmetric_spectrum(self):
        """Test a spectrum of a complex signal cannot be inverted to a trace."""
        bins = np.zeros(8, dtype=complex)
        bins[1] = 1.0

        with self.assertRaises(InvalidInput):
            inverse_spectrum(Spectrum(bins, dt=1.0))


class TestAnalyticSignal(unittest.TestCase):
    """Tests for analytic_signal."""

    def test_real_part_is_trace(self):
        """Test the real part equals the input."""
        samples = np.sin(np.linspace(0, 8 * np.pi, 128))

        analytic = analytic_signal(Trace(samples, 1.0))

        np.testing.assert_allclose(analytic.real, samples, atol=1e-12)

    def test_envelope_of_periodic_cosine(self):
        """Test the envelope of a whole-period cosine is one."""
        n = 128
        samples = np.cos(2 * np.pi * 8 * np.arange(n) / n)

        envelope = np.abs(analytic_signal(Trace(samples, 1.0)))

        np.testing.assert_allclose(envelope, 1.0, atol=1e-10)

    def test_no_negative_frequencies(self):
        """Test the analytic signal has no negative-frequency energy."""
        samples = np.random.default_rng(7).standard_normal(256)

        bins = np.fft.fft(analytic_signal(Trace(samples, 1.0)))

        negative = np.sum(np.abs(bins[129:]) ** 2)
        self.assertLessEqual(negative / np.sum(np.abs(bins) ** 2), 1e-12)

    def test_cosine_quadrature_is_sine(self):
        """Test the imaginary part of an on-bin cosine is the matching sine."""
        n = 256
        phase = 2 * np.pi * 12 * np.arange(n) / n

        analytic = analytic_signal(Trace(np.cos(phase), 1.0))

        np.testing.assert_allclose(analytic.imag, np.sin(phase), atol=1e-8)

    def test_rejects_short_trace(self):
        """Test fewer than four samples is rejected."""
        with self.assertRaises(InvalidInput):
            analytic_signal(Trace(np.ones(3), 1.0))


class TestMirrorExtend(unittest.TestCase):
    """Tests for mirror extension."""

    def test_even_length(self):
        """Test layout of the mirrored halves."""
        trace = Trace(np.array([1.0, 2.0, 3.0, 4.0]), dt=1.0)

        extended = mirror_extend(trace)

        np.testing.assert_array_equal(extended.samples, [2, 1, 1, 2, 3, 4, 4, 3])
        self.assertEqual(extended.t0, -2.0)

    def test_odd_length_center_recovers_input(self):
        """Test extract_center undoes the extension for odd lengths."""
        samples = np.arange(7, dtype=float)

        extended = mirror_extend(Trace(samples, dt=1.0))

        self.assertEqual(len(extended), 14)
        np.testing.assert_array_equal(extract_center(extended.samples, 7), samples)


if __name__ == "__main__":
    unittest.main()
