"""Tests for gpr-denoise."""
