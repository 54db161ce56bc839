"""Unit tests for the wavelet basis."""
