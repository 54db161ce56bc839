"""Unit tests for the locally polynomial functions."""
