"""Unit tests for the norm computations."""
