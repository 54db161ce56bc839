"""Unit tests for the finite-difference operators."""
