"""Unit tests for the scalar arithmetic."""
