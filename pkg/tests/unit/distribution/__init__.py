"""Unit tests for the distributions."""
