"""Unit tests for the multi-indices."""
