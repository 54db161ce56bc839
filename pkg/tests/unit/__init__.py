"""Unit tests for padicwave."""
