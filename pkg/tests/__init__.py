"""Test suite for padicwave."""
