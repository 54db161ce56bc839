"""Unit tests for the field descriptors and cosets."""
