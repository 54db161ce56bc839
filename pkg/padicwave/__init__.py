"""Exact p-adic C^r function spaces, wavelet bases and order-r distributions."""
