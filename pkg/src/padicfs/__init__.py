"""Exact Fourier analysis of p-adic F-series."""
