"""Exact little-disc operads, discrete factorization models and the
Weyl-algebra quantization of a constant Poisson structure."""

__version__ = "0.1.0"
