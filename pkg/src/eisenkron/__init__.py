"""Eisenstein series, Kronecker limit formulas and Borcherds products for Gamma_0(N)."""
__version__ = "0.1.0"
