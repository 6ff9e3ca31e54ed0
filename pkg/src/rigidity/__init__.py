"""Exact verification of rigid quotients of F^(n-1) x Q by the group of order 21."""

__version__ = "0.1.0"
