"""Evaluators and identity checks for Lambert series of log n, psi_1 and smoothed zeta moments."""

__version__ = "0.1.0"
