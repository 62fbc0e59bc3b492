"""Computational verification that n = 2^a 5^b satisfies n*phi(n) = 2 (mod sigma(n))
only for n in {1, 2, 5, 8}."""

from __future__ import annotations

__version__ = "0.1.0"
