"""Evenbly codes: hyperinvariant tensor network codes on hyperbolic tilings."""

from __future__ import annotations

from .symplectic import PauliString, SymplecticMatrix, compose, symplectic_product

__all__ = ["PauliString", "SymplecticMatrix", "compose", "symplectic_product"]
__version__ = "0.1.0"
