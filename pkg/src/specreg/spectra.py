"""Grouped kernel spectra: eigenvalues mu_k with multiplicities.

A SpectrumModel stores one (mu_k, mult_k) pair per harmonic degree k
instead of an expanded eigenvalue list; the idealized spectrum has
mult_k = d^k, which would be impossible to materialize entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectrumModel:
    """Eigenvalues mu_k (k = 0..K) with exact integer multiplicities.

    `origin` records provenance ("funk_hecke(d=..)", "idealized(d=..)" or
    "custom"); `tail_mass` is Phi(1) - sum mu_k mult_k when known.
    """

    mu: np.ndarray
    multiplicities: tuple[int, ...]
    origin: str = "custom"
    sphere_dim: int | None = None
    tail_mass: float | None = None

    def __post_init__(self):
        if len(self.mu) != len(self.multiplicities):
            raise ValueError("mu and multiplicities must have equal length")
        if np.any(np.asarray(self.mu) < 0):
            raise ValueError("eigenvalues must be non-negative")

    @property
    def max_degree(self) -> int:
        return len(self.mu) - 1

    def mult_floats(self) -> np.ndarray:
        return np.array([float(m) for m in self.multiplicities])

    def trace(self) -> float:
        return float(np.sum(self.mu * self.mult_floats()))


def idealized_spectrum(d: int, max_degree: int) -> SpectrumModel:
    """The schematic large-d spectrum: mu_k = d^{-k}, mult_k = d^k exactly."""
    if d < 2:
        raise ValueError("idealized spectrum needs d >= 2")
    mu = np.array([float(d) ** (-k) for k in range(max_degree + 1)])
    mults = tuple(d ** k for k in range(max_degree + 1))
    return SpectrumModel(mu=mu, multiplicities=mults,
                         origin=f"idealized(d={d})", sphere_dim=None,
                         tail_mass=None)
