"""Inner-product kernel profiles Phi and kernel-matrix assembly.

A kernel here is a dimension-free scalar profile Phi on [-1, 1]; on any
sphere S^d it induces K(x, x') = Phi(<x, x'>).  Built-in families:

    rbf           Phi(t) = exp(t - 1), the Gaussian kernel with unit
                  bandwidth restricted to the sphere (||x - x'||^2 / 2 =
                  1 - <x, x'> there, so this form avoids cancellation).
    ntk           two-layer ReLU neural tangent kernel,
                  Phi(t) = [sin(arccos t) + 2 (pi - arccos t) t] / (2 pi).
    power_series  Phi(t) = sum a_j t^j with a_j >= 0 (non-negative
                  coefficients are exactly the sphere-universal positive
                  definite profiles, Gneiting's theorem).
    custom        arbitrary callable, positivity not verified; the
                  Funk-Hecke indefiniteness check is the guard.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .sphere import PointCloud

_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class InnerProductKernel:
    """Scalar profile Phi plus metadata; K(x,x') = Phi(<x,x'>)."""

    name: str
    _phi: Callable[[np.ndarray], np.ndarray]
    coefficients: tuple[float, ...] | None = None

    def phi(self, t):
        """Evaluate Phi on t in [-1, 1] (clamped within 1e-12)."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(np.abs(t_arr) > 1.0 + _CLAMP_TOL):
            raise ValueError("kernel profile argument must lie in [-1, 1]")
        t_arr = np.clip(t_arr, -1.0, 1.0)
        out = self._phi(t_arr)
        return float(out) if np.ndim(t) == 0 else np.asarray(out, dtype=float)

    @property
    def kappa_sq(self) -> float:
        """sup_x K(x, x) = Phi(1)."""
        return float(self.phi(1.0))


def _rbf_profile(t):
    return np.exp(t - 1.0)


def _ntk_profile(t):
    theta = np.arccos(t)
    return (np.sin(theta) + 2.0 * (np.pi - theta) * t) / (2.0 * np.pi)


def rbf_kernel() -> InnerProductKernel:
    return InnerProductKernel(name="rbf", _phi=_rbf_profile)


def ntk_kernel() -> InnerProductKernel:
    return InnerProductKernel(name="ntk", _phi=_ntk_profile)


def power_series_kernel(coeffs: Sequence[float]) -> InnerProductKernel:
    coeffs = tuple(float(a) for a in coeffs)
    if any(a < 0 for a in coeffs):
        raise ValueError("power-series kernels require non-negative coefficients")

    def profile(t, _c=np.array(coeffs[::-1])):
        return np.polyval(_c, t)

    return InnerProductKernel(name="power_series", _phi=profile,
                              coefficients=coeffs)


def custom_kernel(phi: Callable, name: str = "custom") -> InnerProductKernel:
    return InnerProductKernel(name=name, _phi=lambda t: np.asarray(phi(t), dtype=float))


def kernel_by_name(name: str, coeffs: Sequence[float] | None = None) -> InnerProductKernel:
    """Config-facing factory: "rbf", "ntk", or "power_series" with coeffs."""
    if name == "rbf":
        return rbf_kernel()
    if name == "ntk":
        return ntk_kernel()
    if name == "power_series":
        if coeffs is None:
            raise ValueError('"power_series" kernel requires "coeffs"')
        return power_series_kernel(coeffs)
    raise ValueError(f"unknown kernel name {name!r}")


@dataclass(frozen=True)
class CoefficientReport:
    """Taylor coefficients a_0..a_J of Phi at 0 plus zero-flags and accuracy."""

    coefficients: np.ndarray
    zero_flags: np.ndarray          # True where |a_j| < 1e-10
    estimated_accuracy: float       # conservative absolute error bound

    def __iter__(self):
        return iter(self.coefficients)


def power_series_coefficients(kernel: InnerProductKernel, J: int) -> CoefficientReport:
    """Taylor coefficients a_0..a_J of Phi at t = 0.

    RBF and explicit power-series kernels are handled analytically.  For
    NTK/custom profiles the coefficients come from the Cauchy integral on a
    circle |t| = r < 1 evaluated by FFT: Phi is analytic in the open unit
    disk (branch points of arccos and sqrt sit at +-1), so the trapezoid
    rule on the circle is spectrally accurate and, unlike a Chebyshev-to-
    monomial basis conversion, does not amplify roundoff exponentially.
    """
    if J < 0:
        raise ValueError("J must be >= 0")
    if kernel.name == "rbf":
        fact = np.cumprod(np.concatenate(([1.0], np.arange(1.0, J + 1.0))))
        coeffs = np.exp(-1.0) / fact
        acc = 1e-16
    elif kernel.coefficients is not None:
        coeffs = np.zeros(J + 1)
        upto = min(J + 1, len(kernel.coefficients))
        coeffs[:upto] = kernel.coefficients[:upto]
        acc = 0.0
    else:
        coeffs, acc = _cauchy_coefficients(kernel._phi, J)
    flags = np.abs(coeffs) < 1e-10
    return CoefficientReport(coefficients=coeffs, zero_flags=flags,
                             estimated_accuracy=acc)


def _cauchy_coefficients(phi, J: int, radius: float = 0.75,
                         n_points: int = 4096) -> tuple[np.ndarray, float]:
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    z = radius * np.exp(1j * theta)
    vals = np.asarray(phi(z), dtype=complex)
    fft = np.fft.fft(vals) / n_points
    j = np.arange(J + 1)
    coeffs = np.real(fft[: J + 1]) / radius ** j
    # Roundoff eps * max|Phi| on the circle, amplified by r^{-j}.
    scale = float(np.max(np.abs(vals)))
    acc = float(np.max(2e-16 * scale / radius ** j))
    return coeffs, acc


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric kernel matrix K(X, X) with provenance metadata."""

    values: np.ndarray
    kernel_name: str
    fingerprint: int = field(default=0)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def gram_matrix(kernel: InnerProductKernel, X: PointCloud) -> GramMatrix:
    """K(X, X) with entries Phi(<x_i, x_j>); symmetric by construction."""
    inner = X.points @ X.points.T
    np.clip(inner, -1.0, 1.0, out=inner)
    vals = np.asarray(kernel.phi(inner), dtype=float)
    # Mirror the upper triangle so symmetry is exact despite any roundoff
    # asymmetry in the inner products.
    vals = np.triu(vals) + np.triu(vals, 1).T
    return GramMatrix(values=vals, kernel_name=kernel.name,
                      fingerprint=hash((X.seed, X.n, X.ambient_dim)))


def cross_kernel(kernel: InnerProductKernel, X_eval: PointCloud,
                 X_train: PointCloud) -> np.ndarray:
    """m x n matrix with entries Phi(<x_eval_i, x_train_j>)."""
    if X_eval.ambient_dim != X_train.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: {X_eval.ambient_dim} vs {X_train.ambient_dim}"
        )
    if X_eval.n == 0:
        return np.zeros((0, X_train.n))
    inner = X_eval.points @ X_train.points.T
    np.clip(inner, -1.0, 1.0, out=inner)
    return np.asarray(kernel.phi(inner), dtype=float)
