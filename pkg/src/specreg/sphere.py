"""Geometry and harmonic analysis on the unit sphere S^d in R^{d+1}.

Provides uniform sampling, spherical-harmonic multiplicities N(d, k),
normalized Gegenbauer polynomials P_k (with P_k(1) = 1), and the
Funk-Hecke quadrature that turns a scalar kernel profile Phi into its
grouped eigenvalue sequence mu_k.

Convention: points live on S^d embedded in R^{d+1}, so the Gegenbauer
parameter is alpha = (D - 2)/2 with ambient dimension D = d + 1.  This is
the convention forced by the multiplicity formula

    N(d, 0) = 1,  N(d, k) = (2k + d - 1)/k * (k + d - 2)! / ((d-1)!(k-1)!).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .spectra import SpectrumModel

_UNIT_TOL = 1e-12
_CLAMP_TOL = 1e-12


class QuadratureError(RuntimeError):
    """Funk-Hecke quadrature did not converge or produced an indefinite result."""


@dataclass(frozen=True)
class PointCloud:
    """n points on S^d, rows of `points` unit-norm, generated from `seed`."""

    points: np.ndarray
    seed: int

    def __post_init__(self):
        norms = np.linalg.norm(self.points, axis=1)
        if not np.all(np.abs(norms - 1.0) <= 1e-10):
            raise ValueError("PointCloud rows must be unit-norm")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    @property
    def sphere_dim(self) -> int:
        return self.points.shape[1] - 1


def harmonic_multiplicity(d: int, k: int) -> int:
    """Number N(d, k) of degree-k spherical harmonics on S^d, exactly.

    Python integers are arbitrary precision, so there is no overflow;
    callers needing a float can convert and accept the rounding.
    """
    if d < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"harmonic degree must be >= 0, got {k}")
    if k == 0:
        return 1
    if k == 1:
        return d + 1
    # Equivalent to (2k+d-1)/k * (k+d-2)!/((d-1)!(k-1)!) but stays integral
    # term by term.
    return math.comb(k + d, k) - math.comb(k + d - 2, k - 2)


def gegenbauer(d: int, k: int, t) -> np.ndarray | float:
    """Normalized Gegenbauer polynomial P_k(t) on S^d with P_k(1) = 1.

    Uses the three-term recurrence for C_k^alpha with alpha = (d - 1)/2,
    dividing by C_k^alpha(1) at the end.  For d = 1 (alpha = 0) the family
    degenerates to Chebyshev polynomials of the first kind, handled as a
    separate branch.
    """
    if d < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"harmonic degree must be >= 0, got {k}")
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    if np.any(np.abs(t_arr) > 1.0 + _CLAMP_TOL):
        raise ValueError("gegenbauer argument must lie in [-1, 1]")
    t_arr = np.clip(t_arr, -1.0, 1.0)

    if d == 1:
        out = np.cos(k * np.arccos(t_arr))
    else:
        alpha = (d - 1) / 2.0
        out = _gegenbauer_recurrence(alpha, k, t_arr)
    return float(out[0]) if scalar else out


def _gegenbauer_recurrence(alpha: float, k: int, t: np.ndarray) -> np.ndarray:
    """C_k^alpha(t) / C_k^alpha(1) by simultaneous recurrence at t and 1.

    (k+1) C_{k+1} = 2(k+alpha) t C_k - (k + 2 alpha - 1) C_{k-1}.
    Normalizing every step by the value at 1 keeps magnitudes near 1 and
    avoids overflow of the raw C_k at large k or alpha.
    """
    if k == 0:
        return np.ones_like(t)
    # p_j = C_j(t) / C_j(1); track the ratio r_j = C_j(1) / C_{j-1}(1) to
    # renormalize each recurrence step.
    p_prev = np.ones_like(t)        # degree 0
    p_cur = t.copy()                # C_1(t)/C_1(1) = t since C_1 = 2 alpha t
    c1_prev = 1.0                   # C_0(1)
    c1_cur = 2.0 * alpha            # C_1(1)
    if k == 1:
        return p_cur
    for j in range(1, k):
        a = 2.0 * (j + alpha)
        b = j + 2.0 * alpha - 1.0
        c1_next = (a * c1_cur - b * c1_prev) / (j + 1.0)
        p_next = (a * c1_cur * t * p_cur - b * c1_prev * p_prev) / ((j + 1.0) * c1_next)
        p_prev, p_cur = p_cur, p_next
        c1_prev, c1_cur = c1_cur, c1_next
    return p_cur


def sample_uniform(d: int, n: int, seed: int) -> PointCloud:
    """n i.i.d. uniform points on S^d: normalized standard Gaussian draws."""
    if d < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {d}")
    if n < 0:
        raise ValueError(f"sample size must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d + 1))
    pts = g / np.linalg.norm(g, axis=1, keepdims=True)
    return PointCloud(points=pts, seed=seed)


def surface_area_ratio(d: int) -> float:
    """omega_{d-1} / omega_d with omega_m = surface area of S^m, via log-Gamma."""
    # omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    log_num = math.log(2.0) + (d / 2.0) * math.log(math.pi) - math.lgamma(d / 2.0)
    log_den = math.log(2.0) + ((d + 1) / 2.0) * math.log(math.pi) - math.lgamma((d + 1) / 2.0)
    return math.exp(log_num - log_den)


def funk_hecke_spectrum(kernel, d: int, max_degree: int,
                        quad_order: int | None = None) -> SpectrumModel:
    """Grouped eigenvalues mu_k of K(x, x') = Phi(<x, x'>) on S^d, k <= max_degree.

    Funk-Hecke reduces the spherical eigenvalue integral to

        mu_k = (omega_{d-1}/omega_d) * int_{-1}^{1} Phi(t) P_k(t) (1-t^2)^{(d-2)/2} dt,

    evaluated here by Gauss-Jacobi quadrature with the (1-t^2)^{(d-2)/2}
    weight built into the nodes, so only the remaining factor Phi * P_k is
    resolved.  The order is doubled until two successive levels agree
    (relative change <= 1e-8 on the largest eigenvalue scale); profiles
    with mild endpoint singularities, like arccos-based ones, converge
    algebraically and simply take a few more doublings.

    Raises QuadratureError on non-convergence within the doubling budget
    or indefiniteness (some mu_k < -1e-10 * mu_0).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if quad_order is None:
        quad_order = max(64, 4 * max_degree)
    if quad_order < max_degree + 2:
        raise ValueError("quad_order must be at least max_degree + 2")

    mu = _funk_hecke_raw(kernel.phi, d, max_degree, quad_order)
    order = quad_order
    converged = False
    for _ in range(6):
        order *= 2
        mu_check = _funk_hecke_raw(kernel.phi, d, max_degree, order)
        scale = max(abs(mu_check[0]), np.max(np.abs(mu_check)), 1e-300)
        change = np.max(np.abs(mu - mu_check))
        mu = mu_check
        if change <= 1e-8 * scale:
            converged = True
            break
    if not converged:
        raise QuadratureError(
            "Funk-Hecke quadrature not converged at order "
            f"{order}: max change {change:.3e}"
        )
    mu0_scale = max(abs(mu[0]), np.max(np.abs(mu)))
    if np.any(mu < -1e-10 * mu0_scale):
        raise QuadratureError(
            "kernel profile appears indefinite: min mu_k = "
            f"{np.min(mu):.3e} vs mu_0 scale {mu0_scale:.3e}"
        )
    mu = np.where(np.abs(mu) < 1e-12 * mu0_scale, 0.0, mu)
    mu = np.maximum(mu, 0.0)

    mults = [harmonic_multiplicity(d, k) for k in range(max_degree + 1)]
    phi1 = float(kernel.phi(1.0))
    tail = phi1 - float(np.sum(mu * np.array(mults, dtype=float)))
    return SpectrumModel(
        mu=np.asarray(mu, dtype=float),
        multiplicities=tuple(mults),
        origin=f"funk_hecke(d={d})",
        sphere_dim=d,
        tail_mass=tail,
    )


def _funk_hecke_raw(phi, d: int, max_degree: int, order: int) -> np.ndarray:
    a = (d - 2) / 2.0
    nodes, weights = roots_jacobi(order, a, a)
    ratio = surface_area_ratio(d)
    phi_vals = np.asarray(phi(nodes), dtype=float)
    mu = np.empty(max_degree + 1)
    for k in range(max_degree + 1):
        pk = gegenbauer(d, k, nodes)
        mu[k] = ratio * np.sum(weights * phi_vals * pk)
    return mu


def mercer_reconstruct(spectrum: SpectrumModel, d: int, t) -> np.ndarray | float:
    """Truncated Mercer series sum_k mu_k N(d,k) P_k(t); diagnostic only."""
    if spectrum.sphere_dim is not None and spectrum.sphere_dim != d:
        raise ValueError(
            f"spectrum was built for S^{spectrum.sphere_dim}, not S^{d}"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t_arr)
    for k, (mu_k, mult) in enumerate(zip(spectrum.mu, spectrum.multiplicities)):
        if mu_k == 0.0:
            continue
        out += mu_k * float(mult) * np.asarray(gegenbauer(d, k, t_arr))
    return float(out[0]) if np.ndim(t) == 0 else out
