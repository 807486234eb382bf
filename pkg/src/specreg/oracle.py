"""Matrix-free evaluation of the spectral quantities that govern the risk.

On a grouped spectrum {(mu_k, mult_k)} and grouped target energies e_k:

    N1 = sum_k mult_k mu_k phi(mu_k)          effective dimension
    N2 = sum_k mult_k [mu_k phi(mu_k)]^2      variance functional
    M2 = sum_k psi(mu_k)^2 e_k                bias functional
    M1 = ess sup |filtered residual|          (sampled lower bound only)

The dominant-term risk is M2 + sigma^2 N2 / n; combined with the
balanced-lambda exponents this reproduces the theoretical rate curves by
pure summation, with no data or kernel matrices involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import FilterSpec, phi_lambda, psi_lambda, qualification
from .rates import RateQuery, balanced_lambda_exponent, phase_index, spectral_rate_exponent
from .spectra import SpectrumModel, idealized_spectrum
from .sphere import sample_uniform
from .targets import GegenbauerDegree, Zero


@dataclass(frozen=True)
class TargetCoefficients:
    """Per-degree squared coefficient mass e_k of a target, built for
    smoothness s; mu_k^{-s} e_k = 1 on every populated degree (c0 = 1)."""

    energies: np.ndarray
    s: float
    c0: float = 1.0

    @property
    def source_norm_sq(self) -> float:
        # sum_k mu_k^{-s} e_k = number of populated degrees by construction
        return float(np.count_nonzero(self.energies))


def source_coefficients(spectrum: SpectrumModel, s: float, q: int) -> TargetCoefficients:
    """e_k = mu_k^s for k <= q, zero above, witnessing the source condition
    with constant c0 = 1 and squared source norm q + 1."""
    if q > spectrum.max_degree:
        raise ValueError("q exceeds the spectrum's truncation degree")
    mu = spectrum.mu
    if np.any(mu[: q + 1] == 0.0):
        raise ValueError("zero eigenvalue within degrees 0..q")
    e = np.zeros_like(mu)
    e[: q + 1] = mu[: q + 1] ** s
    return TargetCoefficients(energies=e, s=s)


def n1(spectrum: SpectrumModel, filt: FilterSpec) -> float:
    g = spectrum.mu * np.asarray(phi_lambda(filt, spectrum.mu))
    return float(np.sum(spectrum.mult_floats() * g))


def n2(spectrum: SpectrumModel, filt: FilterSpec) -> float:
    g = spectrum.mu * np.asarray(phi_lambda(filt, spectrum.mu))
    return float(np.sum(spectrum.mult_floats() * g ** 2))


def m2(spectrum: SpectrumModel, target: TargetCoefficients,
       filt: FilterSpec) -> float:
    psi = np.asarray(psi_lambda(filt, spectrum.mu))
    return float(np.sum(psi ** 2 * target.energies))


def m1_sampled(kernel, target, filt: FilterSpec, d: int,
               sample_size: int, seed: int,
               spectrum: SpectrumModel | None = None) -> float:
    """Sampled lower bound on M1 = ess sup |f_star - f_lambda| for
    degree-limited targets.

    The population-filtered target f_lambda has coefficients scaled by
    1 - psi(mu_k), so the residual of a single-degree target is exactly
    psi(mu_k) f_star.  Targets with unbounded degree support are refused.
    """
    if isinstance(target, Zero):
        return 0.0
    if not isinstance(target, GegenbauerDegree):
        raise ValueError(
            "m1_sampled supports only degree-limited targets "
            f"(got {type(target).__name__})"
        )
    if spectrum is None:
        from .sphere import funk_hecke_spectrum
        spectrum = funk_hecke_spectrum(kernel, d, max_degree=target.degree + 2)
    mu_k = float(spectrum.mu[target.degree])
    psi = float(psi_lambda(filt, mu_k))
    X = sample_uniform(d, sample_size, seed)
    return psi * float(np.max(np.abs(target(X))))


def theoretical_risk(spectrum: SpectrumModel, target: TargetCoefficients,
                     filt: FilterSpec, n: float, sigma: float) -> float:
    """Dominant-term risk M2 + sigma^2 N2 / n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return m2(spectrum, target, filt) + sigma ** 2 * n2(spectrum, filt) / n


@dataclass(frozen=True)
class SlopeFit:
    fitted_slope: float
    theory_slope: float
    abs_difference: float
    points: tuple


def _filter_at(filter_family: str, lam: float, q_iter: int = 2,
               eta: float = 0.1) -> FilterSpec:
    return FilterSpec(filter_family, lam, q=q_iter, eta=eta)


def risk_slope_fit(s: float, tau: float, gamma: float, d_list,
                   filter_family: str, sigma: float = 1.0,
                   q_iter: int | None = None) -> SlopeFit:
    """Fit the log-log slope of the theoretical risk along a geometric d
    sweep at the balanced lambda* = d^{-ell}, and compare to the predicted
    rate exponent.

    For each d: idealized spectrum truncated at p + 3, source energies up
    to q = p + 1 (so both competing bias terms are active), n = d^gamma.
    """
    d_list = list(d_list)
    if len(d_list) < 4:
        raise ValueError("need at least 4 dimensions for a slope fit")
    p = phase_index(s, gamma)
    ell, _case = balanced_lambda_exponent(s, tau, gamma)
    if q_iter is None and filter_family == "iterated_ridge":
        if not math.isfinite(tau):
            raise ValueError("iterated_ridge needs finite tau")
        q_iter = int(round(tau))
    pts = []
    for d in d_list:
        spectrum = idealized_spectrum(int(d), max_degree=p + 3)
        target = source_coefficients(spectrum, s, q=p + 1)
        n = float(d) ** gamma
        lam = float(d) ** (-ell)
        filt = _filter_at(filter_family, lam, q_iter=q_iter or 2)
        risk = theoretical_risk(spectrum, target, filt, n=n, sigma=sigma)
        pts.append((float(d), risk))
    logd = np.log([p_[0] for p_ in pts])
    logr = np.log([p_[1] for p_ in pts])
    slope = float(np.polyfit(logd, logr, 1)[0])
    theory = -spectral_rate_exponent(RateQuery(s=s, tau=tau, gamma=gamma)).exponent
    return SlopeFit(fitted_slope=slope, theory_slope=theory,
                    abs_difference=abs(slope - theory), points=tuple(pts))


def oracle_sweep(s: float, tau: float, gamma: float, d_list,
                 filter_family: str, sigma: float = 1.0) -> list[dict]:
    """Rows (d, n, lambda, ell, M2, N1, N2, risk) for the CSV interface."""
    p = phase_index(s, gamma)
    ell, _ = balanced_lambda_exponent(s, tau, gamma)
    q_iter = int(round(tau)) if (filter_family == "iterated_ridge"
                                 and math.isfinite(tau)) else 2
    rows = []
    for d in d_list:
        spectrum = idealized_spectrum(int(d), max_degree=p + 3)
        target = source_coefficients(spectrum, s, q=p + 1)
        n = float(d) ** gamma
        lam = float(d) ** (-ell)
        filt = _filter_at(filter_family, lam, q_iter=q_iter)
        rows.append({
            "d": int(d),
            "n": n,
            "lambda": lam,
            "ell": ell,
            "M2": m2(spectrum, target, filt),
            "N1": n1(spectrum, filt),
            "N2": n2(spectrum, filt),
            "risk": theoretical_risk(spectrum, target, filt, n=n, sigma=sigma),
        })
    return rows
