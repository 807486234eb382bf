"""Closed-form convergence-rate exponents for large-dimensional spectral
algorithms under the scaling n ~ d^gamma.

All results are exponents r such that the optimally tuned excess risk
scales as d^{-r} up to poly(log d) factors, for a target of smoothness s
relative to the RKHS and a filter of qualification tau.  The phase index
p is the integer with gamma in [p(s+1), (p+1)(s+1)); it marks which
harmonic degree dominates the risk.

Exponent formulas:

    minimax            r = min{gamma - p, s(p+1)}
    spectral, s <= tau r = min{gamma - p, s(p+1)}   (matches minimax)
    spectral, s > tau  r = min{gamma - p,
                              (tau(gamma - p + 1) + p s~)/(tau + 1),
                              s~(p+1)},   s~ = min{s, 2 tau}

The gap between the two in the s > tau branch is the saturation effect.
log factors are carried as annotations only; they vanish in log-log
slopes and would otherwise pollute exact plateau detection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RateQuery:
    s: float
    tau: float
    gamma: float

    def __post_init__(self):
        if self.s <= 0 or self.gamma <= 0:
            raise ValueError("s and gamma must be positive")
        if self.tau < 1:
            raise ValueError("tau must be >= 1 (or inf)")


@dataclass(frozen=True)
class RateResult:
    p: int
    exponent: float
    regime: str
    s_tilde: float | None = None
    log_factor_note: str = ""
    warnings: tuple[str, ...] = ()


def phase_index(s: float, gamma: float) -> int:
    """The integer p with p(s+1) <= gamma < (p+1)(s+1), half-open left-closed."""
    if s <= 0 or gamma <= 0:
        raise ValueError("s and gamma must be positive")
    p = int(math.floor(gamma / (s + 1)))
    # floor can land one off at exact float boundaries; fix by comparison.
    while p * (s + 1) > gamma:
        p -= 1
    while (p + 1) * (s + 1) <= gamma:
        p += 1
    return max(p, 0)


def _argmin_branch(candidates: dict[str, float]) -> tuple[str, float]:
    branch = min(candidates, key=lambda k: candidates[k])
    return branch, candidates[branch]


def _log_note(p: int, tau: float) -> str:
    if p == 0 and math.isinf(tau):
        return "(ln d)^2 when p=0"
    return "poly(ln d)"


def minimax_exponent(s: float, gamma: float) -> RateResult:
    """Improved minimax lower-bound exponent: min{gamma - p, s(p+1)}."""
    p = phase_index(s, gamma)
    branch, r = _argmin_branch({"gamma-p": gamma - p, "s(p+1)": s * (p + 1)})
    return RateResult(p=p, exponent=r, regime=branch,
                      log_factor_note="poly(ln d)")


def spectral_rate_exponent(q: RateQuery) -> RateResult:
    """Exact rate exponent of an optimally tuned filter of qualification tau."""
    s, tau, gamma = q.s, q.tau, q.gamma
    p = phase_index(s, gamma)
    warnings: list[str] = []
    if s <= tau:
        if not math.isinf(tau):
            # Side conditions under which the matching rate is proved.
            ok = (s > 1.0 / (2.0 * tau)) or (gamma > (2 * tau + 1) * s / (2 * tau * (1 + s)))
            if not ok:
                warnings.append(
                    "side conditions violated: s <= 1/(2 tau) and "
                    "gamma <= (2 tau + 1) s / (2 tau (1 + s)); "
                    "rate formula returned anyway"
                )
        branch, r = _argmin_branch({"gamma-p": gamma - p, "s(p+1)": s * (p + 1)})
        return RateResult(p=p, exponent=r, regime=branch, s_tilde=None,
                          log_factor_note=_log_note(p, tau),
                          warnings=tuple(warnings))
    s_tilde = min(s, 2.0 * tau)
    branch, r = _argmin_branch({
        "gamma-p": gamma - p,
        "middle": (tau * (gamma - p + 1) + p * s_tilde) / (tau + 1),
        "s~(p+1)": s_tilde * (p + 1),
    })
    return RateResult(p=p, exponent=r, regime=branch, s_tilde=s_tilde,
                      log_factor_note="poly(ln d)")


def krr_rate_exponent(s: float, gamma: float) -> RateResult:
    """Ridge-specific rate: min{gamma-p, (gamma-p+p s~+1)/2, s~(p+1)},
    s~ = min{s, 2}, valid for s >= 1; delegates to the general formula
    (tau = 1) for s < 1."""
    if s < 1:
        return spectral_rate_exponent(RateQuery(s=s, tau=1.0, gamma=gamma))
    p = phase_index(s, gamma)
    s_tilde = min(s, 2.0)
    branch, r = _argmin_branch({
        "gamma-p": gamma - p,
        "middle": (gamma - p + p * s_tilde + 1.0) / 2.0,
        "s~(p+1)": s_tilde * (p + 1),
    })
    return RateResult(p=p, exponent=r, regime=branch, s_tilde=s_tilde,
                      log_factor_note="poly(ln d)")


@dataclass(frozen=True)
class MinimaxLowerValue:
    """Either the explicit lower-bound value (range-(i) gammas) or just the
    exponent with an up-to-constants marker."""

    exponent: float
    value: float | None
    exact: bool
    note: str


def minimax_lower_value(s: float, gamma: float, d: float) -> MinimaxLowerValue:
    """Explicit minimax lower bound at dimension d.

    For gamma in (p(s+1), p(s+1) + s], the bound carries explicit
    constants:

        ln ln(d) / (50 (gamma - p(s+1)) (ln d)^2) * d^{p - gamma}.

    Outside that range only the exponent min{gamma-p, s(p+1)} is known up
    to constants.  Requires d >= 3 so that ln ln d > 0.
    """
    if d < 3:
        raise ValueError("minimax_lower_value requires d >= 3")
    p = phase_index(s, gamma)
    lo = p * (s + 1.0)
    hi = lo + s
    r = min(gamma - p, s * (p + 1))
    if lo < gamma <= hi:
        value = (math.log(math.log(d))
                 / (50.0 * (gamma - lo) * math.log(d) ** 2)
                 * d ** (p - gamma))
        return MinimaxLowerValue(exponent=gamma - p, value=value, exact=True,
                                 note="explicit-constant branch")
    return MinimaxLowerValue(exponent=r, value=None, exact=False,
                             note="up to constants")


def balanced_lambda_exponent(s: float, tau: float, gamma: float) -> tuple[float, str]:
    """Exponent ell with lambda* ~ d^{-ell} balancing bias and variance.

    Case analysis by smoothness regime; for s > 2 tau the filter cannot
    see smoothness beyond 2 tau, so s is replaced by 2 tau throughout.
    Returns (ell, case label).
    """
    if s <= 0 or gamma <= 0 or tau < 1:
        raise ValueError("invalid (s, tau, gamma)")
    if s > 2.0 * tau:
        ell, case = balanced_lambda_exponent(2.0 * tau, tau, gamma)
        return ell, f"s>2tau via s=2tau: {case}"
    if s < 1.0:
        return _balanced_lambda_mis(s, tau, gamma)
    if s <= tau:
        return _balanced_lambda_matched(s, gamma)
    return _balanced_lambda_saturated(s, tau, gamma)


def _balanced_lambda_matched(s: float, gamma: float) -> tuple[float, str]:
    # 1 <= s <= tau
    p = phase_index(s, gamma)
    if p >= 1:
        if gamma < p * s + p + s:
            return p + 0.5, "matched(1): ell = p + 1/2"
        return (gamma - (p + 1) * (s - 1.0)) / 2.0, "matched(2)"
    if gamma < s:
        return min(gamma, 1.0) / 2.0, "matched(3): ell = min{gamma,1}/2"
    return (gamma - (s - 1.0)) / 2.0, "matched(4)"


def _balanced_lambda_saturated(s: float, tau: float, gamma: float) -> tuple[float, str]:
    # tau < s <= 2 tau, tau finite
    p = phase_index(s, gamma)
    delta = gamma - p * (s + 1.0)
    if gamma < 1.0:
        return gamma / 2.0, "saturated(4): ell = gamma/2"
    if delta <= tau:
        return p + delta / (2.0 * tau), "saturated(1)"
    if delta <= s + s / tau - 1.0:
        return p + (delta + 1.0) / (2.0 * tau + 2.0), "saturated(2)"
    return p + (delta + 1.0 - s) / 2.0, "saturated(3)"


def _balanced_lambda_mis(s: float, tau: float, gamma: float) -> tuple[float, str]:
    # s < 1
    p = phase_index(s, gamma)
    if math.isinf(tau):
        if p >= 1:
            if gamma < p * s + p + s:
                return p + s / 2.0, "mis(1)"
            return (gamma + p * (1.0 - s)) / 2.0, "mis(2)"
        if gamma < s:
            return min(gamma, 1.0, 2.0 * gamma * s) / 2.0, "mis(3)"
        return min((gamma + (1.0 - s)) / 2.0,
                   gamma * (1.0 + s) - s,
                   gamma / 2.0), "mis(4)"
    if gamma < p * s + p + s:
        return (gamma + 2.0 * tau * p - s * p - p) / (2.0 * tau), "mis(5)"
    return p + s / (2.0 * tau), "mis(6)"


def saturation_gap(s: float, tau: float, gamma: float) -> float:
    """minimax exponent minus spectral exponent; > 0 iff saturation bites."""
    r_mm = minimax_exponent(s, gamma).exponent
    r_sp = spectral_rate_exponent(RateQuery(s=s, tau=tau, gamma=gamma)).exponent
    return r_mm - r_sp


def plateau_intervals(s: float, tau: float, p_max: int) -> list[tuple[float, float]]:
    """gamma-intervals [p(s+1) + s + max{s, tau}/tau - 1, (p+1)(s+1)) on
    which the spectral exponent is constant; empty when s > 2 tau."""
    if s > 2.0 * tau:
        return []
    term = 1.0 if math.isinf(tau) else max(s, tau) / tau
    out = []
    for p in range(p_max + 1):
        lo = p * (s + 1.0) + s + term - 1.0
        hi = (p + 1) * (s + 1.0)
        if lo < hi:
            out.append((lo, hi))
    return out


def rate_curve(s: float, tau: float, gamma_grid) -> list[dict]:
    """Table of (gamma, p, r_spectral, r_minimax, r_krr, regime, plateau)
    rows for a sorted gamma grid."""
    gammas = np.asarray(gamma_grid, dtype=float)
    if np.any(np.diff(gammas) < 0):
        raise ValueError("gamma grid must be sorted ascending")
    plateaus = plateau_intervals(s, tau, p_max=int(gammas[-1] / (s + 1.0)) + 1)
    rows = []
    for g in gammas:
        if g <= 0:
            continue
        sp = spectral_rate_exponent(RateQuery(s=s, tau=tau, gamma=float(g)))
        mm = minimax_exponent(s, float(g))
        kr = krr_rate_exponent(s, float(g))
        in_plateau = any(lo <= g < hi for lo, hi in plateaus)
        rows.append({
            "gamma": float(g),
            "p": sp.p,
            "r_spectral": sp.exponent,
            "r_minimax": mm.exponent,
            "r_krr": kr.exponent,
            "regime": sp.regime,
            "plateau": int(in_plateau),
        })
    return rows
