"""Spectral filter functions phi_lambda, remainders psi_lambda, and the
numerical verifier for the filter axioms.

Families (z is the spectral variable, lambda the regularization level):

    krr                phi(z) = 1/(z + lambda)                      tau = 1
    iterated_ridge q   phi(z) = (1/z)[1 - lambda^q/(z+lambda)^q]    tau = q
    gradient_flow      phi(z) = (1 - e^{-t z})/z,  t = 1/lambda     tau = inf
    gradient_descent   phi(z) = (1 - (1-eta z)^t)/z, t = 1/(eta lambda)
                                                                    tau = inf

The remainder psi(z) = 1 - z phi(z) is always computed from its closed
form (never by subtraction).  lambda is nominally in (0, 1); larger
values are accepted and merely flagged, since power-law tuning grids
lambda = C n^{-c} can exceed 1 at small n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("krr", "iterated_ridge", "gradient_flow", "gradient_descent")


@dataclass(frozen=True)
class FilterSpec:
    """A filter family instantiated at one regularization level lambda."""

    family: str
    lam: float
    q: int = 1              # iterated_ridge only
    eta: float = 0.1        # gradient_descent only

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown filter family {self.family!r}")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.family == "iterated_ridge" and self.q < 1:
            raise ValueError("iterated_ridge requires q >= 1")
        if self.family == "gradient_descent" and self.eta <= 0:
            raise ValueError("gradient_descent requires eta > 0")

    @property
    def time(self) -> float:
        """Flow time t = 1/lambda (GF) or step count t = 1/(eta lambda) (GD)."""
        if self.family == "gradient_flow":
            return 1.0 / self.lam
        if self.family == "gradient_descent":
            return 1.0 / (self.eta * self.lam)
        raise AttributeError(f"{self.family} has no time parameter")

    @property
    def outside_nominal_range(self) -> bool:
        return self.lam >= 1.0


def qualification(spec: FilterSpec) -> float:
    """tau: 1 for krr, q for iterated ridge, inf for the flow/descent pair."""
    return {"krr": 1.0, "iterated_ridge": float(spec.q),
            "gradient_flow": math.inf, "gradient_descent": math.inf}[spec.family]


def phi_lambda(spec: FilterSpec, z) -> np.ndarray | float:
    """phi_lambda(z) >= 0 for z >= 0, with the removable singularity at
    z = 0 evaluated by limit (GF -> t, GD -> eta t, iterated ridge -> q/lambda).
    """
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if np.any(z_arr < 0):
        raise ValueError("spectral argument z must be >= 0")
    lam = spec.lam
    tiny = z_arr < 1e-8 * lam

    if spec.family == "krr":
        out = 1.0 / (z_arr + lam)
    elif spec.family == "iterated_ridge":
        # 1 - (lambda/(z+lambda))^q = -expm1(-q log1p(z/lambda)), stable as z -> 0.
        num = -np.expm1(-spec.q * np.log1p(z_arr / lam))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(tiny, spec.q / lam, num / np.where(tiny, 1.0, z_arr))
    elif spec.family == "gradient_flow":
        t = spec.time
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where(tiny, t,
                           -np.expm1(-t * z_arr) / np.where(tiny, 1.0, z_arr))
    else:  # gradient_descent
        t, eta = spec.time, spec.eta
        if np.any(eta * z_arr >= 1.0):
            raise ValueError("gradient_descent requires eta z < 1 on the domain")
        with np.errstate(divide="ignore", invalid="ignore"):
            num = -np.expm1(t * np.log1p(-eta * z_arr))
            out = np.where(tiny, eta * t, num / np.where(tiny, 1.0, z_arr))
    return float(out[0]) if scalar else out


def psi_lambda(spec: FilterSpec, z) -> np.ndarray | float:
    """psi_lambda(z) = 1 - z phi_lambda(z) from the closed forms."""
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if np.any(z_arr < 0):
        raise ValueError("spectral argument z must be >= 0")
    lam = spec.lam

    if spec.family == "krr":
        out = lam / (z_arr + lam)
    elif spec.family == "iterated_ridge":
        out = np.exp(-spec.q * np.log1p(z_arr / lam))
    elif spec.family == "gradient_flow":
        with np.errstate(under="ignore"):
            out = np.exp(-spec.time * z_arr)
    else:
        if np.any(spec.eta * z_arr >= 1.0):
            raise ValueError("gradient_descent requires eta z < 1 on the domain")
        with np.errstate(under="ignore"):
            out = np.exp(spec.time * np.log1p(-spec.eta * z_arr))
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------

@dataclass
class AxiomViolation:
    axiom: str
    lam: float
    z: float
    detail: str


@dataclass
class FilterAxiomReport:
    """Grid-based falsification report for the filter-function axioms.

    `constants` holds the tightest empirical values of the defining
    constants (c1..c8 style bounds); `skipped` lists axioms that do not
    apply (item 3 requires finite qualification).  Grid checks are
    evidence, not proof.
    """

    family: str
    tau: float
    passed: bool
    constants: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def summary_lines(self) -> list[str]:
        lines = [f"family={self.family} tau={self.tau} "
                 f"result={'PASS' if self.passed else 'FAIL'}"]
        for name in sorted(self.constants):
            lines.append(f"  {name} = {self.constants[name]:.6g}")
        for name in self.skipped:
            lines.append(f"  {name}: not applicable, tau=inf")
        for v in self.violations:
            lines.append(f"  VIOLATION {v.axiom} at lambda={v.lam:.4g} "
                         f"z={v.z:.4g}: {v.detail}")
        return lines


def default_grids(kappa_sq: float = 1.0):
    z_grid = np.geomspace(1e-8 * kappa_sq, kappa_sq, 200)
    lam_grid = np.geomspace(1e-3, 0.5, 20)
    return lam_grid, z_grid


def check_filter_axioms(family: str, lambda_grid=None, z_grid=None,
                        q: int = 2, eta: float = 0.1,
                        kappa_sq: float = 1.0, tol: float = 1e-9) -> FilterAxiomReport:
    """Verify the filter axioms for one family over a (lambda, z) grid.

    Checks, per the definition of an analytic filter function:
      (1) z phi(z) in [0, 1], non-decreasing in z, non-increasing in lambda;
      (2) z > lambda: phi >= c/z and psi <= C (z/lambda)^{-tau'} for sampled
          tau' <= min(tau, 8); z <= lambda: lambda phi in [c, C], psi >= c;
      (3) finite tau only: (z/lambda)^{2 tau} psi^2 >= c for z > lambda and
          <= C z phi(z) for z <= lambda.
    Reports tightest empirical constants and any violating grid point.
    """
    if lambda_grid is None or z_grid is None:
        lam_default, z_default = default_grids(kappa_sq)
        lambda_grid = lam_default if lambda_grid is None else np.asarray(lambda_grid)
        z_grid = z_default if z_grid is None else np.asarray(z_grid)
    lambda_grid = np.sort(np.asarray(lambda_grid, dtype=float))
    z_grid = np.sort(np.asarray(z_grid, dtype=float))

    probe = FilterSpec(family, float(lambda_grid[0]), q=q, eta=eta)
    tau = qualification(probe)
    report = FilterAxiomReport(family=family, tau=tau, passed=True)
    viols = report.violations

    zphi_by_lam = []
    for lam in lambda_grid:
        spec = FilterSpec(family, float(lam), q=q, eta=eta)
        phi = np.asarray(phi_lambda(spec, z_grid))
        psi = np.asarray(psi_lambda(spec, z_grid))
        zphi = z_grid * phi
        zphi_by_lam.append(zphi)

        # Axiom 1: range and monotonicity in z.
        if np.any(zphi < -tol) or np.any(zphi > 1.0 + tol):
            i = int(np.argmax(np.maximum(-zphi, zphi - 1.0)))
            viols.append(AxiomViolation("1:range", lam, float(z_grid[i]),
                                        f"z*phi = {zphi[i]:.6g}"))
        dz = np.diff(zphi)
        if np.any(dz < -tol):
            i = int(np.argmin(dz))
            viols.append(AxiomViolation("1:monotone_z", lam, float(z_grid[i]),
                                        f"decrease {dz[i]:.3g}"))

        above = z_grid > lam
        below = ~above
        # Axiom 2, z > lambda branch.
        if np.any(above):
            c1 = float(np.min(zphi[above]))
            report.constants["c1:min z*phi (z>lam)"] = min(
                c1, report.constants.get("c1:min z*phi (z>lam)", np.inf))
            if c1 <= tol:
                i = int(np.argmin(np.where(above, zphi, np.inf)))
                viols.append(AxiomViolation("2:phi_lower", lam, float(z_grid[i]),
                                            f"z*phi = {zphi[i]:.3g} not bounded away from 0"))
            for tau_p in _sampled_orders(tau):
                key = f"c2:max psi*(z/lam)^{tau_p:g}"
                val = float(np.max(psi[above] * (z_grid[above] / lam) ** tau_p))
                report.constants[key] = max(val, report.constants.get(key, 0.0))
        # Axiom 2, z <= lambda branch.
        if np.any(below):
            lamphi = lam * phi[below]
            report.constants["c3:min lam*phi (z<=lam)"] = min(
                float(np.min(lamphi)),
                report.constants.get("c3:min lam*phi (z<=lam)", np.inf))
            report.constants["c4:max lam*phi (z<=lam)"] = max(
                float(np.max(lamphi)),
                report.constants.get("c4:max lam*phi (z<=lam)", 0.0))
            c5 = float(np.min(psi[below]))
            report.constants["c5:min psi (z<=lam)"] = min(
                c5, report.constants.get("c5:min psi (z<=lam)", np.inf))
            if float(np.min(lamphi)) <= tol or c5 <= tol:
                i = int(np.argmin(psi[below]))
                viols.append(AxiomViolation("2:below_lambda", lam,
                                            float(z_grid[below][i]),
                                            f"lam*phi or psi degenerate (psi={c5:.3g})"))
        # Axiom 3, finite tau only.
        if math.isfinite(tau):
            expr = (z_grid / lam) ** (2.0 * tau) * psi ** 2
            if np.any(above):
                c7 = float(np.min(expr[above]))
                report.constants["c7:min (z/lam)^2tau psi^2 (z>lam)"] = min(
                    c7, report.constants.get("c7:min (z/lam)^2tau psi^2 (z>lam)", np.inf))
                if c7 <= tol:
                    i = int(np.argmin(np.where(above, expr, np.inf)))
                    viols.append(AxiomViolation("3:lower", lam, float(z_grid[i]),
                                                f"value {c7:.3g}"))
            if np.any(below):
                ratio = expr[below] / np.maximum(zphi[below], 1e-300)
                c8 = float(np.max(ratio))
                report.constants["c8:max (z/lam)^2tau psi^2 / (z phi) (z<=lam)"] = max(
                    c8, report.constants.get(
                        "c8:max (z/lam)^2tau psi^2 / (z phi) (z<=lam)", 0.0))
                if not np.isfinite(c8):
                    i = int(np.argmax(ratio))
                    viols.append(AxiomViolation("3:upper", lam,
                                                float(z_grid[below][i]),
                                                "unbounded ratio"))

    if not math.isfinite(tau):
        report.skipped.append("axiom 3")

    # Axiom 1: monotonicity in lambda at fixed z.
    zphi_mat = np.vstack(zphi_by_lam)
    dlam = np.diff(zphi_mat, axis=0)
    if np.any(dlam > tol):
        i, j = np.unravel_index(int(np.argmax(dlam)), dlam.shape)
        viols.append(AxiomViolation("1:monotone_lambda", float(lambda_grid[i]),
                                    float(z_grid[j]),
                                    f"increase {dlam[i, j]:.3g} with lambda"))

    report.passed = not viols
    return report


def _sampled_orders(tau: float) -> list[float]:
    cap = min(tau, 8.0)
    orders = [0.5, 1.0, 2.0, 4.0, 8.0]
    out = [o for o in orders if o <= cap]
    if cap not in out:
        out.append(cap)
    return out
