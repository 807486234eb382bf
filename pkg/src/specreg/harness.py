"""Declarative desk-scale experiments: data generation, tuning, repeated
trials, and log-log rate fitting.

An experiment sweeps dimensions d with n = round(d^gamma) samples each,
repeats every cell `repeats` times with derived per-trial seeds, and fits
the slope of log(mean excess risk) against log n and log d.  All
randomness flows from `master_seed` through a stable hash of
(master_seed, d, trial, tag), so any subset of trials reruns identically
and results are byte-stable under arbitrary parallelism.
"""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .filters import FilterSpec
from .kernels import InnerProductKernel, kernel_by_name
from .regression import (Dataset, EigenCache, eigendecompose_gram,
                         excess_risk_mc, fit_spectral, predict)
from .sphere import PointCloud, funk_hecke_spectrum, harmonic_multiplicity, sample_uniform
from .targets import GegenbauerDegree, KernelSections, Zero

DEFAULT_GF_C1_GRID = (0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
DEFAULT_KRR_C2_GRID = (0.001, 0.005, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0,
                       10.0, 40.0, 100.0, 300.0, 1000.0)
DEFAULT_KRR_C3_GRID = tuple(round(0.1 * i, 1) for i in range(1, 16))


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 63-bit seed from the master seed and arbitrary tags."""
    text = ":".join([str(master_seed)] + [str(p) for p in parts])
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass(frozen=True)
class TuningSpec:
    """How each algorithm picks its regularization level.

    krr_mode:  "cv"    5-fold cross-validation over lambda = C2 n^{-C3};
               "fixed" lambda = krr_coef * d^{-krr_theta}.
    gf_rule:   "best_on_test" (oracle tuning, matching the optimally
               tuned semantics of the rate theory, flagged in output) or "holdout"
               (80/20 validation split); grid t = C1 n^{0.5}.
    Gradient flow may also run fixed via gf_coef * d^{-gf_theta} as a
    lambda (t = 1/lambda), used by the saturation experiment.
    """

    krr_mode: str = "cv"
    krr_coef: float = 0.05
    krr_theta: float = 0.7
    krr_c2_grid: tuple = DEFAULT_KRR_C2_GRID
    krr_c3_grid: tuple = DEFAULT_KRR_C3_GRID
    gf_rule: str = "best_on_test"
    gf_c1_grid: tuple = DEFAULT_GF_C1_GRID
    gf_mode: str = "grid"           # "grid" or "fixed"
    gf_coef: float = 0.05
    gf_theta: float = 0.5

    def __post_init__(self):
        if self.krr_mode not in ("cv", "fixed"):
            raise ValueError(f"unknown krr_mode {self.krr_mode!r}")
        if self.gf_rule not in ("best_on_test", "holdout"):
            raise ValueError(f"unknown gf_rule {self.gf_rule!r}")
        if self.gf_mode not in ("grid", "fixed"):
            raise ValueError(f"unknown gf_mode {self.gf_mode!r}")
        if not self.gf_c1_grid or not self.krr_c2_grid or not self.krr_c3_grid:
            raise ValueError("tuning grids must be non-empty")


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: str = "rbf"
    kernel_coeffs: tuple | None = None
    algorithms: tuple = ("gradient_flow",)
    gamma: float = 1.0
    d_list: tuple = (10, 16, 25, 40)
    target: dict = field(default_factory=lambda: {"variant": "kernel_sections",
                                                  "num_anchors": 3})
    sigma: float = 1.0
    repeats: int = 50
    test_size: int = 1000
    tuning: TuningSpec = field(default_factory=TuningSpec)
    master_seed: int = 0
    n_max: int = 4000
    threads: int = 1

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if list(self.d_list) != sorted(self.d_list):
            raise ValueError("d_list must be ascending")
        for alg in self.algorithms:
            if alg not in ("krr", "gradient_flow"):
                raise ValueError(f"unsupported algorithm {alg!r}")

    def make_kernel(self) -> InnerProductKernel:
        return kernel_by_name(self.kernel, self.kernel_coeffs)

    def sample_sizes(self) -> list[int]:
        ns = [max(1, int(round(d ** self.gamma))) for d in self.d_list]
        too_big = [n for n in ns if n > self.n_max]
        if too_big:
            raise ValueError(
                f"sample sizes {too_big} exceed n_max={self.n_max}; "
                "shrink d_list or gamma"
            )
        return ns


_CONFIG_KEYS = {"experiment", "kernel", "kernel_coeffs", "algorithms", "gamma",
                "d_list", "target", "sigma", "repeats", "test_size", "tuning",
                "master_seed", "n_max", "threads"}
_TUNING_KEYS = {"krr_mode", "krr_coef", "krr_theta", "krr_c2_grid",
                "krr_c3_grid", "gf_rule", "gf_c1_grid", "gf_mode", "gf_coef",
                "gf_theta"}


def config_from_dict(doc: dict) -> tuple[str, ExperimentConfig]:
    """Parse a JSON config document; unknown keys are rejected."""
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kind = doc.get("experiment", "rate")
    if kind not in ("rate", "saturation"):
        raise ValueError(f"unknown experiment kind {kind!r}")
    tuning_doc = doc.get("tuning", {})
    unknown_t = set(tuning_doc) - _TUNING_KEYS
    if unknown_t:
        raise ValueError(f"unknown tuning keys: {sorted(unknown_t)}")
    tuning_doc = {k: tuple(v) if isinstance(v, list) else v
                  for k, v in tuning_doc.items()}
    tuning = TuningSpec(**tuning_doc)
    kwargs = {k: v for k, v in doc.items() if k not in ("experiment", "tuning")}
    for key in ("algorithms", "d_list", "kernel_coeffs"):
        if key in kwargs and kwargs[key] is not None:
            kwargs[key] = tuple(kwargs[key])
    return kind, ExperimentConfig(tuning=tuning, **kwargs)


@dataclass
class ExperimentResult:
    rows: list                      # per-trial records
    slopes: dict                    # per-algorithm slope fits
    failures: list = field(default_factory=list)
    saturation_observed: bool | None = None
    warnings: list = field(default_factory=list)

    @property
    def failure_fraction(self) -> float:
        total = len(self.rows) + len(self.failures)
        return len(self.failures) / total if total else 0.0


# ---------------------------------------------------------------------------
# Tuning rules
# ---------------------------------------------------------------------------

def cross_validate_krr(data: Dataset, kernel: InnerProductKernel,
                       grid, seed: int) -> float:
    """5-fold CV over a lambda grid; contiguous folds after a seeded
    shuffle; score = mean validation squared error; ties go to the larger
    lambda.  Returns the chosen lambda."""
    grid = sorted(set(float(g) for g in grid))
    if len(grid) == 1:
        return grid[0]
    n = data.X.n
    if n < 10:
        raise ValueError("cross-validation needs n >= 10")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, 5)
    scores = np.zeros(len(grid))
    for fold in folds:
        mask = np.ones(n, dtype=bool)
        mask[fold] = False
        X_tr = PointCloud(points=data.X.points[mask], seed=data.X.seed)
        X_va = PointCloud(points=data.X.points[fold], seed=data.X.seed)
        sub = Dataset(X=X_tr, Y=data.Y[mask], sigma=data.sigma)
        eigen = eigendecompose_gram(kernel, X_tr)
        for i, lam in enumerate(grid):
            est = fit_spectral(kernel, FilterSpec("krr", lam), sub, eigen=eigen)
            preds = predict(est, X_va)
            scores[i] += float(np.mean((preds - data.Y[fold]) ** 2))
    scores /= len(folds)
    # argmin with ties toward larger lambda: scan from the largest.
    best = len(grid) - 1
    for i in range(len(grid) - 2, -1, -1):
        if scores[i] < scores[best]:
            best = i
    return grid[best]


def select_gf_time(data: Dataset, kernel: InnerProductKernel, grid, rule: str,
                   seed: int, test: PointCloud | None = None,
                   f_star=None, eigen: EigenCache | None = None) -> float:
    """Pick the stopping time t from a grid.

    rule = "holdout":      80/20 split, argmin validation error;
    rule = "best_on_test": argmin test risk (oracle tuning; requires the
                           test cloud and target, and is flagged upstream).
    """
    grid = sorted(set(float(g) for g in grid))
    if len(grid) == 1:
        return grid[0]
    if rule == "best_on_test":
        if test is None or f_star is None:
            raise ValueError("best_on_test needs the test cloud and target")
        if eigen is None:
            eigen = eigendecompose_gram(kernel, data.X)
        risks = []
        for t in grid:
            est = fit_spectral(kernel, FilterSpec("gradient_flow", 1.0 / t),
                               data, eigen=eigen)
            risks.append(excess_risk_mc(est, f_star, test).excess_risk)
        return grid[int(np.argmin(risks))]
    # holdout
    n = data.X.n
    perm = np.random.default_rng(seed).permutation(n)
    cut = max(1, int(round(0.8 * n)))
    tr, va = perm[:cut], perm[cut:]
    X_tr = PointCloud(points=data.X.points[tr], seed=data.X.seed)
    X_va = PointCloud(points=data.X.points[va], seed=data.X.seed)
    sub = Dataset(X=X_tr, Y=data.Y[tr], sigma=data.sigma)
    sub_eigen = eigendecompose_gram(kernel, X_tr)
    errs = []
    for t in grid:
        est = fit_spectral(kernel, FilterSpec("gradient_flow", 1.0 / t),
                           sub, eigen=sub_eigen)
        preds = predict(est, X_va)
        errs.append(float(np.mean((preds - data.Y[va]) ** 2)))
    return grid[int(np.argmin(errs))]


def fit_rate_loglog(points) -> tuple[float, float, float]:
    """OLS of ln(risk) on ln(scale); returns (slope, intercept, stderr).

    Non-positive risks are dropped with a warning via ValueError only if
    fewer than 3 usable points remain.
    """
    pts = [(float(a), float(b)) for a, b in points]
    usable = [(a, b) for a, b in pts if b > 0 and a > 0]
    if len(usable) < 3:
        raise ValueError("need at least 3 positive points for a slope fit")
    x = np.log([a for a, _ in usable])
    y = np.log([b for _, b in usable])
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, _rank, _sv = np.linalg.lstsq(A, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    dof = len(usable) - 2
    if dof > 0 and len(res):
        s2 = float(res[0]) / dof
        sxx = float(np.sum((x - x.mean()) ** 2))
        stderr = math.sqrt(s2 / sxx) if sxx > 0 else float("inf")
    else:
        stderr = 0.0
    return slope, intercept, stderr


# ---------------------------------------------------------------------------
# Targets from config
# ---------------------------------------------------------------------------

def build_target(cfg: ExperimentConfig, kernel: InnerProductKernel, d: int):
    """Instantiate the configured target for dimension d (anchors and xi
    are fixed per d across trials, as in the reference experiments)."""
    spec = cfg.target
    variant = spec.get("variant", "kernel_sections")
    if variant == "zero":
        return Zero()
    if variant == "kernel_sections":
        m = int(spec.get("num_anchors", 3))
        anchors = sample_uniform(d, m, derive_seed(cfg.master_seed, d, "anchors"))
        return KernelSections(kernel=kernel, anchors=anchors)
    if variant == "gegenbauer":
        k = int(spec.get("degree", 2))
        s = float(spec.get("s", 1.9))
        xi = sample_uniform(d, 1, derive_seed(cfg.master_seed, d, "xi")).points[0]
        spectrum = funk_hecke_spectrum(kernel, d, max_degree=k + 2)
        mu_k = float(spectrum.mu[k])
        scale = math.sqrt(mu_k ** s * float(harmonic_multiplicity(d, k)))
        return GegenbauerDegree(degree=k, xi=xi, scale=scale)
    raise ValueError(f"unknown target variant {variant!r}")


# ---------------------------------------------------------------------------
# Trial execution
# ---------------------------------------------------------------------------

def _algorithm_lambda(cfg: ExperimentConfig, alg: str, d: int, n: int,
                      data: Dataset, kernel, test, f_star,
                      eigen: EigenCache) -> tuple[float, str]:
    """Resolve the tuned parameter for one algorithm; returns
    (lambda, tuning_rule_label)."""
    t_spec = cfg.tuning
    if alg == "krr":
        if t_spec.krr_mode == "fixed":
            return t_spec.krr_coef * d ** (-t_spec.krr_theta), "fixed_power"
        grid = [c2 * n ** (-c3) for c2 in t_spec.krr_c2_grid
                for c3 in t_spec.krr_c3_grid]
        lam = cross_validate_krr(data, kernel, grid,
                                 seed=derive_seed(cfg.master_seed, d, "cv",
                                                  data.X.seed))
        return lam, "cv5"
    # gradient flow
    if t_spec.gf_mode == "fixed":
        return t_spec.gf_coef * d ** (-t_spec.gf_theta), "fixed_power"
    grid = [c1 * math.sqrt(n) for c1 in t_spec.gf_c1_grid]
    t = select_gf_time(data, kernel, grid, t_spec.gf_rule,
                       seed=derive_seed(cfg.master_seed, d, "holdout",
                                        data.X.seed),
                       test=test, f_star=f_star, eigen=eigen)
    return 1.0 / t, t_spec.gf_rule


def _run_trial(cfg: ExperimentConfig, kernel, d: int, n: int, trial: int):
    f_star = build_target(cfg, kernel, d)
    X = sample_uniform(d, n, derive_seed(cfg.master_seed, d, trial, "train"))
    test = sample_uniform(d, cfg.test_size,
                          derive_seed(cfg.master_seed, d, trial, "test"))
    noise_rng = np.random.default_rng(
        derive_seed(cfg.master_seed, d, trial, "noise"))
    Y = np.asarray(f_star(X)) + cfg.sigma * noise_rng.standard_normal(n)
    data = Dataset(X=X, Y=Y, sigma=cfg.sigma)
    eigen = eigendecompose_gram(kernel, X)

    records = []
    for alg in cfg.algorithms:
        lam, rule = _algorithm_lambda(cfg, alg, d, n, data, kernel, test,
                                      f_star, eigen)
        filt = FilterSpec(alg, lam)
        est = fit_spectral(kernel, filt, data, eigen=eigen)
        report = excess_risk_mc(est, f_star, test)
        records.append({
            "d": d, "n": n, "trial": trial, "algorithm": alg,
            "tuning_rule": rule,
            "tuned_param": lam if alg == "krr" else 1.0 / lam,
            "test_risk": report.excess_risk,
            "mc_stderr": report.mc_std_error,
        })
    return records


def _execute(cfg: ExperimentConfig, kernel) -> ExperimentResult:
    ns = cfg.sample_sizes()
    tasks = [(d, n, trial) for d, n in zip(cfg.d_list, ns)
             for trial in range(cfg.repeats)]

    results: dict[tuple, list] = {}
    failures = []

    def run_one(task):
        d, n, trial = task
        try:
            return task, _run_trial(cfg, kernel, d, n, trial), None
        except Exception as exc:        # per-trial isolation by contract
            return task, None, f"{type(exc).__name__}: {exc}"

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outcomes = list(pool.map(run_one, tasks))
    else:
        outcomes = [run_one(t) for t in tasks]

    for task, records, err in outcomes:
        if err is None:
            results[task] = records
        else:
            failures.append({"d": task[0], "trial": task[2], "error": err})

    rows = []
    for task in sorted(results):
        rows.extend(results[task])

    result = ExperimentResult(rows=rows, slopes={}, failures=failures)
    if tasks and len(failures) / len(tasks) > 0.10:
        result.warnings.append(
            f"aborted: {len(failures)}/{len(tasks)} trials failed")
        return result

    for alg in cfg.algorithms:
        means = []
        for d, n in zip(cfg.d_list, ns):
            risks = [r["test_risk"] for r in rows
                     if r["algorithm"] == alg and r["d"] == d]
            if risks:
                means.append((d, n, float(np.mean(risks))))
        if len(means) >= 3:
            slope_n, _, se_n = fit_rate_loglog([(n, r) for _, n, r in means])
            slope_d, _, se_d = fit_rate_loglog([(d, r) for d, _, r in means])
            result.slopes[alg] = {
                "slope_vs_n": slope_n, "stderr_vs_n": se_n,
                "slope_vs_d": slope_d, "stderr_vs_d": se_d,
                "mean_risks": [{"d": d, "n": n, "risk": r}
                               for d, n, r in means],
            }
    return result


def run_rate_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Rate-recovery experiment: tuned fits, repeated trials, slope fits."""
    kernel = cfg.make_kernel()
    return _execute(cfg, kernel)


def run_saturation_experiment(cfg: ExperimentConfig,
                              margin: float = 0.2) -> ExperimentResult:
    """Saturation contrast: ridge vs gradient flow at fixed power-law
    lambda = coef * d^{-theta} each, on a smooth (s > 1) target.

    saturation_observed is True when the fitted d-slope of gradient flow
    is at least `margin` steeper (more negative) than the ridge slope.
    """
    tuning = cfg.tuning
    warn = []
    if tuning.krr_mode != "fixed" or tuning.gf_mode != "fixed":
        tuning = replace(tuning, krr_mode="fixed", gf_mode="fixed")
    if tuning.krr_theta < tuning.gf_theta:
        warn.append(
            "krr_theta < gf_theta: tuning deviates from the balanced-lambda "
            "exponents (expected krr ~ d^-0.7, gf ~ d^-0.5 at s=1.9, gamma=1.8)"
        )
    cfg = replace(cfg, tuning=tuning,
                  algorithms=tuple(cfg.algorithms) or ("krr", "gradient_flow"))
    if set(cfg.algorithms) != {"krr", "gradient_flow"}:
        cfg = replace(cfg, algorithms=("krr", "gradient_flow"))
    kernel = cfg.make_kernel()
    result = _execute(cfg, kernel)
    result.warnings.extend(warn)
    if "krr" in result.slopes and "gradient_flow" in result.slopes:
        gf = result.slopes["gradient_flow"]["slope_vs_d"]
        kr = result.slopes["krr"]["slope_vs_d"]
        result.saturation_observed = bool(gf - kr <= -margin)
    return result
