"""Spectral-algorithm estimators: fitting, prediction, and risk evaluation.

All filters act through one eigendecomposition of G = K(X, X)/n:

    alpha = (1/n) U phi_lambda(Lambda) U^T Y,   f_hat(x) = K(x, X) alpha,

which reproduces the closed-form ridge and gradient-flow estimators for
the corresponding filters.  Independent oracle paths (a direct SPD solve
for ridge, explicit Euler for the flow) are kept for cross-checking and
never share code with the spectral path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .filters import FilterSpec, phi_lambda
from .kernels import InnerProductKernel, cross_kernel, gram_matrix
from .sphere import PointCloud


@dataclass(frozen=True)
class Dataset:
    """Training inputs X on S^d, responses Y, and the noise scale sigma
    used for reporting (Y = f_star(X) + eps with E[eps^2|x] <= sigma^2)."""

    X: PointCloud
    Y: np.ndarray
    sigma: float = 1.0

    def __post_init__(self):
        if len(self.Y) != self.X.n:
            raise ValueError("Y length must match number of training points")
        if not np.all(np.isfinite(self.Y)):
            raise ValueError("responses must be finite")


@dataclass(frozen=True)
class EigenCache:
    """Eigendecomposition of G = K(X, X)/n, eigenvalues clamped at 0."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class FittedEstimator:
    """Dual-coefficient estimator f_hat(x) = sum_i alpha_i K(x_i, x)."""

    X_train: PointCloud
    alpha: np.ndarray
    kernel: InnerProductKernel
    filter: FilterSpec | None = None
    eigen_cache: EigenCache | None = None


def eigendecompose_gram(kernel: InnerProductKernel, X: PointCloud) -> EigenCache:
    """Symmetric eigendecomposition of G = K(X, X)/n with PSD clamping."""
    G = gram_matrix(kernel, X).values / X.n
    evals, evecs = np.linalg.eigh(G)
    return EigenCache(eigenvalues=np.maximum(evals, 0.0), eigenvectors=evecs)


def fit_spectral(kernel: InnerProductKernel, filt: FilterSpec, data: Dataset,
                 eigen: EigenCache | None = None) -> FittedEstimator:
    """Fit f_hat = phi_lambda(T_X) g_Z via the eigendecomposition of G.

    A precomputed EigenCache for the same (kernel, X) may be passed to
    amortize the decomposition across filters or lambda values.
    """
    if eigen is None:
        eigen = eigendecompose_gram(kernel, data.X)
    if filt.family == "gradient_descent":
        gmax = float(eigen.eigenvalues[-1])
        if filt.eta >= 1.0 / (2.0 * gmax):
            raise ValueError(
                f"gradient_descent step eta={filt.eta} too large for "
                f"largest eigenvalue {gmax:.3g} (need eta < 1/(2 max))"
            )
    filtered = np.asarray(phi_lambda(filt, eigen.eigenvalues))
    U = eigen.eigenvectors
    alpha = U @ (filtered * (U.T @ data.Y)) / data.X.n
    return FittedEstimator(X_train=data.X, alpha=alpha, kernel=kernel,
                           filter=filt, eigen_cache=eigen)


def fit_krr_direct(kernel: InnerProductKernel, lam: float,
                   data: Dataset) -> FittedEstimator:
    """Closed-form ridge oracle: alpha = (K + n lambda I)^{-1} Y.

    Deliberately a Cholesky solve, not an eigendecomposition, so it stays
    an independent check on fit_spectral with the ridge filter.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    K = gram_matrix(kernel, data.X).values
    n = data.X.n
    A = K + n * lam * np.eye(n)
    alpha = cho_solve(cho_factor(A), data.Y)
    resid = np.linalg.norm(A @ alpha - data.Y)
    ynorm = np.linalg.norm(data.Y)
    if ynorm > 0 and resid > 1e-8 * ynorm:
        raise RuntimeError(f"ridge solve residual {resid/ynorm:.3e} too large")
    return FittedEstimator(X_train=data.X, alpha=alpha, kernel=kernel,
                           filter=FilterSpec("krr", lam))


def fit_gf_euler_oracle(kernel: InnerProductKernel, t_final: float, step: float,
                        data: Dataset) -> FittedEstimator:
    """Explicit-Euler integration of the gradient-flow ODE on the dual
    coefficients: alpha <- alpha + (step/n)(Y - K alpha), from alpha = 0.

    Serves as an independent oracle for the gradient_flow filter; first
    order accurate in `step`.
    """
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    K = gram_matrix(kernel, data.X).values
    n = data.X.n
    gmax = float(np.linalg.eigvalsh(K / n)[-1])
    if t_final > 0 and step > 1.0 / (2.0 * gmax):
        raise ValueError(f"Euler step {step} exceeds stability limit {1/(2*gmax):.3g}")
    alpha = np.zeros(n)
    n_steps = int(np.ceil(t_final / step)) if t_final > 0 else 0
    ynorm = max(np.linalg.norm(data.Y), 1e-300)
    for _ in range(n_steps):
        alpha = alpha + (step / n) * (data.Y - K @ alpha)
        if np.linalg.norm(alpha) > 1e6 * ynorm / max(gmax, 1e-300):
            raise RuntimeError("Euler integration diverged")
    return FittedEstimator(X_train=data.X, alpha=alpha, kernel=kernel)


def predict(est: FittedEstimator, X_eval: PointCloud) -> np.ndarray:
    """Evaluate f_hat on X_eval: K(X_eval, X_train) alpha."""
    return cross_kernel(est.kernel, X_eval, est.X_train) @ est.alpha


@dataclass(frozen=True)
class RiskReport:
    excess_risk: float
    bias_sq: float
    variance: float
    mc_std_error: float
    test_size: int


def excess_risk_mc(est: FittedEstimator, f_star, test: PointCloud) -> RiskReport:
    """Monte-Carlo excess risk ||f_hat - f_star||_{L^2}^2 over uniform test
    points; f_star is a callable PointCloud -> values."""
    preds = predict(est, test)
    resid_sq = (np.asarray(f_star(test)) - preds) ** 2
    m = test.n
    mean = float(np.mean(resid_sq))
    se = float(np.std(resid_sq, ddof=1) / np.sqrt(m)) if m > 1 else float("inf")
    return RiskReport(excess_risk=mean, bias_sq=mean, variance=0.0,
                      mc_std_error=se, test_size=m)


def risk_decomposition(kernel: InnerProductKernel, filt: FilterSpec,
                       X: PointCloud, f_star, sigma: float,
                       test: PointCloud,
                       eigen: EigenCache | None = None) -> RiskReport:
    """Bias-variance decomposition of the conditional (on X) expected risk.

    bias_sq  = MC excess risk of the noiseless fit (Y = f_star(X));
    variance = (sigma^2/n^2) E_z ||phi_lambda(G) K(X, z)||^2 summed over
               training points, via phi(T_X) K(x_i, .) = K(., X) phi(G) e_i;
    excess_risk = bias_sq + variance.
    """
    if eigen is None:
        eigen = eigendecompose_gram(kernel, X)
    noiseless = Dataset(X=X, Y=np.asarray(f_star(X), dtype=float), sigma=0.0)
    est = fit_spectral(kernel, filt, noiseless, eigen=eigen)
    bias_report = excess_risk_mc(est, f_star, test)
    n, m = X.n, test.n

    filtered = np.asarray(phi_lambda(filt, eigen.eigenvalues))
    U = eigen.eigenvectors
    Kzx = cross_kernel(kernel, test, X)                    # m x n
    proj = (Kzx @ U) * filtered                            # K(z,X) U phi(Lam)
    variance = sigma ** 2 / n ** 2 * float(np.sum(proj ** 2)) / m
    return RiskReport(
        excess_risk=bias_report.excess_risk + variance,
        bias_sq=bias_report.excess_risk,
        variance=variance,
        mc_std_error=bias_report.mc_std_error,
        test_size=m,
    )
