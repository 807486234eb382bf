"""Target (regression) functions used by the experiments and oracles.

Variants:
    KernelSections    f(x) = sum_i Phi(<u_i, x>) for fixed anchors u_i;
                      lies in the RKHS (smoothness s = 1 relative to H).
    GegenbauerDegree  f(x) = scale * P_k(<xi, x>), a single-degree target;
                      with scale = sqrt(mu_k^s N(d, k)) its interpolation
                      norm ||f||_{[H]^s}^2 equals P_k(1) = 1.
    Zero              the zero function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import InnerProductKernel, cross_kernel
from .sphere import PointCloud, gegenbauer


@dataclass(frozen=True)
class KernelSections:
    kernel: InnerProductKernel
    anchors: PointCloud

    def __call__(self, X: PointCloud) -> np.ndarray:
        return cross_kernel(self.kernel, X, self.anchors) @ np.ones(self.anchors.n)

    def source_norm_sq(self) -> float:
        """||f||_H^2 = sum_{i,j} Phi(<u_i, u_j>)."""
        inner = np.clip(self.anchors.points @ self.anchors.points.T, -1.0, 1.0)
        return float(np.sum(self.kernel.phi(inner)))


@dataclass(frozen=True)
class GegenbauerDegree:
    degree: int
    xi: np.ndarray          # unit vector in R^{d+1}
    scale: float = 1.0

    def __post_init__(self):
        if abs(np.linalg.norm(self.xi) - 1.0) > 1e-10:
            raise ValueError("xi must be a unit vector")

    def __call__(self, X: PointCloud) -> np.ndarray:
        if X.ambient_dim != len(self.xi):
            raise ValueError("ambient dimension mismatch")
        t = np.clip(X.points @ self.xi, -1.0, 1.0)
        d = X.sphere_dim
        return self.scale * np.asarray(gegenbauer(d, self.degree, t))


@dataclass(frozen=True)
class Zero:
    def __call__(self, X: PointCloud) -> np.ndarray:
        return np.zeros(X.n)


def eval_target(f, X: PointCloud) -> np.ndarray:
    """Evaluate any target variant on a point cloud."""
    return np.asarray(f(X), dtype=float)
