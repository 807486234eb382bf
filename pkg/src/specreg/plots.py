"""Report figures rendered next to the delimited output.

Every renderer takes the already-computed rows and a target path; the CSV
remains the primary artifact and the figures are a convenience layer, so
nothing here feeds back into the numerics.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_rate_curve(rows: list[dict], path, s: float, tau: float) -> Path:
    """Exponent curves r(gamma) for spectral / minimax / ridge."""
    path = Path(path)
    gammas = [r["gamma"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(gammas, [r["r_minimax"] for r in rows], label="minimax",
            color="0.3", lw=2.2)
    ax.plot(gammas, [r["r_spectral"] for r in rows],
            label=f"spectral (tau={tau:g})", color="tab:blue", lw=1.6)
    ax.plot(gammas, [r["r_krr"] for r in rows], label="ridge",
            color="tab:red", lw=1.2, ls="--")
    ax.set_xlabel(r"$\gamma$  (n $\sim d^\gamma$)")
    ax.set_ylabel(r"rate exponent $r$  (risk $\sim d^{-r}$)")
    ax.set_title(f"convergence-rate exponents, s={s:g}")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(rows: list[dict], path, kernel_name: str, d: int) -> Path:
    """Grouped eigenvalues mu_k and weighted mass mu_k N(d,k) vs degree."""
    path = Path(path)
    ks = [int(r["k"]) for r in rows]
    mus = [float(r["mu_k"]) for r in rows]
    mass = [float(r["mu_k"]) * float(r["multiplicity"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    pos = [(k, m) for k, m in zip(ks, mus) if m > 0]
    ax.semilogy([k for k, _ in pos], [m for _, m in pos], "o-",
                label=r"$\mu_k$")
    posm = [(k, m) for k, m in zip(ks, mass) if m > 0]
    ax.semilogy([k for k, _ in posm], [m for _, m in posm], "s--",
                label=r"$\mu_k N(d,k)$")
    ax.set_xlabel("harmonic degree k")
    ax.set_ylabel("eigenvalue")
    ax.set_title(f"{kernel_name} spectrum on $S^{{{d}}}$")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_oracle_sweep(rows: list[dict], path) -> Path:
    """Theoretical risk and its two components along the d sweep."""
    path = Path(path)
    d = [r["d"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.loglog(d, [r["risk"] for r in rows], "o-", label="risk")
    ax.loglog(d, [r["M2"] for r in rows], "s--", label=r"bias $M_2$")
    ax.loglog(d, [r["N2"] / r["n"] for r in rows], "^--",
              label=r"variance $N_2/n$")
    ax.set_xlabel("dimension d")
    ax.set_ylabel("theoretical risk")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_experiment(result, path) -> Path:
    """Mean excess risk vs n per algorithm with fitted slopes."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for alg, info in result.slopes.items():
        ns = [m["n"] for m in info["mean_risks"]]
        risks = [m["risk"] for m in info["mean_risks"]]
        ax.loglog(ns, risks, "o-",
                  label=f"{alg} (slope {info['slope_vs_n']:.2f})")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("mean excess risk")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
