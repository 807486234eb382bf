"""Command-line front end.

Subcommands: rates, curve, plateau, spectrum, oracle, experiment,
validate-filters.  Exit codes: 0 success, 1 usage error, 2 partial
failure (e.g. >10% trials failed), 3 validation failure.  Errors go to
stderr with a machine-parsable "error_code:" prefix.  tau = inf is
spelled "inf" on the command line and in CSV.  Report paths with --plot
render matplotlib figures next to the delimited output.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import filters, harness, io, oracle, rates
from .kernels import kernel_by_name
from .sphere import funk_hecke_spectrum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_VALIDATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specreg",
        description="Spectral regularization laboratory for inner-product "
                    "kernels on spheres.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("rates", help="print the rate exponents for one (s, tau, gamma)")
    p.add_argument("--s", type=float, required=True, help="source-condition smoothness s > 0")
    p.add_argument("--tau", type=float, required=True, help="filter qualification tau >= 1 (inf allowed)")
    p.add_argument("--gamma", type=float, required=True, help="scaling exponent gamma in n ~ d^gamma")

    p = sub.add_parser("curve", help="emit the rate-exponent curve over a gamma grid as CSV")
    p.add_argument("--s", type=float, required=True, help="source-condition smoothness s > 0")
    p.add_argument("--tau", type=float, required=True, help="filter qualification tau >= 1 (inf allowed)")
    p.add_argument("--gmin", type=float, required=True, help="smallest gamma in the grid")
    p.add_argument("--gmax", type=float, required=True, help="largest gamma in the grid")
    p.add_argument("--steps", type=int, required=True, help="number of grid points")
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to the CSV")

    p = sub.add_parser("plateau", help="list the gamma-intervals where the rate is constant")
    p.add_argument("--s", type=float, required=True, help="source-condition smoothness s > 0")
    p.add_argument("--tau", type=float, required=True, help="filter qualification tau >= 1 (inf allowed)")
    p.add_argument("--pmax", type=int, default=3, help="largest phase index to list (default 3)")

    p = sub.add_parser("spectrum", help="Funk-Hecke eigenvalues of a kernel on S^d as CSV")
    p.add_argument("--kernel", required=True, help='kernel name: "rbf", "ntk", or "power_series"')
    p.add_argument("--coeffs", type=float, nargs="+", default=None,
                   help="power-series coefficients (power_series kernel only)")
    p.add_argument("--d", type=int, required=True, help="sphere dimension d >= 1")
    p.add_argument("--K", type=int, required=True, help="truncation degree")
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to the CSV")

    p = sub.add_parser("oracle", help="theoretical-risk sweep on the idealized spectrum")
    p.add_argument("--config", required=True, help="JSON config with s, tau, gamma, d_list, filter")
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to the CSV")

    p = sub.add_parser("experiment", help="run a declarative experiment from a JSON config")
    p.add_argument("--config", required=True, help="JSON experiment config path")
    p.add_argument("-o", "--output", required=True, help="output directory for CSV + summary JSON")
    p.add_argument("--seed", type=int, default=None, help="master seed override (else config, else $SKL_SEED)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: config value)")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to the CSV")

    p = sub.add_parser("validate-filters", help="run the filter-axiom checks for one family")
    p.add_argument("--family", required=True, choices=list(filters.FAMILIES),
                   help="filter family to validate")
    p.add_argument("--q", type=int, default=2, help="iteration count for iterated_ridge (default 2)")
    p.add_argument("--eta", type=float, default=0.1, help="step size for gradient_descent (default 0.1)")
    return parser


def _fail(code: str, message: str, exit_code: int) -> int:
    print(f"error_code:{code} {message}", file=sys.stderr)
    return exit_code


def cmd_rates(args) -> int:
    q = rates.RateQuery(s=args.s, tau=args.tau, gamma=args.gamma)
    sp = rates.spectral_rate_exponent(q)
    mm = rates.minimax_exponent(args.s, args.gamma)
    gap = rates.saturation_gap(args.s, args.tau, args.gamma)
    ell, case = rates.balanced_lambda_exponent(args.s, args.tau, args.gamma)
    print(f"p={sp.p} exponent={sp.exponent:.12g} regime={sp.regime} "
          f"minimax={mm.exponent:.12g} gap={gap:.12g} "
          f"lambda_exponent={ell:.12g} lambda_case={case!r} "
          f"log_note={sp.log_factor_note!r}")
    for w in sp.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_curve(args) -> int:
    grid = np.linspace(args.gmin, args.gmax, args.steps)
    rows = rates.rate_curve(args.s, args.tau, grid[grid > 0])
    io.write_csv(args.output, rows,
                 columns=["gamma", "p", "r_spectral", "r_minimax", "r_krr",
                          "regime", "plateau"])
    if args.plot:
        from . import plots
        plots.plot_rate_curve(rows, Path(args.output).with_suffix(".png"),
                              s=args.s, tau=args.tau)
    return EXIT_OK


def cmd_plateau(args) -> int:
    intervals = rates.plateau_intervals(args.s, args.tau, args.pmax)
    if not intervals:
        print("no plateau intervals (s > 2 tau)")
        return EXIT_OK
    for p, (lo, hi) in enumerate(intervals):
        print(f"p={p} interval=[{lo:.12g}, {hi:.12g})")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    kernel = kernel_by_name(args.kernel, args.coeffs)
    spectrum = funk_hecke_spectrum(kernel, args.d, args.K)
    rows = []
    cum = 0.0
    for k, (mu_k, mult) in enumerate(zip(spectrum.mu, spectrum.multiplicities)):
        cum += mu_k * float(mult)
        rows.append({"k": k, "mu_k": float(mu_k), "multiplicity": mult,
                     "mu_k_times_mult_cumsum": cum})
    io.write_csv(args.output, rows,
                 columns=["k", "mu_k", "multiplicity", "mu_k_times_mult_cumsum"])
    if args.plot:
        from . import plots
        plots.plot_spectrum(rows, Path(args.output).with_suffix(".png"),
                            kernel_name=args.kernel, d=args.d)
    return EXIT_OK


_ORACLE_KEYS = {"s", "tau", "gamma", "d_list", "filter", "sigma"}


def cmd_oracle(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    unknown = set(doc) - _ORACLE_KEYS
    if unknown:
        raise ValueError(f"unknown oracle config keys: {sorted(unknown)}")
    tau = float(doc["tau"]) if doc["tau"] != "inf" else math.inf
    rows = oracle.oracle_sweep(
        s=float(doc["s"]), tau=tau, gamma=float(doc["gamma"]),
        d_list=[int(d) for d in doc["d_list"]],
        filter_family=doc.get("filter", "gradient_flow"),
        sigma=float(doc.get("sigma", 1.0)))
    io.write_csv(args.output, rows,
                 columns=["d", "n", "lambda", "ell", "M2", "N1", "N2", "risk"])
    if args.plot:
        from . import plots
        plots.plot_oracle_sweep(rows, Path(args.output).with_suffix(".png"))
    return EXIT_OK


def cmd_experiment(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    if args.seed is not None:
        doc["master_seed"] = args.seed
    elif "master_seed" not in doc and os.environ.get("SKL_SEED"):
        doc["master_seed"] = int(os.environ["SKL_SEED"])
    if args.threads is not None:
        doc["threads"] = args.threads
    kind, cfg = harness.config_from_dict(doc)
    if kind == "saturation":
        result = harness.run_saturation_experiment(cfg)
    else:
        result = harness.run_rate_experiment(cfg)

    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    io.write_csv(outdir / "trials.csv", result.rows,
                 columns=["d", "n", "trial", "algorithm", "tuning_rule",
                          "tuned_param", "test_risk", "mc_stderr"])
    summary = {
        "experiment": kind,
        "master_seed": cfg.master_seed,
        "slopes": result.slopes,
        "failures": result.failures,
        "warnings": result.warnings,
    }
    if result.saturation_observed is not None:
        summary["saturation_observed"] = result.saturation_observed
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    if args.plot and result.slopes:
        from . import plots
        plots.plot_experiment(result, outdir / "risk_curves.png")
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if result.failure_fraction > 0.10:
        return _fail("trial_failures",
                     f"{len(result.failures)} trials failed", EXIT_PARTIAL)
    return EXIT_OK


def cmd_validate_filters(args) -> int:
    report = filters.check_filter_axioms(args.family, q=args.q, eta=args.eta)
    for line in report.summary_lines():
        print(line)
    if not report.passed:
        return _fail("filter_axioms", f"{args.family} failed axiom checks",
                     EXIT_VALIDATION)
    return EXIT_OK


_DISPATCH = {
    "rates": cmd_rates,
    "curve": cmd_curve,
    "plateau": cmd_plateau,
    "spectrum": cmd_spectrum,
    "oracle": cmd_oracle,
    "experiment": cmd_experiment,
    "validate-filters": cmd_validate_filters,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to our convention.
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _DISPATCH[args.subcommand](args)
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        return _fail("invalid_input", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
