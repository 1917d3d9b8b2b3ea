"""Command-line interface tying the modules into reproducible runs.

Subcommands: simulate | smooth | release | projections | audit | cv | pcv |
sweep.  Exit codes: 0 success, 2 configuration or parse error, 3 privacy
refusal (epsilon > 1 or an incompatible summary), 4 numerical failure.
Every output is a CSV or key=value file that reruns byte-identically from the
same flags and seed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .calibration import PrivacyBudget, PrivacyRefusalError, calibrate, noise_scale
from .io import (
    CsvFormatError,
    format_float,
    meta_path,
    read_curves_csv,
    write_curves_csv,
    write_long_csv,
    write_meta,
)
from .kernels import Curve, KERNEL_FAMILIES, KernelSpec, uniform_grid
from .mechanism import dp_audit, release_function, release_projections
from .rng import derive_seed, make_rng
from .selection import SelectionGrid, cv_score, pcv_select
from .simulate import SimConfig, default_mean, kl_simulate
from .smoothing import SampleSet, SmootherConfig, penalized_mean
from .spectral import (
    DegenerateKernelError,
    coefficients,
    cm_norm_sq,
    kernel_basis,
    point_eval_functional,
)

SWEEP_PARAMETERS = ("phi", "rho", "kernel", "p", "epsilon", "delta", "n", "mean")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad numeric list {text!r}: {exc}")


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip() != ""]


def _add_kernel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", default="gaussian", choices=KERNEL_FAMILIES,
                   help="covariance kernel family (default gaussian)")
    p.add_argument("--rho", type=float, default=0.001,
                   help="kernel range parameter (default 0.001)")
    p.add_argument("--tol", type=float, default=1e-12,
                   help="relative eigenvalue truncation threshold (default 1e-12)")


def _add_smoother_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", type=float, default=0.01,
                   help="penalty parameter (default 0.01)")
    p.add_argument("--eta", type=float, default=1.0,
                   help="penalty exponent >= 1 (default 1)")


def _add_budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=1.0,
                   help="privacy budget epsilon in (0, 1] (default 1)")
    p.add_argument("--delta", type=float, default=0.1,
                   help="privacy budget delta in (0, 1) (default 0.1)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--output", required=True, help="output file path")


def _load_sample(args) -> SampleSet:
    grid, values = read_curves_csv(args.input)
    tau = getattr(args, "tau", None)
    return SampleSet.from_values(values, grid, tau)


def cmd_simulate(args) -> None:
    grid = uniform_grid(args.grid_points)
    basis = kernel_basis(KernelSpec(args.kernel, args.rho), grid, args.tol)
    cfg = SimConfig(args.n, args.p, args.mean, args.score_halfwidth, args.seed)
    data = kl_simulate(cfg, basis)
    write_curves_csv(args.output, grid, data.values)
    write_meta(meta_path(args.output), {
        "command": "simulate",
        "kernel_family": args.kernel,
        "rho": args.rho,
        "grid_points": args.grid_points,
        "n": args.n,
        "p": args.p,
        "mean": args.mean,
        "score_halfwidth": args.score_halfwidth,
        "modes": basis.m,
        "tau": data.tau,
        "tol": args.tol,
        "seed": args.seed,
    })
    print(f"wrote {args.n} curves to {args.output}")


def cmd_smooth(args) -> None:
    data = _load_sample(args)
    basis = kernel_basis(KernelSpec(args.kernel, args.rho), data.grid, args.tol)
    mu_hat = penalized_mean(data, basis, SmootherConfig(args.phi, args.eta))
    write_curves_csv(args.output, data.grid, mu_hat.values)
    write_meta(meta_path(args.output), {
        "command": "smooth",
        "kernel_family": args.kernel,
        "rho": args.rho,
        "phi": args.phi,
        "eta": args.eta,
        "n": data.n,
        "tau": data.tau,
        "modes": basis.m,
        "tol": args.tol,
        "seed": args.seed,
    })
    print(f"wrote smoothed mean to {args.output}")


def _release_pipeline(args):
    data = _load_sample(args)
    basis = kernel_basis(KernelSpec(args.kernel, args.rho), data.grid, args.tol)
    mu_hat = penalized_mean(data, basis, SmootherConfig(args.phi, args.eta))
    budget = PrivacyBudget(args.epsilon, args.delta)
    calib = calibrate(basis, args.phi, args.eta, data.tau, data.n, budget, args.method)
    return data, basis, mu_hat, calib


def cmd_release(args) -> None:
    data, basis, mu_hat, calib = _release_pipeline(args)
    release = release_function(mu_hat, basis, calib, args.seed)
    write_curves_csv(args.output, data.grid, release.curve.values)
    write_meta(meta_path(args.output), release.meta.as_dict())
    print(f"wrote sanitized release to {args.output} "
          f"(delta_sq={format_float(calib.delta_sq)}, sigma_sq={format_float(calib.sigma_sq)})")


def cmd_projections(args) -> None:
    data, basis, mu_hat, calib = _release_pipeline(args)
    points = args.at
    functionals = np.stack([point_eval_functional(basis, t) for t in points])
    release = release_projections(mu_hat, functionals, basis, calib, args.seed)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(format_float(t) for t in points) + "\n")
        fh.write(",".join(format_float(v) for v in release.projections) + "\n")
    write_meta(meta_path(args.output), release.meta.as_dict())
    print(f"wrote {len(points)} sanitized point evaluations to {args.output}")


def _read_single_curve(path):
    grid, values = read_curves_csv(path)
    return Curve(values[0], grid)


def cmd_audit(args) -> None:
    theta_d = _read_single_curve(args.theta_d)
    theta_dp = _read_single_curve(args.theta_dp)
    if not theta_d.grid.matches(theta_dp.grid):
        raise ValueError("theta curves live on different grids")
    basis = kernel_basis(KernelSpec(args.kernel, args.rho), theta_d.grid, args.tol)
    budget = PrivacyBudget(args.epsilon, args.delta)
    if args.sigma_sq is not None:
        sigma_sq = args.sigma_sq
    else:
        diff = Curve(theta_d.values - theta_dp.values, theta_d.grid)
        sigma_sq = noise_scale(budget, cm_norm_sq(coefficients(diff, basis), basis))
    report = dp_audit(theta_d, theta_dp, basis, budget, sigma_sq,
                      args.samples, args.seed, args.swap)
    write_meta(args.output, {
        "command": "audit",
        "kernel_family": args.kernel,
        "rho": args.rho,
        "epsilon": report.epsilon,
        "delta": report.delta,
        "sigma_sq": sigma_sq,
        "n_samples": report.n_samples,
        "empirical_violation_rate": report.empirical_violation_rate,
        "mc_stderr": report.mc_stderr,
        "pass": report.passed,
        "undercalibrated": report.undercalibrated,
        "swap": args.swap,
        "seed": args.seed,
    })
    verdict = "pass" if report.passed else "FAIL"
    print(f"audit {verdict}: rate={format_float(report.empirical_violation_rate)} "
          f"vs delta={format_float(report.delta)}")


def cmd_cv(args) -> None:
    data = _load_sample(args)
    rho_values = sorted(args.rho_grid)
    scores = [
        cv_score(data, KernelSpec(args.kernel, rho), args.phi, args.eta,
                 args.folds, args.seed, args.tol)
        for rho in rho_values
    ]
    best = int(np.argmin(scores))  # argmin takes the first, i.e. smallest rho
    write_meta(args.output, {
        "command": "cv",
        "kernel_family": args.kernel,
        "phi": args.phi,
        "eta": args.eta,
        "folds": args.folds,
        "n": data.n,
        "rho_values": ",".join(format_float(r) for r in rho_values),
        "scores": ",".join(format_float(s) for s in scores),
        "selected_rho": rho_values[best],
        "selected_score": scores[best],
        "seed": args.seed,
    })
    print(f"cv selected rho={format_float(rho_values[best])}")


def cmd_pcv(args) -> None:
    data = _load_sample(args)
    grid = SelectionGrid(tuple(sorted(args.phi_grid)), tuple(sorted(args.rho_grid)),
                         args.folds, args.draws)
    budget = PrivacyBudget(args.epsilon, args.delta)
    phi_star, rho_star = pcv_select(
        data, args.kernel, grid, args.eta, budget, args.seed,
        args.calibrate_on_full_n, args.tol,
    )
    write_meta(args.output, {
        "command": "pcv",
        "kernel_family": args.kernel,
        "eta": args.eta,
        "epsilon": budget.epsilon,
        "delta": budget.delta,
        "folds": grid.folds,
        "mc_draws": grid.mc_draws,
        "n": data.n,
        "phi_values": ",".join(format_float(v) for v in grid.phi_values),
        "rho_values": ",".join(format_float(v) for v in grid.rho_values),
        "selected_phi": phi_star,
        "selected_rho": rho_star,
        "calibrate_on_full_n": args.calibrate_on_full_n,
        "seed": args.seed,
    })
    print(f"pcv selected phi={format_float(phi_star)} rho={format_float(rho_star)}")


def _sweep_values(parameter: str, raw: str):
    if parameter in ("kernel", "mean"):
        return _str_list(raw)
    if parameter == "n":
        return [int(float(v)) for v in _float_list(raw)]
    return _float_list(raw)


def _sweep_point(parameter, value, args):
    pack = {
        "kernel": args.kernel, "rho": args.rho, "phi": args.phi, "eta": args.eta,
        "epsilon": args.epsilon, "delta": args.delta, "n": args.n, "p": args.p,
        "mean": args.mean,
    }
    pack[parameter] = value
    grid = uniform_grid(args.grid_points)
    basis = kernel_basis(KernelSpec(pack["kernel"], pack["rho"]), grid, args.tol)
    mu = default_mean(pack["mean"], grid)
    cfg = SimConfig(pack["n"], pack["p"], pack["mean"], args.score_halfwidth, args.seed)
    data = kl_simulate(cfg, basis)
    mu_hat = penalized_mean(data, basis, SmootherConfig(pack["phi"], pack["eta"]))
    budget = PrivacyBudget(pack["epsilon"], pack["delta"])
    calib = calibrate(basis, pack["phi"], pack["eta"], data.tau, data.n, budget,
                      args.method)
    err_smooth = float(np.sum(grid.weights * (mu_hat.values - mu.values) ** 2))
    xi = make_rng(derive_seed(args.seed, "sweep", parameter, value)).standard_normal(
        (args.draws, basis.m)
    )
    noise = np.sqrt(calib.sigma_sq) * np.sqrt(basis.eigenvalues) * xi
    err_noise = float(np.sum(noise**2, axis=1).mean())
    cross = coefficients(Curve(mu_hat.values - mu.values, grid), basis)
    per_draw = err_smooth + 2.0 * noise @ cross + np.sum(noise**2, axis=1)
    return err_smooth, err_noise, float(per_draw.mean())


def cmd_sweep(args) -> None:
    values = _sweep_values(args.sweep, args.values)
    if not values:
        raise ValueError("sweep needs at least one value")
    rows = []
    for value in values:
        err_smooth, err_noise, err_total = _sweep_point(args.sweep, value, args)
        rows.append((args.sweep, value, "smooth_vs_truth", err_smooth))
        rows.append((args.sweep, value, "release_vs_smooth", err_noise))
        rows.append((args.sweep, value, "release_vs_truth", err_total))
    write_long_csv(args.output, ["parameter", "value", "metric", "estimate"], rows)
    write_meta(meta_path(args.output), {
        "command": "sweep",
        "parameter": args.sweep,
        "values": args.values,
        "kernel_family": args.kernel,
        "rho": args.rho,
        "phi": args.phi,
        "eta": args.eta,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "n": args.n,
        "p": args.p,
        "mean": args.mean,
        "grid_points": args.grid_points,
        "score_halfwidth": args.score_halfwidth,
        "method": args.method,
        "draws": args.draws,
        "tol": args.tol,
        "seed": args.seed,
    })
    print(f"wrote sweep over {args.sweep} ({len(values)} values) to {args.output}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdpriv",
        description="Differentially private releases of curve-valued statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate curves by Karhunen-Loeve expansion")
    _add_kernel_args(p)
    p.add_argument("--n", type=int, default=25, help="number of curves (default 25)")
    p.add_argument("--p", type=float, default=4.0, help="score decay exponent (default 4)")
    p.add_argument("--grid-points", type=int, default=100,
                   help="equispaced grid size (default 100)")
    p.add_argument("--mean", default="sin_default", choices=("sin_default", "zero"),
                   help="mean function name (default sin_default)")
    p.add_argument("--score-halfwidth", type=float, default=0.4,
                   help="uniform score halfwidth (default 0.4)")
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("smooth", help="penalized mean estimate of a curve sample")
    p.add_argument("--input", required=True, help="curve CSV to smooth")
    p.add_argument("--tau", type=float, default=None,
                   help="override the norm bound (default: from data)")
    _add_kernel_args(p)
    _add_smoother_args(p)
    _add_common(p)
    p.set_defaults(handler=cmd_smooth)

    for name, handler in (("release", cmd_release), ("projections", cmd_projections)):
        p = sub.add_parser(
            name,
            help="sanitized full-function release" if name == "release"
            else "sanitized point evaluations",
        )
        p.add_argument("--input", required=True, help="curve CSV to privatize")
        p.add_argument("--tau", type=float, default=None,
                       help="override the norm bound (default: from data)")
        _add_kernel_args(p)
        _add_smoother_args(p)
        _add_budget_args(p)
        p.add_argument("--method", default="exact_spectral",
                       choices=("exact_spectral", "closed_form"),
                       help="sensitivity bound to calibrate with")
        if name == "projections":
            p.add_argument("--at", type=_float_list, required=True,
                           help="comma-separated grid points to evaluate at")
        _add_common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("audit", help="Monte-Carlo audit of an adjacent summary pair")
    p.add_argument("--theta-d", required=True, help="curve CSV with the first summary")
    p.add_argument("--theta-dp", required=True, help="curve CSV with the adjacent summary")
    _add_kernel_args(p)
    _add_budget_args(p)
    p.add_argument("--sigma-sq", type=float, default=None,
                   help="noise variance to audit (default: calibrated for the pair)")
    p.add_argument("--samples", type=int, default=100_000,
                   help="Monte-Carlo sample count (default 100000)")
    p.add_argument("--swap", action="store_true", help="audit the swapped direction")
    _add_common(p)
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("cv", help="cross-validate the kernel range at fixed phi")
    p.add_argument("--input", required=True, help="curve CSV")
    _add_kernel_args(p)
    _add_smoother_args(p)
    p.add_argument("--rho-grid", type=_float_list, required=True,
                   help="comma-separated candidate range parameters")
    p.add_argument("--folds", type=int, default=10, help="CV folds (default 10)")
    _add_common(p)
    p.set_defaults(handler=cmd_cv)

    p = sub.add_parser("pcv", help="private cross-validation over (phi, rho)")
    p.add_argument("--input", required=True, help="curve CSV")
    _add_kernel_args(p)
    p.add_argument("--eta", type=float, default=1.0, help="penalty exponent (default 1)")
    _add_budget_args(p)
    p.add_argument("--phi-grid", type=_float_list, required=True,
                   help="comma-separated candidate penalties")
    p.add_argument("--rho-grid", type=_float_list, required=True,
                   help="comma-separated candidate range parameters")
    p.add_argument("--folds", type=int, default=10, help="CV folds (default 10)")
    p.add_argument("--draws", type=int, default=1000,
                   help="sanitized draws per cell (default 1000)")
    p.add_argument("--calibrate-on-full-n", action="store_true",
                   help="calibrate fold noise with the full sample size and tau")
    _add_common(p)
    p.set_defaults(handler=cmd_pcv)

    p = sub.add_parser("sweep", help="vary one parameter and tabulate expected errors")
    p.add_argument("--sweep", required=True, choices=SWEEP_PARAMETERS,
                   help="the single parameter to vary")
    p.add_argument("--values", required=True,
                   help="comma-separated values for the swept parameter")
    _add_kernel_args(p)
    _add_smoother_args(p)
    _add_budget_args(p)
    p.add_argument("--n", type=int, default=25, help="number of curves (default 25)")
    p.add_argument("--p", type=float, default=4.0, help="score decay exponent (default 4)")
    p.add_argument("--grid-points", type=int, default=100,
                   help="equispaced grid size (default 100)")
    p.add_argument("--mean", default="sin_default", choices=("sin_default", "zero"),
                   help="mean function name (default sin_default)")
    p.add_argument("--score-halfwidth", type=float, default=0.4,
                   help="uniform score halfwidth (default 0.4)")
    p.add_argument("--method", default="exact_spectral",
                   choices=("exact_spectral", "closed_form"),
                   help="sensitivity bound to calibrate with")
    p.add_argument("--draws", type=int, default=200,
                   help="Monte-Carlo draws per swept value (default 200)")
    _add_common(p)
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.handler(args)
        return 0
    except PrivacyRefusalError as exc:
        print(f"privacy refusal: {exc}", file=sys.stderr)
        return 3
    except (DegenerateKernelError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except (CsvFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
