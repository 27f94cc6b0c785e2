"""Command-line interface.

Subcommands
-----------
recover        seeded sparse-recovery trials at one (n, omega, spikes) point
phase-diagram  success-rate grid written as CSV + PGM heat map + PNG figure
tv2d           phantom reconstruction from a star mask, images + error report
certify        build and print one dual-certificate report
comb verify    pass/fail matrix of the combinatorial identity checks
params         theory tuning constants for a target failure exponent

Exit codes: 0 success, 2 invalid arguments, 1 internal failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, combinatorics, figures, reporting
from .certificates import build_certificate_direct, build_certificate_neumann
from .errors import VacuousRegimeError
from .recover import SolveConfig, solve_p1
from .rng import Rng, hash64
from .sampling import star_mask, uniform_omega
from .signals import IndexSet, gen_sparse_signal
from .spectral import PartialFourierOp, observe


class SystemExit2(Exception):
    """Invalid arguments detected after parsing."""


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        )


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsefourier",
        description="Sparse signal and image recovery from partial Fourier samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="seeded l1 recovery trials")
    p.add_argument("--n", type=_positive_int, required=True, help="signal length")
    p.add_argument("--omega", type=_positive_int, required=True, help="observed frequency count")
    p.add_argument("--spikes", type=_nonneg_int, required=True, help="support size")
    p.add_argument("--seed", type=_nonneg_int, required=True, help="master seed")
    p.add_argument("--trials", type=_positive_int, default=1, help="number of trials")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("phase-diagram", help="success-rate grid over (omega, ratio) cells")
    p.add_argument("--n", type=_positive_int, default=512, help="signal length")
    p.add_argument("--omega-list", type=_int_list, default=list(bench.DEFAULT_OMEGA_SIZES),
                   help="comma-separated omega sizes")
    p.add_argument("--ratios", type=_float_list, default=list(bench.DEFAULT_RATIOS),
                   help="comma-separated |T|/|Omega| ratios")
    p.add_argument("--trials", type=_positive_int, default=100, help="trials per cell")
    p.add_argument("--kind", choices=("p1", "cert"), default="p1", help="experiment kind")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--seed", type=_nonneg_int, default=0, help="master seed")
    p.add_argument("--parallelism", type=_positive_int, default=1, help="worker processes")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("tv2d", help="phantom reconstruction from a star mask")
    p.add_argument("--phantom", choices=("logan", "random"), required=True)
    p.add_argument("--side", type=_positive_int, required=True, help="image side length")
    p.add_argument("--lines", type=_positive_int, required=True, help="radial line count")
    p.add_argument("--seed", type=_nonneg_int, required=True, help="master seed")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.set_defaults(func=cmd_tv2d)

    p = sub.add_parser("certify", help="build one dual-certificate report")
    p.add_argument("--n", type=_positive_int, required=True, help="signal length")
    p.add_argument("--omega", type=_positive_int, required=True, help="observed frequency count")
    p.add_argument("--spikes", type=_positive_int, required=True, help="support size")
    p.add_argument("--seed", type=_nonneg_int, required=True, help="master seed")
    p.add_argument("--method", choices=("direct", "neumann"), default="direct")
    p.add_argument("--terms", type=_positive_int, default=None,
                   help="series terms for the neumann method (default: 2 log n)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("comb", help="combinatorial identity checks")
    comb_sub = p.add_subparsers(dest="comb_command", required=True)
    v = comb_sub.add_parser("verify", help="run the identity check matrix")
    v.add_argument("--max-n", type=_positive_int, default=8,
                   help="largest table index to cross-check (capped at 10)")
    v.set_defaults(func=cmd_comb_verify)

    p = sub.add_parser("params", help="theory constants for failure exponent M")
    p.add_argument("--M", type=float, required=True, dest="m", help="failure exponent")
    p.add_argument("--n", type=_positive_int, required=True, help="signal length")
    p.add_argument("--tau", type=float, required=True, help="sampling rate in (0, 1)")
    p.set_defaults(func=cmd_params)

    return parser


def cmd_recover(args) -> int:
    if args.omega > args.n:
        raise SystemExit2(f"--omega must be at most n = {args.n}")
    if args.spikes > args.n:
        raise SystemExit2(f"--spikes must be at most n = {args.n}")
    cfg = SolveConfig()
    successes = 0
    for trial in range(args.trials):
        rng = Rng(hash64(args.seed, trial))
        f, _ = gen_sparse_signal(args.n, args.spikes, rng)
        omega = uniform_omega(args.n, args.omega, rng)
        op = PartialFourierOp(args.n, omega)
        result = solve_p1(op, observe(op, f), cfg, ground_truth=f)
        successes += bool(result.exact)
        print(
            f"trial {trial}: rel_l2_error={result.rel_l2_error:.3e} "
            f"exact={result.exact} iterations={result.iterations_used}"
        )
    print(f"recovered {successes}/{args.trials} "
          f"(n={args.n}, |Omega|={args.omega}, |T|={args.spikes}, seed={args.seed})")
    return 0


def cmd_phase_diagram(args) -> int:
    if any(v > args.n for v in args.omega_list):
        raise SystemExit2("every omega size must be at most n")
    if any(not 0.0 < r <= 1.0 for r in args.ratios):
        raise SystemExit2("ratios must lie in (0, 1]")
    kind = "p1_recovery" if args.kind == "p1" else "certificate_sufficiency"
    cfg = bench.RunConfig(
        seed=args.seed, parallelism=args.parallelism, out_dir=str(args.out)
    )
    grid = bench.run_phase_diagram(
        cfg,
        kind,
        n=args.n,
        omega_sizes=tuple(args.omega_list),
        ratios=tuple(args.ratios),
        trials=args.trials,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    stem = f"phase_{args.kind}"
    csv_path = reporting.write_csv(grid, args.out / f"{stem}.csv")
    reporting.write_pgm(grid.rates(), args.out / f"{stem}.pgm")
    figures.save_phase_figure(grid, args.out / f"{stem}.png")
    for omega_size in grid.omega_sizes:
        figures.save_rate_curve(
            grid, omega_size, args.out / f"{stem}_omega{omega_size}.png"
        )
    print(f"wrote {csv_path} (+ .pgm heat map, .png figures)")
    for i, omega_size in enumerate(grid.omega_sizes):
        rates = " ".join(f"{r:.2f}" for r in grid.rates()[i])
        print(f"|Omega|={omega_size:4d}: {rates}")
    return 0


def cmd_tv2d(args) -> int:
    if args.side < 8:
        raise SystemExit2("--side must be at least 8")
    kind = "logan_shepp" if args.phantom == "logan" else "random_ellipses"
    cfg = bench.RunConfig(seed=args.seed, out_dir=str(args.out))
    run = bench.run_phantom(cfg, kind, args.side, args.lines)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, img in (
        ("truth", run.truth),
        ("min_energy", run.min_energy),
        ("tv_recon", run.tv_recon),
    ):
        reporting.write_pgm(img, args.out / f"{name}.pgm")
        figures.save_image_figure(img, args.out / f"{name}.png", title=name)
    # star mask bitmap, shown on the centered frequency grid
    mask_grid = np.zeros(args.side * args.side)
    mask_grid[star_mask(args.side, args.lines).indices.indices] = 1.0
    centered = np.fft.fftshift(mask_grid.reshape(args.side, args.side))
    reporting.write_pgm(centered, args.out / "mask.pgm")
    figures.save_image_figure(centered, args.out / "mask.png", title="frequency mask")
    report = args.out / "errors.csv"
    report.write_bytes(
        (
            "reconstruction,rel_l2_error\n"
            f"min_energy,{run.min_energy_error:.6e}\n"
            f"tv,{run.tv_error:.6e}\n"
        ).encode("ascii")
    )
    print(f"mask: {run.mask_size} of {args.side**2} frequencies "
          f"({run.mask_size / args.side**2:.2%})")
    print(f"min-energy rel l2 error: {run.min_energy_error:.6e}")
    print(f"tv         rel l2 error: {run.tv_error:.6e}")
    print(f"wrote images and {report}")
    return 0


def cmd_certify(args) -> int:
    if args.omega > args.n or args.spikes > args.n:
        raise SystemExit2("--omega and --spikes must be at most n")
    rng = Rng(args.seed)
    f, t_set = gen_sparse_signal(args.n, args.spikes, rng)
    omega = uniform_omega(args.n, args.omega, rng)
    signs = f.values[t_set.indices]
    signs = signs / np.abs(signs)
    if args.method == "direct":
        report = build_certificate_direct(t_set, omega, signs)
    else:
        terms = args.terms or max(1, round(2 * math.log(args.n)))
        report = build_certificate_neumann(t_set, omega, signs, terms)
    print(f"method: {report.method}")
    print(f"invertible: {report.invertible} "
          f"(smallest eigenvalue {report.sigma_min_normalized:.6e})")
    if report.invertible:
        print(f"sign match residual: {report.sign_match_residual:.3e}")
        print(f"max |P| off support: {report.off_support_max:.6f}")
        print(f"spectrum leak (rel): {report.spectrum_leak:.3e}")
        if report.neumann_terms is not None:
            split = report.neumann_terms
            print(f"series part max off support: {split.p0_off_max:.6f}")
            print(f"remainder part max off support: {split.p1_off_max:.6f}")
    print(f"certificate valid: {report.certificate_valid}")
    return 0


def cmd_comb_verify(args) -> int:
    max_n = min(args.max_n, 10)
    checks: list[tuple[str, bool]] = []

    tables_ok = True
    for n in range(max_n + 1):
        parts = list(combinatorics.set_partitions(n))
        for k in range(n + 1):
            by_k = sum(1 for q in parts if len(q) == k)
            no_single = sum(
                1 for q in parts if len(q) == k and all(len(b) >= 2 for b in q)
            )
            tables_ok &= by_k == combinatorics.stirling(n, k)
            tables_ok &= no_single == combinatorics.no_singleton_count(n, k)
    checks.append((f"partition tables vs enumeration (n <= {max_n})", tables_ok))

    poly_ok = all(
        abs(combinatorics.f_tau(n, tau) - combinatorics.f_tau_series(n, tau)) < 1e-10
        for n in range(1, max_n + 1)
        for tau in (0.1, 0.25, 0.4)
    )
    checks.append(("polynomial vs series form of F_n", poly_ok))

    bound_ok = all(
        abs(combinatorics.f_tau(n, tau)) <= combinatorics.f_tau_bound(n, tau) + 1e-12
        for n in range(1, max_n + 1)
        for tau in (0.05, 0.1, 0.2, 0.3, 0.4)
    )
    checks.append(("closed-form bound dominates |F_n|", bound_ok))

    incl_ok = all(
        combinatorics.inclusion_exclusion_check(a, g)
        for a in (1, 2, 3, 4)
        for g in (2, 3, 4)
    )
    checks.append(("inclusion-exclusion identity (|A|, |G| <= 4)", incl_ok))

    trace_ok = True
    for n_amb, support in ((6, (0, 1)), (8, (0, 2, 5))):
        t_set = IndexSet.of(n_amb, support)
        for tau in (0.1, 0.3):
            for power in (1, 2):
                lhs = combinatorics.expected_trace_formula(n_amb, t_set, tau, power)
                rhs = combinatorics.expected_trace_enumeration(n_amb, t_set, tau, power)
                trace_ok &= abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
    checks.append(("trace formula vs subset enumeration", trace_ok))

    sweep_ok = all(
        combinatorics.log_ineq_holds(tau, n)
        for tau in (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.44)
        for n in range(4, 41)
    )
    checks.append(("moment-gate log inequality (tau <= .44, 4 <= n <= 40)", sweep_ok))

    width = max(len(name) for name, _ in checks)
    failed = 0
    for name, ok in checks:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}")
        failed += not ok
    return 1 if failed else 0


def cmd_params(args) -> int:
    if not 0.0 < args.tau < 1.0:
        raise SystemExit2("--tau must lie in (0, 1)")
    if args.m <= 0:
        raise SystemExit2("--M must be positive")
    try:
        params = combinatorics.theorem_params(args.m, args.n, args.tau)
    except VacuousRegimeError as exc:
        raise SystemExit2(f"vacuous regime: {exc}")
    print(f"alpha(M)    = {params.alpha_m:.6e}")
    print(f"eps_M       = {params.eps_m:.6f}")
    print(f"series len  = {params.n_iter}")
    print(f"support cap = {params.support_cap}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
