"""levystop command line.

Exit status: 0 on success, 1 when ``verify`` finds a failed check, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import (
    FactorConstructionFailure,
    LevyStopError,
    NonConvergence,
    QuadratureNonConvergence,
    RootBracketFailure,
)
from .model import LevyModel, load_model
from .simulate import estimate_policy_value, sample_triple
from .spectral import find_roots, green_kernel, kernel_from_roots
from .stopping.power import ode_residuals, power_spectral_density, solve_power_problem, value_at
from .stopping.representation import SpectralDensity, value_via_extrema, value_via_kernel
from .stopping.verify import uniqueness_scan, verify_theorem_conditions
from .table import TABLE_COLUMNS, load_rows, reference_rows, solve_table
from .wienerhopf import check_factorization, wh_factors

SUBCOMMANDS = ("roots", "kernel", "factors", "solve", "table", "value", "simulate", "verify")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    n: int

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


def parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi and n >= 2):
        raise argparse.ArgumentTypeError(f"grid needs finite lo < hi and n >= 2, got {text!r}")
    return Grid(lo, hi, n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levystop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, model=True):
        p = sub.add_parser(name, help=help_text)
        if model:
            p.add_argument("--model", required=True, metavar="PATH", help="model JSON file")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        return p

    p = add("roots", "roots of psi(z) = r and partial-fraction weights")
    p.add_argument("--r", type=float, default=1.0)

    p = add("kernel", "Green kernel coefficients, or its density on a grid")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--grid", type=parse_grid)

    p = add("factors", "laws of the killed supremum and infimum")
    p.add_argument("--r", type=float, default=1.0)

    p = add("solve", "threshold of the power-reward problem")
    p.add_argument("--gamma", type=float, required=True)

    p = add("table", "threshold table", model=False)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--paper", "--reference", dest="reference", action="store_true", help="built-in 15-row table")
    src.add_argument("--spec", metavar="PATH", help="JSON list of {alpha, rho, lambda_over_minus_a, gamma}")

    p = add("value", "value function and reward on a grid")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--grid", type=parse_grid, required=True)

    p = add("simulate", "Monte Carlo oracle")
    p.add_argument("--mode", choices=("triple", "policy"), required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=float, default=1.0, help="killing rate for --mode triple")
    p.add_argument("--gamma", type=float, help="reward exponent for --mode policy")
    p.add_argument("--threshold", type=float, help="default: the optimal threshold")
    p.add_argument("--x0", type=float, help="default: threshold - 1")

    p = add("verify", "run the invariant suite; exit 1 on any failure")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=5.0, help="exponent for the power-reward checks")
    return parser


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(float(v)) for v in row])
    return buf.getvalue()


def _want(args, default: str) -> str:
    return args.format or default


def cmd_roots(args, model: LevyModel) -> tuple[int, str]:
    rootset = find_roots(model, args.r)
    doc = rootset.to_dict()
    doc["kernel"] = kernel_from_roots(rootset).to_dict()
    if _want(args, "json") == "csv":
        return EXIT_OK, _dump_csv(("rho", "psi_prime", "A"), [(rt.rho, rt.psi_prime, rt.A) for rt in rootset.roots])
    return EXIT_OK, _dump_json(doc)


def cmd_kernel(args, model: LevyModel) -> tuple[int, str]:
    kernel = green_kernel(model, args.r)
    if args.grid is not None:
        if _want(args, "csv") != "csv":
            raise UsageError("--grid output is CSV only")
        xs = args.grid.points()
        return EXIT_OK, _dump_csv(("x", "density"), zip(xs, kernel.density(xs)))
    if _want(args, "json") != "json":
        raise UsageError("kernel coefficients are emitted as JSON; use --grid for CSV")
    doc = kernel.to_dict()
    doc["total_mass"] = kernel.total_mass()
    return EXIT_OK, _dump_json(doc)


def cmd_factors(args, model: LevyModel) -> tuple[int, str]:
    factors = wh_factors(model, args.r)
    doc = factors.to_dict()
    doc["residual"] = check_factorization(model, args.r)
    return EXIT_OK, _dump_json(doc)


def cmd_solve(args, model: LevyModel) -> tuple[int, str]:
    return EXIT_OK, _dump_json(solve_power_problem(model, args.gamma).to_dict())


def cmd_table(args) -> tuple[int, str]:
    rows = reference_rows() if args.reference else load_rows(args.spec)
    solved = solve_table(rows)
    if _want(args, "csv") == "json":
        return EXIT_OK, _dump_json(solved)
    return EXIT_OK, _dump_csv(TABLE_COLUMNS, [[row[c] for c in TABLE_COLUMNS] for row in solved])


def cmd_value(args, model: LevyModel) -> tuple[int, str]:
    sol = solve_power_problem(model, args.gamma)
    xs = args.grid.points()
    V = value_at(sol, xs)
    g = sol.reward(xs)
    if _want(args, "csv") == "json":
        return EXIT_OK, _dump_json({"x": xs.tolist(), "V": V.tolist(), "g": g.tolist()})
    return EXIT_OK, _dump_csv(("x", "V", "g"), zip(xs, V, g))


def cmd_simulate(args, model: LevyModel) -> tuple[int, str]:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.mode == "triple":
        sample = sample_triple(model, args.r, args.n, args.seed)
        x = sample.x
        doc = {
            "mean": float(x.mean()),
            "stderr": float(x.std(ddof=1) / math.sqrt(args.n)),
            "n": args.n,
            "seed": args.seed,
            "bias_bound": 0.0,
            "sup_mean": float(sample.sup.mean()),
            "inf_mean": float(sample.inf.mean()),
        }
        return EXIT_OK, _dump_json(doc)
    if args.gamma is None:
        raise UsageError("--mode policy needs --gamma")
    threshold = args.threshold
    if threshold is None:
        threshold = solve_power_problem(model, args.gamma).x_star
    x0 = threshold - 1.0 if args.x0 is None else args.x0
    est = estimate_policy_value(model, args.gamma, threshold, x0, args.n, args.seed)
    return EXIT_OK, _dump_json(est.to_dict())


def _check(name: str, value: float, tol: float, ok: bool | None = None) -> dict:
    passed = bool(value < tol) if ok is None else bool(ok)
    return {"check": name, "value": float(value), "tol": tol, "passed": passed}


def run_invariant_suite(model: LevyModel, r: float, gamma: float) -> list[dict]:
    """Factorization, normalization and representation checks; power-problem checks when they apply."""
    checks = []
    rootset = find_roots(model, r)
    kernel = kernel_from_roots(rootset)
    checks.append(_check("kernel_normalization", abs(r * kernel.total_mass() - 1.0), 1e-10))
    inv_sum = float(np.sum(rootset.coefficients))
    if model.b > 0:
        checks.append(_check("continuity_identity", abs(inv_sum), 1e-10))
    elif model.mu == 0 and model.a != 0:
        checks.append(_check("continuity_identity", abs(inv_sum - 1.0 / model.a), 1e-10))
    checks.append(_check("factorization_residual", check_factorization(model, r), 1e-9))

    factors = wh_factors(model, r)
    one_sided = SpectralDensity.indicator((1.0, 2.0))
    two_sided = SpectralDensity.indicator((-math.inf, -1.0), (1.0, math.inf))
    worst = 0.0
    for sigma, points in ((one_sided, (-1.0, 0.0, 0.5, 0.9, 1.0)), (two_sided, (-1.0, -0.5, 0.0, 0.5, 1.0))):
        for x in points:
            worst = max(worst, abs(value_via_kernel(kernel, sigma, x) - value_via_extrema(factors, sigma, x)))
    checks.append(_check("representation_identity", worst, 1e-6))

    if model.is_compound_poisson_down_drift and model.rho > 0:
        checks.extend(_power_checks(model, gamma))
    return checks


def _power_checks(model: LevyModel, gamma: float) -> list[dict]:
    sol = solve_power_problem(model, gamma)
    xs = sol.x_star
    span = 1.0 / sol.rho
    out = []
    pts = np.concatenate([np.linspace(xs - 3 * span, xs - 0.2 * span, 5), np.linspace(xs + 0.2 * span, xs + 3 * span, 5)])
    pts = pts[pts > 0] if (pts > 0).any() else pts
    res_h = ode_residuals(sol, pts, 1e-4)
    res_h2 = ode_residuals(sol, pts, 5e-5)
    out.append(_check("ode_residual", float(np.max(res_h)), 1e-4))
    ratio = float(np.min(res_h / np.maximum(res_h2, 1e-300)))
    out.append(_check("ode_second_order", ratio, 3.5, ok=ratio >= 3.5))

    kernel0 = green_kernel(model, 0.0)
    grid = np.linspace(xs - 40 * span, xs + 5 * span, 60)
    report = verify_theorem_conditions(kernel0, power_spectral_density(model, gamma, xs), sol.reward, xs, grid)
    out.append(_check("theorem_conditions", report.max_stopping_mismatch, 1e-6, ok=report.passed))

    at_star = uniqueness_scan(kernel0, lambda x: power_spectral_density(model, gamma, x), sol.reward, [xs])
    scale = max(1.0, xs**gamma)
    out.append(_check("uniqueness_at_threshold", abs(float(at_star[0])) / scale, 1e-8))
    out.append(_check("no_smooth_fit_gap", sol.no_smooth_fit_gap, 1e-6, ok=gamma == 1 or sol.no_smooth_fit_gap > 1e-6))
    return out


def cmd_verify(args, model: LevyModel) -> tuple[int, str]:
    try:
        checks = run_invariant_suite(model, args.r, args.gamma)
    except (FactorConstructionFailure, NonConvergence, QuadratureNonConvergence, RootBracketFailure) as exc:
        checks = [{"check": "construction", "value": None, "tol": None, "passed": False, "error": str(exc)}]
    passed = all(c["passed"] for c in checks)
    doc = {"passed": passed, "checks": checks}
    return (EXIT_OK if passed else EXIT_FAILED), _dump_json(doc)


HANDLERS = {
    "roots": cmd_roots,
    "kernel": cmd_kernel,
    "factors": cmd_factors,
    "solve": cmd_solve,
    "value": cmd_value,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "table":
            status, text = cmd_table(args)
        else:
            model = load_model(args.model)
            status, text = HANDLERS[args.command](args, model)
    except (UsageError, OSError, json.JSONDecodeError, KeyError) as exc:
        err.write(f"levystop {args.command}: {exc}\n")
        return EXIT_USAGE
    except (LevyStopError, ValueError) as exc:
        err.write(f"levystop {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    out.write(text)
    return status


def main() -> None:
    sys.exit(run())
