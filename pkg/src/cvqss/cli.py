"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 no-cloning violation, 3 rank failure,
4 verification failure.  ``CVQSS_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

from . import cost, decoder, fidelity, io
from .errors import (
    BadSubset, CVQSSError, InvalidParam, NoCloningViolation, RankDeficient, Singular, TooManyDropped,
)
from .scheme import ThresholdParams, make_scheme, validate

EXIT_OK, EXIT_USAGE, EXIT_NO_CLONING, EXIT_RANK, EXIT_VERIFY = 0, 1, 2, 3, 4
AGREEMENT_TOL = 1e-6


class UsageError(Exception):
    pass


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(spec: str) -> list[float]:
    """``start:stop:step`` with both endpoints included (stop within half a step)."""
    try:
        start, stop, step = (float(s) for s in spec.split(":"))
    except ValueError:
        raise UsageError(f"bad grid {spec!r}; expected start:stop:step") from None
    if not all(map(math.isfinite, (start, stop, step))) or step <= 0 or stop < start:
        raise UsageError(f"bad grid {spec!r}; need finite values, step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_subset(spec: str) -> tuple[int, ...]:
    try:
        players = tuple(int(s) - 1 for s in spec.split(",") if s.strip())
    except ValueError:
        raise UsageError(f"bad subset {spec!r}; expected comma-separated player numbers") from None
    return players


def _seed(args) -> int:
    env = os.environ.get("CVQSS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CVQSS_SEED must be an integer, got {env!r}") from None
    return args.seed


def _scheme_from_args(args):
    if getattr(args, "scheme", None):
        try:
            return io.load_scheme(args.scheme)
        except OSError as exc:
            raise UsageError(f"cannot read scheme file: {exc}") from None
    if args.k is None:
        raise UsageError("give either --scheme FILE or --k")
    n = args.n if args.n is not None else 2 * args.k - 1
    return make_scheme(ThresholdParams(args.k, n), _seed(args))


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        io.write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def plan_report(view, subset: Sequence[int], gamma: float | None = None) -> dict:
    """Decoding plan plus its optimum-cost data and verification residuals."""
    sp = decoder.split(view, subset)
    build = decoder.build_T(sp, gamma)
    plan = decoder.factor(build.T, build.alpha, build.beta, build.gamma_free, build.W, sp.collaborators)
    best = cost.minimize_gamma_analytic(build.alpha, build.beta)
    xi = decoder.xi_system(sp, build)
    resid = xi.residuals()
    checks = {
        "reconstruction_residual": plan.reconstruction_error(),
        "orthogonality_residual": plan.orthogonality_error(),
        "xi_alpha1_residual": resid["alpha1"],
        "xi_beta1_residual": resid["beta1"],
        "xi_span_residual": resid["span"],
        "squeezers": plan.squeezer_count(),
    }
    checks["verified"] = (
        checks["reconstruction_residual"] <= 1e-10
        and checks["orthogonality_residual"] <= 1e-10
        and xi.check()
        and checks["squeezers"] <= 2
    )
    doc = plan.to_dict()
    doc.update(
        gamma0=best.gamma0,
        R_min=best.r_min,
        total_squeezing=plan.total_squeezing,
        case=best.case_tag.value,
        verification=checks,
    )
    return doc


def cmd_scheme(args) -> int:
    seed = _seed(args)
    n = args.n if args.n is not None else 2 * args.k - 1
    params = ThresholdParams(args.k, n)
    view = make_scheme(params, seed)
    report = validate(view.enc.g, view.k)
    doc = io.scheme_to_dict(view)
    doc["validation"] = report.to_dict()
    _emit(args, io.dumps(doc))
    return EXIT_OK if report.passed else EXIT_RANK


def cmd_decode(args) -> int:
    view = _scheme_from_args(args)
    if args.all_subsets:
        subsets = view.collaborator_subsets()
    elif args.subset:
        subsets = [parse_subset(args.subset)]
    else:
        raise UsageError("give --subset or --all-subsets")
    plans = []
    for s in subsets:
        if len(s) != view.k:
            raise UsageError(f"subset must name exactly k={view.k} players, got {len(s)}")
        try:
            plans.append(plan_report(view, s, args.gamma))
        except (RankDeficient, Singular) as exc:
            raise CommandFailed(EXIT_RANK, f"rank failure for subset {[i + 1 for i in s]}: {exc}") from None
    doc = plans if args.all_subsets else plans[0]
    _emit(args, io.dumps(doc))
    ok = all(p["verification"]["verified"] for p in plans)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_fidelity_curve(args) -> int:
    if args.u < 0 or args.v < 0:
        raise UsageError("u and v must be non-negative")
    grid = parse_grid(args.r)
    curve = fidelity.fidelity_curve(args.u, args.v, grid)
    header = ["r", "F"]
    rows = [list(pt) for pt in curve]
    if args.scheme:
        view = io.load_scheme(args.scheme)
        subset = parse_subset(args.subset) if args.subset else view.accessible[: view.k]
        header += ["F_sim", "F_realized"]
        for row in rows:
            a = math.exp(row[0])
            row.extend(fidelity.end_to_end_fidelity(view, subset, a))
    if args.format == "json":
        _emit(args, io.dumps({"u": args.u, "v": args.v, "columns": header, "rows": rows}))
    else:
        _emit(args, io.to_csv(header, rows))
    return EXIT_OK


def cost_report(alpha: float, beta: float, printed_formula: bool = False) -> dict:
    analytic = cost.minimize_gamma_analytic(alpha, beta)
    oracle = cost.minimize_gamma_oracle(alpha, beta)
    delta = abs(analytic.r_min - oracle.r_min)
    doc = {
        "alpha": alpha,
        "beta": beta,
        "analytic": analytic.to_dict(),
        "oracle": oracle.to_dict(),
        "delta_r_min": delta,
        "agree": delta <= AGREEMENT_TOL,
        "in_case_i_region": cost.in_case_i_region(alpha, beta),
        "in_case_ii_region": cost.in_case_ii_region(alpha, beta),
    }
    printed = cost.case_i_printed(alpha, beta)
    evaluated = cost.case_i_evaluated(alpha, beta)
    doc["case_i_readings"] = {
        "printed_ln_kappa_alpha": printed,
        "evaluated_ln_alpha_sqrt_kappa": evaluated,
        "printed_matches_oracle": printed is not None and abs(printed - oracle.r_min) <= AGREEMENT_TOL,
        "evaluated_matches_oracle": evaluated is not None and abs(evaluated - oracle.r_min) <= AGREEMENT_TOL,
    }
    if printed_formula and printed is not None:
        if not doc["case_i_readings"]["printed_matches_oracle"]:
            doc["note"] = (
                f"|ln(kappa*alpha)| = {printed!r} disagrees with the oracle minimum "
                f"{oracle.r_min!r}; R at gamma = sqrt(kappa) is |ln(|alpha|*sqrt(kappa))| = {evaluated!r}"
            )
    return doc


def cmd_cost_min(args) -> int:
    if args.alpha == 0 or not math.isfinite(args.alpha) or not math.isfinite(args.beta):
        raise UsageError("alpha must be finite and nonzero")
    doc = cost_report(args.alpha, args.beta, args.printed_formula)
    _emit(args, io.dumps(doc))
    return EXIT_OK if doc["agree"] else EXIT_VERIFY


def cmd_sweep(args) -> int:
    view = _scheme_from_args(args)
    grid = parse_grid(args.r)
    header = ["subset", "r", "u", "v", "F_analytic", "F_sim", "r1", "r2", "R", "gamma0"]
    rows = []
    for subset in view.collaborator_subsets():
        plan = decoder.plan(view, subset)
        label = "-".join(str(i + 1) for i in subset)
        for r in grid:
            a = math.exp(r)
            p = fidelity.realized_params(view, subset, a)
            f_sim, f_an = fidelity.end_to_end_fidelity(view, subset, a)
            rows.append([label, r, p.u, p.v, f_an, f_sim, plan.r1, plan.r2,
                         plan.total_squeezing, plan.gamma_free])
    if args.format == "json":
        _emit(args, io.dumps({"k": view.k, "n": view.n, "columns": header, "rows": rows}))
    else:
        _emit(args, io.to_csv(header, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(inject_fault=args.inject_fault)
    if args.json:
        _emit(args, io.dumps([r.to_dict() for r in results]))
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
        _emit(args, "\n".join(lines) + "\n")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"verification failed: {failed[0].name}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvqss", description="Continuous-variable (k, 2k-1) threshold quantum secret sharing.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def scheme_source(p, need_k=False):
        p.add_argument("--scheme", help="scheme JSON produced by the `scheme` command")
        p.add_argument("--k", type=int, required=need_k, help="threshold")
        p.add_argument("--n", type=int, help="number of players (default 2k-1)")
        p.add_argument("--seed", type=int, default=42, help="RNG seed (CVQSS_SEED overrides)")

    p = sub.add_parser("scheme", help="generate and validate a random encoding")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("decode", help="disentangling plan for a collaborating subset")
    scheme_source(p)
    p.add_argument("--subset", help="comma-separated player numbers, e.g. 1,2")
    p.add_argument("--all-subsets", action="store_true")
    p.add_argument("--gamma", type=float, help="override the free parameter (default: cost optimum)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser(
        "fidelity-curve",
        help="F versus r = ln a",
        description="Columns: r, F (closed form for the given u, v); with --scheme also "
                    "F_sim (Gaussian simulation) and F_realized (closed form with the decoder's own u, v).",
    )
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--r", default="-2:3:0.1", help="grid start:stop:step (inclusive)")
    p.add_argument("--scheme")
    p.add_argument("--subset")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fidelity_curve)

    p = sub.add_parser("cost-min", help="minimum total squeezing over gamma")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--printed-formula", action="store_true",
                   help="also compare |ln(kappa*alpha)| for case (i) and note any discrepancy")
    p.add_argument("--output")
    p.set_defaults(func=cmd_cost_min)

    p = sub.add_parser("sweep", help="fidelity and cost over all subsets and an r grid")
    scheme_source(p)
    p.add_argument("--r", default="0:6:1")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--json", action="store_true")
    p.add_argument("--inject-fault", action="store_true", help="negative control: perturb Z orthogonality")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoCloningViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CLONING
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (BadSubset, TooManyDropped, InvalidParam) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RankDeficient, Singular) as exc:
        print(f"rank failure: {exc}", file=sys.stderr)
        return EXIT_RANK
    except CVQSSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
