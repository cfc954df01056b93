"""Command-line entry point.

Runs verification suites, dumps the system catalogue, and integrates the
base system from exact oracle initial data, emitting machine-readable
reports.  Exit code 0 on overall PASS, 1 on any FAIL, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .reports import SUITE_NAMES, RunConfig, UsageError, emit_report, run_suite

SEED_ENV_VAR = "KRAWPV_SEED"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="krawpv",
        description="verification suites for the Krawtchouk-type system lab",
    )
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",),
                   help="verification suite to run")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (overrides ${SEED_ENV_VAR}; default 20260823)")
    p.add_argument("--samples", type=int, default=50,
                   help="random points per identity check")
    p.add_argument("--N", type=int, action="append", dest="Ns", metavar="N",
                   help="restrict the parameter sweep to this N (repeatable)")
    p.add_argument("--n", type=int, action="append", dest="ns", metavar="n",
                   help="restrict the sweep to this degree index (repeatable)")
    p.add_argument("--alpha", type=_fraction, action="append", dest="alphas",
                   help="restrict the sweep to this rational alpha (repeatable)")
    p.add_argument("--t", type=_fraction, action="append", dest="ts",
                   help="restrict the sweep to this rational t (repeatable)")
    p.add_argument("--from-t", type=float, default=1.0,
                   help="integration window start (default 1)")
    p.add_argument("--to-t", type=float, default=2.0,
                   help="integration window end (default 2)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="float-mode tolerance (default 1e-6)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--dump-catalogue", action="store_true",
                   help="emit the system registry as JSON and exit")
    p.add_argument("--integrate", metavar="SYSTEM_ID",
                   help="integrate a catalogued system from oracle initial "
                        "data and emit a trajectory CSV")
    return p


def _resolve_seed(arg_seed: Optional[int]) -> int:
    if arg_seed is not None:
        return arg_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"${SEED_ENV_VAR} is not an integer: {env!r}") from exc
    return 20260823


def _dump_catalogue() -> str:
    from .systems import get_system, system_ids

    out = []
    for sid in system_ids():
        s = get_system(sid)
        out.append({
            "id": s.id,
            "chart": list(s.chart),
            "rhs1_num": s.rhs1_num.to_prefix(),
            "rhs1_den": s.rhs1_den.to_prefix(),
            "rhs2_num": s.rhs2_num.to_prefix(),
            "rhs2_den": s.rhs2_den.to_prefix(),
            "has_divisor": s.has_divisor,
            "alpha_fixed": None if s.alpha_fixed is None
            else f"{s.alpha_fixed.numerator}/{s.alpha_fixed.denominator}",
        })
    return json.dumps(out, indent=2) + "\n"


def _integrate_csv(system_id: str, args) -> str:
    from .integrate import integrate_planar, trajectory_csv
    from .oracle import WeightParams, oracle_xy
    from .systems import get_system

    N = args.Ns[0] if args.Ns else 2
    n = args.ns[0] if args.ns else min(1, N - 1)
    alpha = args.alphas[0] if args.alphas else Fraction(0)
    system = get_system(system_id)
    if system_id != "original":
        raise UsageError(
            "only the base (q, p) system has oracle initial data; "
            "use the library API for other charts"
        )
    t0 = Fraction(args.from_t).limit_denominator(10**6)
    xy = oracle_xy(WeightParams(N, alpha, t0), n)
    ic = (float(xy.x[n]), float(xy.y[n]))
    traj = integrate_planar(
        system, ic, float(t0), args.to_t, {"n": n, "N": N, "alpha": alpha}
    )
    return trajectory_csv(traj)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.dump_catalogue:
            _write(_dump_catalogue(), args.out)
            return 0
        if args.integrate:
            _write(_integrate_csv(args.integrate, args), args.out)
            return 0
        if not args.suite:
            parser.print_usage(sys.stderr)
            print("krawpv: error: --suite is required", file=sys.stderr)
            return 2
        cfg = RunConfig(
            seed=_resolve_seed(args.seed),
            samples=args.samples,
            tol=args.tol,
            Ns=tuple(args.Ns) if args.Ns else RunConfig.Ns,
            ns=tuple(args.ns) if args.ns else None,
            alphas=tuple(args.alphas) if args.alphas else RunConfig.alphas,
            ts=tuple(args.ts) if args.ts else RunConfig.ts,
            from_t=args.from_t,
            to_t=args.to_t,
        )
        report = run_suite(args.suite, cfg)
        _write(emit_report(report, args.format), args.out)
        return 0 if report.overall == "PASS" else 1
    except UsageError as exc:
        print(f"krawpv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
