"""Command-line entry point.

Exit codes: 0 success (or exists verdict), 1 invalid usage, 2 runtime error
(file, parse, evaluation), 3 empty-domain verdict from `domain`.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import chsh, deriv, simulate
from .errors import BellhopError, ExprSyntaxError, OutOfDomain, UndefinedPoint
from .observables import log_curve, make_observable
from .steprv import combine

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_EMPTY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    p = _Parser(prog="bellhop", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate an observable at a point")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--x", type=float, required=True)

    sp = sub.add_parser("domain", help="existence analysis of an expression")
    sp.add_argument("--expr", required=True)

    sp = sub.add_parser("expect", help="exact correlators of a family file")
    sp.add_argument("--family", required=True)

    sp = sub.add_parser("saturate", help="write a family saturating |S| = 4")
    sp.add_argument("--out", required=True)
    sp.add_argument("--grid", type=int, default=None,
                    help="optimize on an NxN grid instead of the analytic family")

    sp = sub.add_parser("simulate", help="Monte-Carlo run of a family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--log", default=None, help="per-trial CSV event log")

    sp = sub.add_parser("check-classical", help="randomized |S| <= 2 oracle suite")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("figures", help="write figure data CSVs")
    sp.add_argument("--out", required=True)

    return p


def _cmd_eval(args) -> int:
    rv = make_observable(args.alpha)
    try:
        value = rv.eval(args.x)
    except (OutOfDomain, UndefinedPoint) as exc:
        print(type(exc).__name__)
        return EXIT_OK
    print(f"{int(value):+d}")
    return EXIT_OK


def _cmd_domain(args) -> int:
    report = deriv.analyze(deriv.parse(args.expr))
    print(deriv.format_report(report))
    return EXIT_OK if report.verdict == "exists" else EXIT_EMPTY


def _load_family(path: str) -> chsh.ChshFamily:
    with open(path) as fh:
        return chsh.ChshFamily.from_dict(json.load(fh))


def _cmd_expect(args) -> int:
    family = _load_family(args.family)
    e00, e10, e01, e11 = family.expectations()
    for label, e in zip(("00", "10", "01", "11"), (e00, e10, e01, e11)):
        print(f"E[a{label[0]}*b{label[1]}] = {e:.12g}")
    for key, value in family.marginals().items():
        print(f"<{key}> = {value:.12g}")
    print(f"S = {chsh.chsh_value(e00, e10, e01, e11):.12g}")
    return EXIT_OK


def _cmd_saturate(args) -> int:
    if args.grid is None:
        family = chsh.saturating_family()
    else:
        family, _ = chsh.optimize_family((1.0, 1.0, 1.0, -1.0), (args.grid, args.grid))
    with open(args.out, "w") as fh:
        json.dump(family.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    family = _load_family(args.family)
    config = simulate.ExperimentConfig(
        family=family,
        n_trials=args.trials,
        master_seed=args.seed,
        n_workers=args.workers,
    )
    if args.log:
        with open(args.log, "w") as fh:
            summary = simulate.run_experiment(config, event_log=fh)
    else:
        summary = simulate.run_experiment(config)
    report = simulate.estimate(summary)
    print("pair  trials    corr       se        <a>       <b>")
    for (alpha, beta), pair in zip(chsh.PAIRS, report.pairs):
        print(
            f"({alpha},{beta}) {pair.trials:8d} {pair.correlator:+9.6f} "
            f"{pair.correlator_se:9.6f} {pair.mean_a:+9.6f} {pair.mean_b:+9.6f}"
        )
    print(f"S = {report.s_value:.6f} ± {report.s_se:.6f}")
    return EXIT_OK


def _cmd_check_classical(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        a0, a1, b0, b1, rho = chsh.random_classical_instance(rng)
        s = chsh.classical_bound_check(a0, a1, b0, b1, rho)
        worst = max(worst, abs(s))
        if abs(s) > 2.0 + 1e-12:
            print(f"FAIL: |S| = {abs(s)!r} > 2")
            return EXIT_RUNTIME
    print(f"OK: {args.trials} common-domain instances, max |S| = {worst:.12g} <= 2")
    return EXIT_OK


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{value:.17g}"


def _try_eval(rv, x):
    try:
        return rv.eval(x)
    except (OutOfDomain, UndefinedPoint):
        return None


def write_figures(out_dir: str) -> None:
    """Emit fig1.csv, fig2.csv, fig3.csv; deterministic, nan outside domains."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    a0 = make_observable(0.0)

    with open(out / "fig1.csv", "w") as fh:
        fh.write("x,a0,logcurve\n")
        for i in range(1001):
            x = i / 1000
            try:
                curve = log_curve(0.0, x)
            except OutOfDomain:
                curve = None
            if x in (0.25, 0.75):  # sign-change points: ln = 0, sign undefined
                curve = None
            fh.write(f"{x:.3f},{_fmt(_try_eval(a0, x))},{_fmt(curve)}\n")

    with open(out / "fig2.csv", "w") as fh:
        fh.write("alpha,x,value\n")
        for i in range(101):
            alpha = i / 100
            rv = make_observable(alpha)
            for j in range(1001):
                x = alpha + j / 1000
                fh.write(f"{alpha:.2f},{x:.3f},{_fmt(_try_eval(rv, x))}\n")

    with open(out / "fig3.csv", "w") as fh:
        fh.write("alpha,x,sumvalue\n")
        for i in range(101):
            alpha = i / 100
            try:
                total = combine(a0, make_observable(alpha), "sum")
            except BellhopError:
                total = None
            for j in range(1001):
                x = j / 1000
                value = None if total is None else _try_eval(total, x)
                fh.write(f"{alpha:.2f},{x:.3f},{_fmt(value)}\n")


def _cmd_figures(args) -> int:
    write_figures(args.out)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "domain": _cmd_domain,
    "expect": _cmd_expect,
    "saturate": _cmd_saturate,
    "simulate": _cmd_simulate,
    "check-classical": _cmd_check_classical,
    "figures": _cmd_figures,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ExprSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (BellhopError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
