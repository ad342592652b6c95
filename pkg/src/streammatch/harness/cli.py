"""``streammatch`` command line: gen | run | exact | eval | selftest.

Every command prints JSON on stdout. Errors print ``{"error": ..., "message": ...}``
on stderr and exit with status 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..exceptions import ConsistencyError, ParseError
from .runner import ALGORITHMS, BLACK_BOXES, KINDS, evaluate, exact_values, generate, run_estimator
from .selftest import run_selftest
from .streamfile import format_stream, read_stream


def _read_input(path: str):
    if path == "-":
        return read_stream(sys.stdin.read())
    return read_stream(path)


def _load_reports(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read().strip()
    if not text:
        return []
    if text.startswith("["):
        return json.loads(text)
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_gen(args) -> int:
    stream = generate(args.kind, args.n, seed=args.seed, nu=args.nu, W=args.W, t=args.t,
                      parity=args.parity, churn=args.churn, law=args.law)
    text = format_stream(stream, passes=args.passes)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    source = _read_input(args.input)
    report = run_estimator(
        args.algo, source, seed=args.seed, with_exact=args.exact,
        eps=args.eps, passes=args.passes, alpha=args.alpha, blackbox=args.blackbox, delta=args.delta,
    )
    _emit(report.to_dict(timing=not args.no_time))
    return 0 if report.estimate is not None else 1


def cmd_exact(args) -> int:
    _emit(exact_values(_read_input(args.input).stream))
    return 0


def cmd_eval(args) -> int:
    _emit(evaluate(_load_reports(args.runs), _load_reports(args.exact)))
    return 0


def cmd_selftest(args) -> int:
    result = run_selftest(trials=args.trials, seed=args.seed)
    _emit(result)
    return 0 if result["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="streammatch", description="Matching estimation in dynamic graph streams")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated stream file")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--nu", type=int, default=2, help="arboricity bound for arboricity/weighted graphs")
    g.add_argument("--W", type=int, default=16, help="maximum weight for weighted graphs")
    g.add_argument("--law", choices=("uniform", "geometric"), default="uniform")
    g.add_argument("--t", type=int, default=3, help="hyperedge size for bhh")
    g.add_argument("--parity", type=int, choices=(0, 1), default=0)
    g.add_argument("--churn", type=float, default=0.0, help="fraction in [0, 1) of updates that are decoy insert/delete pairs")
    g.add_argument("--passes", type=int, default=None, help="write this many #pass sections")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run an estimator on a stream file")
    r.add_argument("input")
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    r.add_argument("--blackbox", choices=BLACK_BOXES, default="exact")
    r.add_argument("--eps", type=float, default=0.25)
    r.add_argument("--delta", type=float, default=0.05)
    r.add_argument("--alpha", type=float, default=1.0)
    r.add_argument("--passes", type=int, choices=(1, 2), default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--exact", action="store_true", help="also compute the oracle value and ratio")
    r.add_argument("--no-time", action="store_true", help="omit the wall-time field")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("exact", help="oracle values for a stream file")
    e.add_argument("input")
    e.set_defaults(func=cmd_exact)

    v = sub.add_parser("eval", help="join run and exact reports into a ratio table")
    v.add_argument("runs", help="JSON lines (or array) of run reports")
    v.add_argument("exact", help="JSON lines (or array) of exact reports, same order")
    v.set_defaults(func=cmd_eval)

    s = sub.add_parser("selftest", help="run the invariant suites")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - every failure becomes an error report
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, (ParseError, ConsistencyError)) and exc.line is not None:
            err["line"] = exc.line
        sys.stderr.write(json.dumps(err) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
