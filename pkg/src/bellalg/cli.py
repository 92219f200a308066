"""Command-line interface.

Exit codes: 0 ok, 2 parse error, 3 invalid pair, 4 verification failure,
5 oracle failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import re
import sys

import numpy as np

from . import oracles
from .bellpair import PairError, load_pair, validate
from .correlation import total_correlation
from .report import analyze
from .separability import (
    EPS_MAX,
    EPS_SEP,
    SolverError,
    classify,
    find_maximally_correlated,
    find_separable,
    restrict,
)
from .states import StateError, abmax_state, load_state, maxent_state, phi_state
from .transport import realize_correlation

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID_PAIR = 3
EXIT_VERIFY = 4
EXIT_ORACLE = 5

REALIZE_TOL = 1e-9

FAMILIES = {
    "phi": (("c",), lambda c: phi_state(c)),
    "maxent": (("a", "phi", "theta"), maxent_state),
    "abmax": (("r", "phi", "theta"), abmax_state),
}
DEFAULT_GRIDS = {
    "phi": {"c": "0:1:11"},
    "maxent": {"a": "0:1:11", "phi": "0:2pi:11", "theta": "0:2pi:11"},
    "abmax": {"r": "0:1:5", "phi": "0:pi/2:5", "theta": "0:2pi:5"},
}

_VALUE_RE = re.compile(
    r"^\s*(?P<num>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)?\s*"
    r"(?P<pi>pi)?\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$"
)


class UsageError(Exception):
    """Bad command-line values; maps to exit code 2."""


def parse_value(text: str) -> float:
    """Parse ``1.5``, ``pi``, ``2pi``, ``pi/2``, ``3pi/4`` and ``-pi``."""
    m = _VALUE_RE.match(text)
    if not m or (m.group("num") is None and m.group("pi") is None):
        if text.strip() in ("-pi", "+pi"):
            return math.copysign(math.pi, -1.0 if text.strip()[0] == "-" else 1.0)
        raise UsageError(f"cannot parse number {text!r}")
    val = float(m.group("num")) if m.group("num") is not None else 1.0
    if m.group("pi"):
        val *= math.pi
    if m.group("den"):
        den = float(m.group("den"))
        if den == 0:
            raise UsageError(f"division by zero in {text!r}")
        val /= den
    return val


def parse_grid(spec: str):
    """``name=start:stop:count`` -> (name, values)."""
    if "=" not in spec:
        raise UsageError(f"grid {spec!r}: expected name=start:stop:count")
    name, rng = spec.split("=", 1)
    parts = rng.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid {spec!r}: expected start:stop:count")
    start, stop = parse_value(parts[0]), parse_value(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid {spec!r}: count {parts[2]!r} is not an integer") from None
    if count < 1:
        raise UsageError(f"grid {spec!r}: count must be >= 1")
    if count == 1:
        return name.strip(), np.array([start])
    return name.strip(), np.linspace(start, stop, count)


def default_seed() -> int:
    env = os.environ.get("BELLPAIR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"BELLPAIR_SEED={env!r} is not an integer") from None


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _vector(text: str):
    try:
        vals = [parse_value(t) for t in text.split(",")]
    except UsageError as exc:
        raise UsageError(f"vector {text!r}: {exc}") from None
    if len(vals) != 3:
        raise UsageError(f"vector {text!r}: expected 3 comma-separated components")
    return np.array(vals)


def _load_pair_checked(spec: str, tol: float, out):
    pair = load_pair(spec)
    report = validate(pair, tol)
    if not report.passed:
        json.dump(report.to_json(), out, indent=2)
        out.write("\n")
        return None
    return pair


def _emit(obj, path):
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# subcommands -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    state = load_state(args.state)
    pair = _load_pair_checked(args.pair, args.tol, sys.stdout)
    if pair is None:
        return EXIT_INVALID_PAIR
    _emit(analyze(state, pair, args.eps, args.eps).to_json(), args.out)
    return EXIT_OK


def cmd_validate_pair(args) -> int:
    pair = load_pair(args.pair)
    report = validate(pair, args.tol)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_INVALID_PAIR


def sweep_rows(family: str, pair, grids: dict, eps: float = EPS_SEP):
    """Yield (params..., norm, r_norm, s_norm, classification) in grid-index order."""
    names, build = FAMILIES[family]
    axes = [grids[n] for n in names]
    for values in itertools.product(*axes):
        state = build(*values)
        cls = classify(state, pair, eps, eps)
        yield (*values, cls.correlation, cls.r_norm, cls.s_norm, str(cls))


def cmd_sweep(args) -> int:
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    names, _ = FAMILIES[args.family]
    specs = dict(DEFAULT_GRIDS[args.family])
    for g in args.grid or []:
        name = g.split("=", 1)[0].strip()
        if name not in names:
            raise UsageError(f"grid parameter {name!r} not in family {args.family!r} ({', '.join(names)})")
        specs[name] = g.split("=", 1)[1]
    grids = {n: parse_grid(f"{n}={specs[n]}")[1] for n in names}
    pair = _load_pair_checked(args.pair, args.tol, sys.stdout)
    if pair is None:
        return EXIT_INVALID_PAIR
    rows = list(sweep_rows(args.family, pair, grids, args.eps))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*names, "norm", "r_norm", "s_norm", "classification"])
        for row in rows:
            writer.writerow([fmt(v) for v in row[:-1]] + [row[-1]])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_solve(args) -> int:
    pair = _load_pair_checked(args.pair, args.tol, sys.stdout)
    if pair is None:
        return EXIT_INVALID_PAIR
    seed = args.seed if args.seed is not None else default_seed()
    try:
        if args.mode == "separable":
            if args.r is None or args.s is None:
                raise UsageError("separable mode needs --r and --s")
            result = find_separable(pair, _vector(args.r), _vector(args.s), seed=seed)
        else:
            result = find_maximally_correlated(pair, seed=seed)
    except SolverError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(result.to_json(), args.out)
    return EXIT_OK


def cmd_realize(args) -> int:
    state = load_state(args.state)
    if not hasattr(state, "amplitudes"):
        raise UsageError("realize needs a pure state")
    c = parse_value(args.c)
    if not 0.0 <= c <= 1.0:
        raise UsageError(f"c={c!r} outside [0, 1]")
    pair = realize_correlation(state, c)
    report = validate(pair, args.tol)
    measured = total_correlation(state, pair)
    ok = report.passed and abs(measured - c) <= REALIZE_TOL
    if args.out:
        _emit(pair.to_json(), args.out)
    br = restrict(state, pair)
    status = "OK" if ok else "FAILED"
    print(f"{status} target={fmt(c)} measured={fmt(measured)} "
          f"deviation={abs(measured - c):.3e} valid_pair={report.passed} "
          f"r_norm={fmt(br.r_norm)} s_norm={fmt(br.s_norm)}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_oracle_check(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    seed = args.seed if args.seed is not None else default_seed()
    results = oracles.run_all(seed, args.n, args.samples)
    for r in results:
        print(r.line(seed))
    failed = [r for r in results if not r.passed]
    if failed:
        for r in failed:
            print(f"oracle failed: {r.name} (worst case seed=[{seed}, {r.worst_case}])",
                  file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bellalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pair=True):
        if pair:
            sp.add_argument("--pair", default="canonical",
                            help="preset (canonical, paper-AB, paper-prime) or pair JSON file")
        sp.add_argument("--tol", type=float, default=1e-10, help="pair validation tolerance")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("analyze", help="correlation report for a state")
    sp.add_argument("--state", required=True)
    sp.add_argument("--eps", type=float, default=EPS_SEP, help="classification threshold")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("validate-pair", help="check the Bell pair axioms")
    common(sp)
    sp.set_defaults(func=cmd_validate_pair)

    sp = sub.add_parser("sweep", help="CSV over a parametrized state family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--grid", action="append", help="name=start:stop:count, repeatable")
    sp.add_argument("--eps", type=float, default=EPS_SEP)
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("solve", help="find separable or maximally correlated states")
    sp.add_argument("--mode", choices=("separable", "maximal"), default="separable")
    sp.add_argument("--r", help="target left Bloch vector x,y,z")
    sp.add_argument("--s", help="target right Bloch vector x,y,z")
    sp.add_argument("--seed", type=int)
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("realize", help="Bell pair giving a state a prescribed correlation")
    sp.add_argument("--state", required=True)
    sp.add_argument("--c", required=True)
    common(sp, pair=False)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("oracle-check", help="run the independent cross-checks")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"parse error: line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
    except (StateError, PairError, UsageError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
