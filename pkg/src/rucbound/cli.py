"""Command line front end: ``rucbound {bound, sweep, verify, fef}``.

Exit codes: 0 success, 1 input or usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import re
import sys
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from . import bounds, fef
from .errors import RucboundError
from .io import load_scenario, load_state
from .optimize import OptimizerOptions
from .quantum import I2, KET0, KET1, KET_MINUS, KET_PLUS, QubitState
from .sampling import derive_seed, sample_ru_channel, sample_state, task_rng

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
BOUND_VERIFY_TOL = 1e-3
SUITES = ("bound", "fef", "soundness")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """15 significant digits, locale independent."""
    return format(float(x), ".15g")


def parse_angle(text: str) -> float:
    """Accept plain floats and multiples of pi such as ``pi``, ``pi/2``, ``3pi/4``."""
    s = text.strip().lower().replace(" ", "").replace("*", "")
    m = re.fullmatch(r"([0-9.]*)pi(?:/([0-9.]+))?", s)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


@dataclass
class ReportRecord:
    id: str
    C: float
    T: float
    Z: float
    nontrivial: bool
    state_overlap: float
    effect_overlap: float
    brute_force: Optional[float] = None
    discrepancy: Optional[float] = None


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_text(records, args) -> str:
    rows = [asdict(r) for r in records]
    if args.json:
        payload = rows[0] if len(rows) == 1 else rows
        return json.dumps(payload, indent=2) + "\n"
    keys = list(rows[0])
    if args.csv:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for row in rows:
            w.writerow([_cell(row[k]) for k in keys])
        return buf.getvalue()
    lines = []
    for row in rows:
        lines.extend(f"{k}: {_cell(row[k])}" for k in keys if row[k] is not None)
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def cmd_bound(args) -> int:
    scenario, ident = load_scenario(args.scenario)
    rep = bounds.bound_C(scenario)
    rec = ReportRecord(ident or args.scenario, rep.C, rep.T, rep.Z, rep.nontrivial,
                       rep.state_overlap, rep.effect_overlap)
    status = EXIT_OK
    if args.verify:
        rec.brute_force = bounds.brute_force_C(scenario).value
        rec.discrepancy = abs(rec.C - rec.brute_force)
        if rec.discrepancy > BOUND_VERIFY_TOL:
            status = EXIT_VERIFY
    _emit(args, _records_text([rec], args))
    return status


def cmd_sweep(args) -> int:
    lo, hi = args.theta_min, args.theta_max
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not (0.0 <= lo <= hi <= math.pi + 1e-12):
        raise UsageError(f"invalid theta range [{lo}, {hi}]; need 0 <= min <= max <= pi")
    if not (0.0 <= args.r <= 1.0):
        raise UsageError("--r must lie in [0, 1]")
    thetas = np.linspace(lo, min(hi, math.pi), args.steps)
    rows = bounds.example_sweep(thetas, args.r)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "C", "T", "nontrivial"])
    for row in rows:
        w.writerow([fmt(row.theta), fmt(row.C), fmt(row.T), _cell(row.nontrivial)])
    _emit(args, buf.getvalue())
    return EXIT_OK


def _suite_rng(seed: int, suite: str, index: int):
    return task_rng(derive_seed(seed, SUITES.index(suite)), index)


def run_instance(suite: str, seed: int, index: int, opts: OptimizerOptions = OptimizerOptions()) -> float:
    """Discrepancy of one randomized instance; replayable from ``(suite, seed, index)``."""
    rng = _suite_rng(seed, suite, index)
    if suite == "bound":
        s = bounds.sample_scenario(rng)
        return abs(bounds.bound_C(s).C - bounds.brute_force_C(s, opts).value)
    if suite == "fef":
        r = rng.uniform()
        states = [sample_state(rng) for _ in range(4)]
        analytic = fef.fef_two_product_mixture(r, *states).value
        rho = fef.two_product_mixture(r, *states)
        return max(abs(analytic - fef.fef_numeric(rho, opts).value), abs(analytic - fef.fef_general(rho).value))
    if suite == "soundness":
        s = bounds.sample_scenario(rng)
        channel = sample_ru_channel(rng, 3)
        return max(0.0, bounds.lhs_value(s, channel) - bounds.bound_C(s).C)
    raise ValueError(suite)


def cmd_verify(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    suites = SUITES if args.suite == "all" else (args.suite,)
    summary = {"seed": args.seed, "count": args.count, "start": args.start, "tol": args.tol, "suites": {}}
    failures = []
    for suite in suites:
        worst, worst_idx = 0.0, None
        for i in range(args.start, args.start + args.count):
            d = run_instance(suite, args.seed, i)
            if d > worst or worst_idx is None:
                worst, worst_idx = d, i
            if d > args.tol:
                failures.append((suite, i, d))
        summary["suites"][suite] = {"max_discrepancy": worst, "worst_index": worst_idx}
    summary["passed"] = not failures
    summary["failures"] = [{"suite": s, "index": i, "discrepancy": d} for s, i, d in failures]
    if args.json:
        text = json.dumps(summary, indent=2) + "\n"
    else:
        lines = [f"{name}: max discrepancy {fmt(v['max_discrepancy'])} (instance {v['worst_index']})"
                 for name, v in summary["suites"].items()]
        for s, i, d in failures:
            lines.append(f"FAIL {s} instance {i}: discrepancy {fmt(d)}; replay with "
                         f"`rucbound verify --suite {s} --seed {args.seed} --start {i} --count 1`")
        lines.append("PASS" if not failures else "FAIL")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if not failures else EXIT_VERIFY


_FACTORS = {
    "0": KET0, "1": KET1, "+": KET_PLUS, "-": KET_MINUS,
    "r": np.array([1, 1j]) / np.sqrt(2), "l": np.array([1, -1j]) / np.sqrt(2),
}


def _factor(ch: str) -> QubitState:
    if ch == "m":
        return QubitState(I2 / 2)
    if ch in _FACTORS:
        return QubitState.pure(_FACTORS[ch])
    raise UsageError(f"unknown product factor {ch!r}; use one of 0 1 + - r l m")


def _builtin(name: str):
    """Return ``(rho, product factors or None)``."""
    if name == "bell":
        return fef.P_PLUS, None
    if name == "mixed":
        return np.eye(4, dtype=complex) / 4, None
    if name.startswith("product:") and len(name) == len("product:") + 2:
        a, b = _factor(name[-2]), _factor(name[-1])
        return fef.product_state(a, b), (a, b)
    raise UsageError(f"unknown builtin state {name!r}; use bell, mixed or product:XY")


def cmd_fef(args) -> int:
    if (args.state is None) == (args.builtin is None):
        raise UsageError("give exactly one of a state file or --builtin")
    if args.builtin is not None:
        rho, factors = _builtin(args.builtin)
    else:
        rho, factors = load_state(args.state), None
    rho = fef.validate_two_qubit_state(rho)

    methods = fef.METHODS if args.method == "all" else (args.method,)
    results = {}
    for method in methods:
        if method in ("product", "two-product-mixture") and factors is None:
            if args.method == "all":
                continue
            raise UsageError(f"method {method!r} needs a product builtin state")
        if method == "general":
            results[method] = fef.fef_general(rho).value
        elif method == "numeric":
            results[method] = fef.fef_numeric(rho).value
        elif method == "product":
            results[method] = fef.fef_product(*factors).value
        else:
            results[method] = fef.fef_two_product_mixture(1.0, *factors, *factors).value
    out = {"values": results}
    if args.method == "all":
        vals = list(results.values())
        out["spread"] = max(vals) - min(vals)
        out["flagged"] = out["spread"] > 1e-5
    if args.json:
        text = json.dumps(out, indent=2) + "\n"
    else:
        lines = [f"{k}: {fmt(v)}" for k, v in results.items()]
        if "spread" in out:
            lines.append(f"spread: {fmt(out['spread'])}")
            if out["flagged"]:
                lines.append("warning: routes disagree by more than 1e-5")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true", help="emit JSON")
    fmt_group.add_argument("--csv", action="store_true", help="emit CSV")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--tol", type=float, default=1e-4, help="verification tolerance (default 1e-4)")

    p = argparse.ArgumentParser(prog="rucbound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[common], help="evaluate C, T and Z for a scenario file")
    b.add_argument("scenario")
    b.add_argument("--verify", action="store_true", help="also run the brute-force optimizer")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("sweep", parents=[common], help="theta sweep of the built-in two-basis example")
    s.add_argument("--theta-min", type=parse_angle, default=0.0)
    s.add_argument("--theta-max", type=parse_angle, default=math.pi)
    s.add_argument("--steps", type=int, default=9)
    s.add_argument("--r", type=float, default=0.5)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", parents=[common], help="randomized oracle suites")
    v.add_argument("--count", type=int, default=200)
    v.add_argument("--start", type=int, default=0, help="first instance index (for replay)")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fef", parents=[common], help="fully entangled fraction of a two-qubit state")
    f.add_argument("state", nargs="?")
    f.add_argument("--builtin", help="bell, mixed, or product:XY with X, Y in 0 1 + - r l m")
    f.add_argument("--method", choices=("all",) + fef.METHODS, default="all")
    f.set_defaults(func=cmd_fef)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, RucboundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
