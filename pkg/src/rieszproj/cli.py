"""
Command-line entry point.

Subcommands: ``bounds``, ``witness``, ``group``, ``repro``. Per-p sweeps
are written as CSV (``p,norm,method,err``) to stdout or ``--csv``; every
command can write a JSON run report with ``--out``.

Exit codes: 0 success, 1 usage error, 2 computation failed to certify.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import classical_bounds as cb
from . import finite_groups as fg
from . import reproduce
from . import witnesses as wt
from .optimizer import OptimizerConfig, default_threads, group_crossing_exponent, maximize_projection_norm

EXIT_OK, EXIT_USAGE, EXIT_UNCERTIFIED = 0, 1, 2

CSV_HEADER = ["p", "norm", "method", "err"]

DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "threads": None,
    "tol": 1e-6,
    "opt_tol": 1e-4,
    "restarts": None,
}

_CONFIG_TYPES = {"seed": int, "threads": int, "tol": float, "opt_tol": float, "restarts": int}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a positive finite number: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def read_config(path: str | Path) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_TYPES[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def effective_config(args: argparse.Namespace) -> dict[str, Any]:
    """Flags over config file over built-in defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["threads"] is None:
        cfg["threads"] = default_threads()
    return cfg


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, help="master seed for randomized searches")
    parser.add_argument("--threads", type=_positive_int,
                        help="worker threads (default: $RIESZPROJ_THREADS or CPU count)")
    parser.add_argument("--tol", type=_positive_float, help="bisection tolerance in p")
    parser.add_argument("--config", help="key = value file; flags take precedence")
    parser.add_argument("--out", help="write the JSON run report here")


def _p_values(args) -> list[float]:
    values = list(args.p or [])
    if getattr(args, "p_range", None):
        lo, hi, num = args.p_range
        values.extend(np.linspace(lo, hi, int(num)).tolist())
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rieszproj", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="closed-form bounds at one exponent")
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--n", type=_positive_int, default=1)
    _common(b)

    w = sub.add_parser("witness", help="norms of explicit witness functions")
    w.add_argument("family", choices=["t1", "bidisk", "hilbert"])
    w.add_argument("--p", type=float, nargs="+", help="one or more exponents")
    w.add_argument("--p-range", type=float, nargs=3, metavar=("LO", "HI", "NUM"))
    w.add_argument("--eps", type=float, help="t1: epsilon in (0, 1/2); omit to scan")
    w.add_argument("--g-binomial", type=int, default=10, help="bidisk: g = (z1+z2)^K / S")
    w.add_argument("--g-scale", type=float, default=1025.0)
    w.add_argument("--cross", action="store_true", help="bidisk: bisect for the crossing exponent")
    w.add_argument("--csv", help="CSV destination (default stdout)")
    _common(w)

    g = sub.add_parser("group", help="projections on finite cyclic groups")
    g.add_argument("target", choices=["z3", "z3sq", "custom"])
    g.add_argument("--m", type=int, help="custom: cyclic order")
    g.add_argument("--n", type=int, default=1, help="custom: number of factors")
    g.add_argument("--freq", action="append", default=[],
                   help="custom: frequency as comma-separated entries, repeatable")
    g.add_argument("--p", type=float, nargs="+")
    g.add_argument("--p-range", type=float, nargs=3, metavar=("LO", "HI", "NUM"))
    g.add_argument("--restarts", type=_positive_int)
    g.add_argument("--opt-tol", type=_positive_float, help="bisection tolerance for optimizer crossings")
    g.add_argument("--solve", action="store_true", help="z3: root of 2^p + 2 = 3 (3/2)^p")
    g.add_argument("--cross", nargs=2, type=float, metavar=("LO", "HI"),
                   help="bisect optimizer-backed norms for the crossing exponent")
    g.add_argument("--interp-lower", action="store_true",
                   help="interpolation lower bound from the Z_3 exponent")
    g.add_argument("--equivalence", action="store_true", help="z3: medians cross-check at each --p")
    g.add_argument("--csv", help="CSV destination (default stdout)")
    _common(g)

    r = sub.add_parser("repro", help="reproduce all published numbers")
    r.add_argument("--only", action="append", choices=list(reproduce.CHECKS))
    r.add_argument("--opt-tol", type=_positive_float)
    _common(r)
    return parser


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(rows: list[tuple], dest: str | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p, norm, method, err in rows:
        writer.writerow([_fmt(p), _fmt(norm), method, err if isinstance(err, str) else _fmt(err)])
    text = buf.getvalue()
    if dest and dest != "-":
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _norm_row(p: float, res) -> tuple:
    return (p, res.value, res.method.value, res.error_estimate)


def _summary(outputs: dict[str, Any], stream) -> None:
    for key, value in outputs.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        print(f"{key} = {value}", file=stream)


def cmd_bounds(args, cfg) -> tuple[dict, int]:
    p, n = args.p, args.n
    if not p > 1:
        raise UsageError(f"p must exceed 1, got {p}")
    out: dict[str, Any] = {
        "hv_upper": cb.hv_upper(p, n),
        "pichorides": cb.pichorides(p),
        "complexification_factor": cb.complexification_factor(p),
        "chain_lower": cb.torus_lower_chain(n).value,
        "chain_lower_closed_form": 2 + 2 / (2**n - 1),
    }
    if p >= 2:
        h_lower = wt.hilbert_witness_lower(p)
        h_upper = cb.conjugate_upper(p)
        out["zygmund_upper"] = cb.zygmund_upper(p)
        out["hilbert_witness_lower"] = h_lower
        out["conjugate_upper"] = h_upper
        out["sandwich_lower"] = cb.riesz_hilbert_sandwich(h_lower)[0]
        out["sandwich_upper"] = cb.riesz_hilbert_sandwich(h_upper)[1]
    _summary(out, sys.stdout)
    return out, EXIT_OK


def cmd_witness(args, cfg) -> tuple[dict, int]:
    ps = _p_values(args)
    out: dict[str, Any] = {"family": args.family}
    rows = []
    status = EXIT_OK
    if args.family == "t1":
        if args.eps is not None:
            try:
                wt.Theorem1Witness(args.eps)
            except ValueError as exc:
                raise UsageError(f"invalid t1 witness: {exc}") from None
        for p in ps:
            if args.eps is None:
                report = wt.t1_scan(p)
                res, eps = report.norm_value, report.params["eps"]
            else:
                res, eps = wt.t1_projection_norm(args.eps, p), args.eps
            rows.append(_norm_row(p, res))
            out[f"p={p:g}"] = {"eps": eps, "norm": res.value, "norm_pow_p": res.value**p,
                               "exceeds_one": res.value > 1 + wt.EXCEED_TOL}
    elif args.family == "bidisk":
        if args.g_binomial < 1 or not args.g_scale > 0:
            raise UsageError("invalid bidisk witness: need --g-binomial >= 1 and --g-scale > 0")
        try:
            w = wt.BidiskWitness.binomial(args.g_binomial, args.g_scale)
        except ValueError as exc:
            raise UsageError(f"invalid bidisk witness: {exc}") from None
        out["g"] = w.label
        out["a"] = w.a
        out["norm4_pow4"] = wt.bidisk_norm4(w)
        for p in ps:
            rows.append(_norm_row(p, wt.bidisk_norm(w, p)))
        if args.cross:
            try:
                bound = wt.bidisk_crossing_exponent(w, tol=cfg["tol"])
                out["crossing_exponent"] = bound.value
            except wt.NoCrossingError as exc:
                out["crossing_error"] = str(exc)
                status = EXIT_UNCERTIFIED
    else:
        target = 2 * cb.INV_PI_E
        for p in ps:
            if p < 2:
                raise UsageError("hilbert witness needs p >= 2")
            res = wt.log_chord_norm(p)
            rows.append(_norm_row(p, res))
            lower = 2 / np.pi * res.value
            out[f"p={p:g}"] = {"h_lower": lower, "ratio_to_asymptote": lower / p / target}
    if rows:
        _write_csv(rows, args.csv)
    out["rows"] = [list(r) for r in rows]
    _summary({k: v for k, v in out.items() if k != "rows"},
             sys.stderr if not args.csv or args.csv == "-" else sys.stdout)
    return out, status


def _group_target(args) -> tuple[fg.GroupSpec, fg.FreqSet]:
    if args.target == "z3":
        spec = fg.GroupSpec(3, 1)
        return spec, fg.FreqSet(spec, frozenset({0, 1}))
    if args.target == "z3sq":
        spec = fg.GroupSpec(3, 2)
        return spec, fg.FreqSet.product(spec, [0, 1])
    if args.m is None or not args.freq:
        raise UsageError("custom group needs --m and at least one --freq")
    try:
        spec = fg.GroupSpec(args.m, args.n)
        E = fg.FreqSet(spec, frozenset(tuple(int(x) for x in f.split(",")) for f in args.freq))
        fg.character_matrix(spec)
    except ValueError as exc:
        raise UsageError(f"invalid group spec: {exc}") from None
    return spec, E


def cmd_group(args, cfg) -> tuple[dict, int]:
    spec, E = _group_target(args)
    restarts = cfg["restarts"] or (512 if spec.order > 3 else 128)
    opt = OptimizerConfig(restarts=restarts, seed=cfg["seed"], threads=cfg["threads"])
    out: dict[str, Any] = {"group": {"m": spec.m, "n": spec.n}, "E": sorted(E.indices), "restarts": restarts}
    status = EXIT_OK
    if args.solve:
        if args.target != "z3":
            raise UsageError("--solve applies to z3 only")
        out["z3_critical_exponent"] = fg.z3_critical_exponent(1e-12)
    if args.interp_lower:
        c = fg.z3_critical_exponent(1e-12)
        out["interp_lower"] = cb.thorin_interp_exponent(c, c) if spec.n > 1 else c
    rows = []
    for p in _p_values(args):
        if p < 2:
            raise UsageError("group norms need p >= 2")
        res = maximize_projection_norm(spec, E, p, opt)
        rows.append((p, res.best_value, "optimizer", "lower-bound"))
        out[f"p={p:g}"] = {"best_value": res.best_value, "exceeds_one": res.best_value > 1 + 1e-9,
                           "converged": res.converged, "iterations": res.iterations}
        if not res.converged:
            status = EXIT_UNCERTIFIED
        if args.equivalence:
            if args.target != "z3":
                raise UsageError("--equivalence applies to z3 only")
            out[f"equivalence p={p:g}"] = fg.median_equivalence_check(
                p, restarts, cfg["seed"], cfg["threads"]).to_dict()
    if args.cross:
        try:
            bound = group_crossing_exponent(spec, E, tuple(args.cross), opt, tol=cfg["opt_tol"])
            out["crossing_exponent"] = bound.value
            out["crossing_certificate"] = bound.certificate
        except ValueError as exc:
            out["crossing_error"] = str(exc)
            status = EXIT_UNCERTIFIED
    if rows:
        _write_csv(rows, args.csv)
    out["rows"] = [list(r) for r in rows]
    _summary({k: v for k, v in out.items() if k not in ("rows", "crossing_certificate")},
             sys.stderr if rows and (not args.csv or args.csv == "-") else sys.stdout)
    return out, status


def cmd_repro(args, cfg) -> tuple[dict, int]:
    settings = reproduce.Settings(seed=cfg["seed"], threads=cfg["threads"],
                                  tol=cfg["tol"], opt_tol=cfg["opt_tol"])
    checks = reproduce.run_checks(args.only, settings)
    out = {c.id: c.to_dict() for c in checks}
    failed = [c.id for c in checks if not c.passed]
    out_summary = {"total": len(checks), "passed": len(checks) - len(failed), "failed": failed}
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.id}: reproduced {c.reproduced:.8g}, "
              f"published {c.published_value:.8g}, tol {c.tolerance:.3g}", file=sys.stderr)
    return {"checks": out, "summary": out_summary}, (EXIT_OK if not failed else EXIT_UNCERTIFIED)


COMMANDS = {"bounds": cmd_bounds, "witness": cmd_witness, "group": cmd_group, "repro": cmd_repro}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        obj = float(obj)
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def make_report(argv: list[str], cfg: dict, outputs: dict, wall_time: float, status: int) -> dict:
    return _jsonable({
        "tool": "rieszproj",
        "version": __version__,
        "command": list(argv),
        "config": cfg,
        "seed": cfg["seed"],
        "outputs": outputs,
        "exit_code": status,
        "wall_time": wall_time,
    })


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        cfg = effective_config(args)
        outputs, status = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"rieszproj: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, AssertionError) as exc:
        print(f"rieszproj: computation failed: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    report = make_report(argv, cfg, outputs, time.perf_counter() - start, status)
    text = dump_report(report)
    if args.out:
        Path(args.out).write_text(text)
    if args.command == "repro":
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
