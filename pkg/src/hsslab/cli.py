"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical-domain error.  JSON output is canonical and byte-identical for
identical configurations; CSV is a flat projection; pretty is for humans.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import bounds, entropy, verify
from .config import DEFAULT_SEED, RunConfig, Tolerances, parse_tol
from .domains import GRAMMAR, DomainError, ParseError, parse_domain
from .geometry import invariants
from .jordan import InferenceError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
METHOD_NAMES = {"formula": "formula", "scan": "threshold_scan", "growth": "growth_fit"}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="unsigned RNG seed (default %(default)s)")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="override a named tolerance")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p = argparse.ArgumentParser(prog="hsslab", description="Bounded symmetric domain laboratory.")
    sub = p.add_subparsers(dest="command", required=True)
    domain_help = f"domain string: {GRAMMAR}"

    s = sub.add_parser("invariants", parents=[common], help="structure constants (r, a, b, genus, n)")
    s.add_argument("domain", nargs="+", help=domain_help)

    s = sub.add_parser("bounds", parents=[common], help="first-eigenvalue bounds")
    s.add_argument("domain", nargs="+", help=domain_help)
    s.add_argument("--radius", type=float, default=None, help="geodesic ball radius (default: whole domain)")
    s.add_argument("--certify", action="store_true", help="run the Barta and Rayleigh certificates")

    s = sub.add_parser("entropy", parents=[common], help="diastatic and volume entropy")
    s.add_argument("domain", nargs="+", help=domain_help)
    s.add_argument("--method", choices=tuple(METHOD_NAMES), default="formula")

    s = sub.add_parser("verify", parents=[common], help="property batteries")
    s.add_argument("suite", choices=verify.SUITES)
    return p


def _clean(obj):
    """JSON-safe copy: infinities become strings, tuples become lists."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = v
    return out


def render(payload: dict, fmt: str) -> str:
    payload = _clean(payload)
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    result = payload.get("result", payload.get("error", {}))
    rows = result if isinstance(result, list) else [result]
    if fmt == "csv":
        flat = [_flatten(r) for r in rows]
        cols = sorted({k for r in flat for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    lines = []
    for r in rows:
        lines.extend(f"{k:32s} {v}" for k, v in _flatten(r).items())
        lines.append("")
    return "\n".join(lines)


def cmd_invariants(cfg: RunConfig):
    inv = invariants(parse_domain(cfg.domain))
    return inv.as_dict() | {"domain": cfg.domain, "source": "inferred from the spectrum of B(z, z) at a regular point"}, EXIT_OK


def cmd_bounds(cfg: RunConfig):
    d = parse_domain(cfg.domain)
    tol = cfg.tolerances
    t = math.inf if cfg.radius is None else cfg.radius
    if t <= 0:
        raise UsageError("--radius must be positive")
    report = bounds.bounds_report(d, t, with_certificates=cfg.extra.get("certify", False), seed=cfg.seed, tol=tol.consistency, h=tol.fd_step, tol_fd=tol.barta_fd)
    ok = report.consistent and bounds.certificates_pass(report)
    return report.as_dict(), EXIT_OK if ok else EXIT_FAIL


def cmd_entropy(cfg: RunConfig):
    d = parse_domain(cfg.domain)
    method = cfg.extra["method"]
    if method == "formula":
        estimates = entropy.formula_estimates(d)
    elif method == "scan":
        estimates = [entropy.diastatic_entropy_numeric(d)]
    else:
        estimates = [entropy.volume_growth_numeric(d)]
    return [e.as_dict() for e in estimates], EXIT_OK


def cmd_verify(cfg: RunConfig):
    checks = verify.run_suite(cfg.extra["suite"], cfg.seed, cfg.tolerances)
    records = [c.as_dict() for c in checks]
    return records, EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


COMMANDS = {"invariants": cmd_invariants, "bounds": cmd_bounds, "entropy": cmd_entropy, "verify": cmd_verify}


def _emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        tol = Tolerances().updated(parse_tol(args.tol))
        extra = {k: getattr(args, k) for k in ("certify", "method", "suite") if hasattr(args, k)}
        cfg = RunConfig(
            command=args.command,
            domain=" ".join(args.domain) if hasattr(args, "domain") else None,
            radius=getattr(args, "radius", None),
            seed=args.seed,
            tolerances=tol,
            output=args.out,
            format=args.format,
            extra=extra,
        )
    except (KeyError, ValueError) as exc:
        print(f"hsslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    payload = {"schema_version": SCHEMA_VERSION, "config": cfg.as_dict()}
    try:
        result, code = COMMANDS[cfg.command](cfg)
        payload["result"] = result
        payload["status"] = "ok" if code == EXIT_OK else "failed"
    except (ParseError, UsageError) as exc:
        print(f"hsslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, entropy.FormulaOnly, InferenceError, FloatingPointError, ValueError) as exc:
        code = EXIT_NUMERIC
        payload["status"] = "error"
        payload["error"] = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    _emit(render(payload, cfg.format), cfg.output)
    return code
