"""Command line driver.

    motivic-dt dt --input problem.json [--truncation N] [--euler] [--format json]
    motivic-dt series --input problem.json [--factors]
    motivic-dt check dilog --truncation 6
    motivic-dt oracle --input problem.json --dim 2 --q 2

A problem document is JSON:

    {"vertices": ["0"],
     "arrows": [{"id": "x", "from": "0", "to": "0"}, ...],
     "potential": [{"coeff": 1, "cycle": ["x", "y", "z"]}, ...],
     "cut": ["z"],
     "stability": [[a, b], ...]      or   "theta": [t, ...],
     "provider": "none" | "feit-fine" | "user-table",
     "table": [{"d": [..], "class": "<motive>"}, ...],
     "truncation": 4,
     "d": [..], "q": 2}

Exit codes: 0 success, 1 computation error or failed check, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .dtpipe import CHECKS, DtTable, dt_invariants, make_provider, stacky_series
from .fqoracle import BudgetError, CountRequest, OracleError, count_representations
from .motive import MotiveError, parse_motive
from .quiver import Arrow, Potential, Quiver, QuiverError
from .qtorus import factorize_by_slope
from .stability import CentralCharge, StabilityError

log = logging.getLogger("motivic_dt")

PROVIDERS = ("none", "feit-fine", "user-table")


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Problem:
    quiver: Quiver
    potential: Potential | None
    cut: tuple[str, ...]
    charge: CentralCharge
    provider: str
    table: dict | None
    truncation: int
    d: tuple[int, ...] | None
    q: int | None


def _expect(value, kind, path: str):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(path, f"expected {name}, got {type(value).__name__}")
    return value


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"cannot read {value!r} as a rational") from None
    raise SchemaError(path, "expected an integer or a 'p/q' string")


def _dim(value, n: int, path: str) -> tuple[int, ...]:
    _expect(value, list, path)
    if len(value) != n:
        raise SchemaError(path, f"expected {n} entries, got {len(value)}")
    out = tuple(_expect(x, int, f"{path}[{i}]") for i, x in enumerate(value))
    if any(x < 0 for x in out):
        raise SchemaError(path, "entries must be nonnegative")
    return out


def _quiver(doc: dict) -> Quiver:
    verts = _expect(doc.get("vertices"), list, "vertices")
    for i, v in enumerate(verts):
        _expect(v, str, f"vertices[{i}]")
    if len(set(verts)) != len(verts):
        raise SchemaError("vertices", "duplicate vertex name")
    arrows = []
    for i, a in enumerate(_expect(doc.get("arrows", []), list, "arrows")):
        _expect(a, dict, f"arrows[{i}]")
        fields = {}
        for key in ("id", "from", "to"):
            fields[key] = _expect(a.get(key), str, f"arrows[{i}].{key}")
        for key in ("from", "to"):
            if fields[key] not in verts:
                raise SchemaError(f"arrows[{i}].{key}", f"unknown vertex {fields[key]!r}")
        arrows.append(Arrow(fields["id"], fields["from"], fields["to"]))
    try:
        return Quiver(tuple(verts), tuple(arrows))
    except QuiverError as exc:
        raise SchemaError("arrows", str(exc)) from None


def _potential(doc: dict, Q: Quiver) -> Potential | None:
    raw = doc.get("potential")
    if raw is None:
        return None
    terms = []
    for i, t in enumerate(_expect(raw, list, "potential")):
        _expect(t, dict, f"potential[{i}]")
        coeff = _expect(t.get("coeff", 1), int, f"potential[{i}].coeff")
        cycle = _expect(t.get("cycle"), list, f"potential[{i}].cycle")
        for j, a in enumerate(cycle):
            _expect(a, str, f"potential[{i}].cycle[{j}]")
        terms.append((coeff, tuple(cycle)))
    try:
        return Potential(Q, tuple(terms))
    except QuiverError as exc:
        raise SchemaError("potential", str(exc)) from None


def _charge(doc: dict, n: int) -> CentralCharge:
    if "stability" in doc and "theta" in doc:
        raise SchemaError("stability", "give either stability or theta, not both")
    try:
        if "stability" in doc:
            raw = _expect(doc["stability"], list, "stability")
            if len(raw) != n:
                raise SchemaError("stability", f"expected {n} charges, got {len(raw)}")
            vals = []
            for i, z in enumerate(raw):
                if not isinstance(z, list) or len(z) != 2:
                    raise SchemaError(f"stability[{i}]", "expected a pair [re, im]")
                vals.append((_rational(z[0], f"stability[{i}][0]"), _rational(z[1], f"stability[{i}][1]")))
            return CentralCharge(tuple(vals))
        if "theta" in doc:
            raw = _expect(doc["theta"], list, "theta")
            if len(raw) != n:
                raise SchemaError("theta", f"expected {n} entries, got {len(raw)}")
            return CentralCharge.king([_rational(t, f"theta[{i}]") for i, t in enumerate(raw)])
    except StabilityError as exc:
        raise SchemaError("stability", str(exc)) from None
    return CentralCharge.trivial(n)


def _table(doc: dict, n: int) -> dict | None:
    raw = doc.get("table")
    if raw is None:
        return None
    out = {}
    for i, rec in enumerate(_expect(raw, list, "table")):
        _expect(rec, dict, f"table[{i}]")
        d = _dim(rec.get("d"), n, f"table[{i}].d")
        text = _expect(rec.get("class"), str, f"table[{i}].class")
        try:
            out[d] = parse_motive(text)
        except MotiveError as exc:
            raise SchemaError(f"table[{i}].class", str(exc)) from None
    return out


def parse_problem(doc: Any) -> Problem:
    """Validate a problem document; raises SchemaError naming the bad field."""
    _expect(doc, dict, "$")
    Q = _quiver(doc)
    W = _potential(doc, Q)
    cut = _expect(doc.get("cut", []), list, "cut")
    for i, a in enumerate(cut):
        _expect(a, str, f"cut[{i}]")
        if not Q.has_arrow(a):
            raise SchemaError(f"cut[{i}]", f"unknown arrow {a!r}")
    provider = _expect(doc.get("provider", "none"), str, "provider")
    if provider not in PROVIDERS:
        raise SchemaError("provider", f"unknown provider {provider!r}; choose from {', '.join(PROVIDERS)}")
    if provider == "none" and W is not None and not W.is_zero():
        raise SchemaError("provider", "provider 'none' ignores relations; a nonzero potential needs another provider")
    table = _table(doc, Q.n)
    if provider == "user-table" and table is None:
        raise SchemaError("table", "provider 'user-table' needs a table")
    N = _expect(doc.get("truncation", 4), int, "truncation")
    if N < 0:
        raise SchemaError("truncation", "must be nonnegative")
    d = _dim(doc["d"], Q.n, "d") if "d" in doc else None
    q = _expect(doc["q"], int, "q") if "q" in doc else None
    return Problem(Q, W, tuple(cut), _charge(doc, Q.n), provider, table, N, d, q)


def _load(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError("--input", str(exc)) from None
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from None


def _emit(obj: Any, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _problem(args) -> Problem:
    prob = parse_problem(_load(args.input))
    if args.truncation is not None:
        if args.truncation < 0:
            raise SchemaError("--truncation", "must be nonnegative")
        prob.truncation = args.truncation
    return prob


def cmd_dt(prob: Problem, jobs: int = 1) -> DtTable:
    provider = make_provider(prob.provider, prob.table)
    return dt_invariants(prob.quiver, provider, prob.cut, prob.charge, prob.truncation, prob.potential, jobs)


def _dt(args) -> int:
    prob = _problem(args)
    table = cmd_dt(prob, args.jobs)
    records = table.to_records(euler=args.euler)
    doc = {
        "convention": table.convention,
        "truncation": table.N,
        "generic": table.generic,
        "generic_bound": table.generic_bound,
        "dt": records,
    }
    lines = [f"# DT invariants, |d| <= {table.N}, convention {table.convention}"]
    if not table.generic:
        lines.append(f"# stability is not generic up to degree {table.generic_bound}")
    for r in records:
        row = f"{r['d']}\t{r['dt']}"
        if args.euler:
            row += f"\t{r['euler']}"
        lines.append(row)
    _emit(doc, args.format, "\n".join(lines) + "\n")
    return 0


def cmd_series(prob: Problem):
    provider = make_provider(prob.provider, prob.table)
    return stacky_series(prob.quiver, provider, prob.cut, prob.truncation, prob.potential)


def _series(args) -> int:
    prob = _problem(args)
    A = cmd_series(prob)
    doc: dict[str, Any] = {"truncation": A.N, "series": A.to_records()}
    lines = [f"# stacky series, |d| <= {A.N}"]
    lines += [f"{r['d']}\t{r['coeff']}" for r in doc["series"]]
    if args.factors:
        doc["factors"] = []
        for key, S in factorize_by_slope(A, prob.charge):
            doc["factors"].append({"ray": [key.p, key.q], "series": S.to_records()})
            lines.append(f"# factor on ray {key}")
            lines += [f"{r['d']}\t{r['coeff']}" for r in S.to_records()]
    _emit(doc, args.format, "\n".join(lines) + "\n")
    return 0


def cmd_check(name: str, **params) -> bool:
    if name not in CHECKS:
        raise SchemaError("check", f"unknown check {name!r}; choose from {', '.join(sorted(CHECKS))}")
    return bool(CHECKS[name](**params))


def _check(args) -> int:
    names = sorted(CHECKS) if args.name == "all" else [args.name]
    params = {}
    if args.truncation is not None:
        params["N"] = args.truncation
    if args.m is not None:
        params["m"] = args.m
    results = {n: cmd_check(n, **params) for n in names}
    text = "".join(f"{n}: {'pass' if ok else 'FAIL'}\n" for n, ok in results.items())
    _emit({n: ("pass" if ok else "fail") for n, ok in results.items()}, args.format, text)
    return 0 if all(results.values()) else 1


def cmd_oracle(req: CountRequest, jobs: int = 1) -> int:
    return count_representations(req, jobs)


def _oracle(args) -> int:
    prob = _problem(args)
    d = prob.d
    if args.dim is not None:
        d = tuple(args.dim)
        if len(d) != prob.quiver.n:
            raise SchemaError("--dim", f"expected {prob.quiver.n} entries")
    q = args.q if args.q is not None else prob.q
    if d is None:
        raise SchemaError("d", "a dimension vector is required")
    if q is None:
        raise SchemaError("q", "a field size is required")
    try:
        req = CountRequest(prob.quiver, d, q, prob.potential, prob.cut)
    except BudgetError:
        raise
    except OracleError as exc:
        raise SchemaError("q" if "prime" in str(exc) else "cut", str(exc)) from None
    count = cmd_oracle(req, args.jobs)
    _emit({"d": list(d), "q": q, "count": count}, args.format, f"{list(d)}\tq={q}\t{count}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motivic-dt", description="Motivic DT invariants of quivers with potential.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, metavar="FILE")
        p.add_argument("--truncation", type=int, metavar="N")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--jobs", type=int, default=1, metavar="K")

    p = sub.add_parser("dt", help="DT invariants of a problem document")
    common(p)
    p.add_argument("--euler", action="store_true", help="append Euler specializations")
    p.set_defaults(func=_dt)

    p = sub.add_parser("series", help="stacky generating series")
    common(p)
    p.add_argument("--factors", action="store_true", help="also print the slope factorization")
    p.set_defaults(func=_series)

    p = sub.add_parser("check", help="run a built-in identity check")
    p.add_argument("name", help=f"one of: all, {', '.join(sorted(CHECKS))}")
    common(p, needs_input=False)
    p.add_argument("--m", type=int, help="number of loops, where relevant")
    p.set_defaults(func=_check)

    p = sub.add_parser("oracle", help="count F_q points by brute force")
    common(p)
    p.add_argument("--dim", type=int, nargs="+", metavar="D")
    p.add_argument("--q", type=int)
    p.set_defaults(func=_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs: must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
