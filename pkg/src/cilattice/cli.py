"""Command line interface.

    cilattice report --degrees 3 --dim 4 [--audit] [--gram] [--witness]
    cilattice hodge  --degrees 2,3 --dim 4
    cilattice table  --max-degree 6 --dims 2,4
    cilattice verify [--max-codim 3] [--max-degree 5] [--dims 2,4,6,8]

Exit codes: 0 success, 1 invalid input, 2 outside the theorem's hypotheses,
3 audit failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations_with_replacement

from .decompose import (
    Branch,
    OutsideTheorem,
    decompose,
    hypersurface_closed_form,
    hypersurface_criterion,
    witness_for,
)
from .hodge import MAX_CODIMENSION, InvalidInput, MultiDegree, hodge_row
from .lattice import gram_to_jsonable
from .oracle import audit, audit_passed

EXIT_OK, EXIT_INVALID, EXIT_OUTSIDE, EXIT_AUDIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_degrees(text: str) -> MultiDegree:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"degrees must be comma-separated integers, got {text!r}")
    if not values:
        raise UsageError("no degrees given")
    try:
        md = MultiDegree.normalized(values)
    except InvalidInput as exc:
        raise UsageError(str(exc))
    if md.c == 0:
        raise UsageError("total degree 1: projective space has no primitive middle cohomology")
    if md.c > MAX_CODIMENSION:
        raise UsageError(f"at most {MAX_CODIMENSION} degrees > 1 are supported")
    return md


def parse_dim(n: int) -> int:
    if n < 2 or n % 2:
        raise UsageError(f"--dim must be an even integer >= 2, got {n}")
    return n


def parse_dims(text: str) -> list[int]:
    try:
        dims = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"--dims must be comma-separated integers, got {text!r}")
    if not dims:
        raise UsageError("no dimensions given")
    for n in dims:
        parse_dim(n)
    return dims


def flatten(obj, prefix="") -> dict[str, str]:
    """Flatten nested JSON data into dotted keys with string values; this is
    also the layout of the text format."""
    out: dict[str, str] = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(flatten(v, f"{prefix}.{k}" if prefix else k))
    elif isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            out[prefix] = " ".join(_scalar(x) for x in obj)
        else:
            for i, v in enumerate(obj):
                out.update(flatten(v, f"{prefix}.{i}"))
    else:
        out[prefix] = _scalar(obj)
    return out


def _scalar(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def render_text(obj) -> str:
    return "\n".join(f"{k}: {v}" for k, v in flatten(obj).items())


def parse_text(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            k, _, v = line.partition(": ")
            out[k] = v
    return out


def _emit(obj, fmt: str):
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(render_text(obj))


# ---------------------------------------------------------------- commands


def cmd_report(args) -> int:
    md = parse_degrees(args.degrees)
    n = parse_dim(args.dim)
    try:
        report = decompose(md, n)
    except OutsideTheorem as exc:
        print(f"outside theorem's hypotheses: {exc}", file=sys.stderr)
        return EXIT_OUTSIDE
    if args.audit:
        report = report.with_verification(audit(report))
    obj = report.to_jsonable()
    if args.gram:
        obj["gram"] = gram_to_jsonable(report.decomposition.realize())
    if args.witness:
        wit = witness_for(report)
        if wit is None:
            obj["witness"] = None
        else:
            obj["witness"] = {
                "branch": wit.branch.value,
                "vector": [str(x) for x in wit.vector],
                "ambient_block": gram_to_jsonable(wit.active),
                "complement_block": gram_to_jsonable(wit.core),
                "rest": str(wit.rest),
            }
    _emit(obj, args.format)
    if args.audit and not audit_passed(report.verification):
        return EXIT_AUDIT
    return EXIT_OK


def cmd_hodge(args) -> int:
    md = parse_degrees(args.degrees)
    n = parse_dim(args.dim)
    row = hodge_row(md, n)
    obj = {
        "input": {"degrees": [str(x) for x in md.degrees], "dim": str(n)},
        "primitive": [str(x) for x in row.primitive],
        "full": [str(x) for x in row.full],
        "b_n": str(row.betti),
    }
    _emit(obj, args.format)
    return EXIT_OK


def table_rows(max_degree: int, dims: list[int]) -> list[dict]:
    rows = []
    for d in range(2, max_degree + 1):
        for n in dims:
            rep = decompose((d,), n)
            crit = hypersurface_criterion(d, n)
            closed = hypersurface_closed_form(d, n)
            rows.append(
                {
                    "d": str(d),
                    "n": str(n),
                    "branch": rep.branch.value,
                    "parity": "even" if rep.parity.lattice_is_even else "odd",
                    "decomposition": str(rep.decomposition),
                    "root_form": crit,
                    "criterion_ok": crit == closed,
                }
            )
    return rows


def cmd_table(args) -> int:
    if args.max_degree < 2:
        raise UsageError("--max-degree must be >= 2")
    dims = parse_dims(args.dims)
    rows = table_rows(args.max_degree, dims)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'d':>3} {'n':>3}  {'branch':<13} {'parity':<6} {'A-form':<6}  decomposition")
        for r in rows:
            flag = "" if r["criterion_ok"] else "  MISMATCH"
            print(
                f"{r['d']:>3} {r['n']:>3}  {r['branch']:<13} {r['parity']:<6} "
                f"{'yes' if r['root_form'] else 'no':<6}  {r['decomposition']}{flag}"
            )
    return EXIT_OK if all(r["criterion_ok"] for r in rows) else EXIT_AUDIT


def grid_points(max_codim: int, max_degree: int, dims, hypersurfaces: int = 0, extra=()) -> list:
    points = set()
    for c in range(1, max_codim + 1):
        for degs in combinations_with_replacement(range(2, max_degree + 1), c):
            for n in dims:
                points.add((degs, n))
    for d in range(2, hypersurfaces + 1):
        for n in dims:
            points.add(((d,), n))
    points.update(extra)
    return sorted(points)


def verify_point(point) -> dict:
    degs, n = point
    entry = {"degrees": list(degs), "dim": n}
    try:
        rep = decompose(degs, n)
    except OutsideTheorem as exc:
        entry.update(passed=False, branch="outside", failures=[str(exc)])
        return entry
    checks = audit(rep)
    entry.update(
        passed=audit_passed(checks),
        branch=rep.branch.value,
        decomposition=str(rep.decomposition),
        notes=list(rep.notes),
        failures=[f"{c.check}: {c.detail}" for c in checks if not c.passed],
    )
    return entry


def _parse_point(text: str):
    degs, sep, n = text.partition("@")
    if not sep:
        raise UsageError(f"--point must look like 2,2,2,2@2, got {text!r}")
    try:
        n = int(n)
    except ValueError:
        raise UsageError(f"bad dimension in --point {text!r}")
    return parse_degrees(degs).degrees, parse_dim(n)


def cmd_verify(args) -> int:
    if not 1 <= args.max_codim <= MAX_CODIMENSION:
        raise UsageError(f"--max-codim must lie in 1..{MAX_CODIMENSION}")
    if args.max_degree < 2:
        raise UsageError("--max-degree must be >= 2")
    dims = parse_dims(args.dims)
    extra = [_parse_point(p) for p in args.point]
    points = grid_points(args.max_codim, args.max_degree, dims, args.hypersurfaces, extra)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(verify_point, points))
    else:
        results = [verify_point(p) for p in points]
    failed = [r for r in results if not r["passed"]]
    if args.format == "json":
        print(json.dumps({"points": results, "passed": len(results) - len(failed), "failed": len(failed)}, indent=2))
    else:
        for r in results:
            tag = "PASS" if r["passed"] else "FAIL"
            degs = ",".join(map(str, r["degrees"]))
            print(f"{tag} ({degs}) n={r['dim']} {r['branch']}: {r.get('decomposition', '')}")
            for note in r.get("notes", ()):
                print(f"     note: {note}")
            for f in r["failures"]:
                print(f"     {f}")
        print(f"{len(results) - len(failed)}/{len(results)} points pass")
    return EXIT_OK if not failed else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cilattice", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("report", help="full report for one complete intersection")
    p.add_argument("--degrees", required=True, help="comma-separated multidegree, e.g. 2,3")
    p.add_argument("--dim", type=int, required=True, help="even dimension n")
    p.add_argument("--gram", action="store_true", help="emit the realized Gram matrix")
    p.add_argument("--audit", action="store_true", help="run the invariant battery")
    p.add_argument("--witness", action="store_true", help="emit the explicit witness vector")
    fmt(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("hodge", help="middle Hodge row only")
    p.add_argument("--degrees", required=True)
    p.add_argument("--dim", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_hodge)

    p = sub.add_parser("table", help="hypersurface table")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--dims", default="2,4")
    fmt(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="decompose and audit a grid")
    p.add_argument("--max-codim", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--dims", default="2,4,6,8")
    p.add_argument("--hypersurfaces", type=int, default=10, help="also include hypersurfaces up to this degree")
    p.add_argument("--point", action="append", default=[], help="extra point DEGREES@DIM, repeatable")
    p.add_argument("--jobs", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cilattice: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
