"""Command-line interface: ``hfk-torsion {knot,dist,check,table}``.

Exit codes: 0 success or consistent, 1 usage or parse error, 2 obstruction
or audit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from .bounds import (
    CobordismData,
    Verdict,
    bound_report,
    cobordism_consistency,
    refined_distance_lower,
    ribbon_cobordism_check,
    ribbon_concordance_check,
    ribbon_distance_lower,
    surface_norm,
)
from .errors import HFKError, ParseError
from .homology import decompose_graded, ord_v, torsion_distance
from .knots import parse, realize_graded, torus

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
FORMATS = ("text", "md", "csv", "json-lines")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _num(x: int | float | None) -> int | str | None:
    return "inf" if x == math.inf else x


# --------------------------------------------------------------------------
# tables


def render_table(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    """Render rows as aligned text, markdown, CSV, or one JSON object per line."""
    cells = [[_cell(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    if fmt == "json-lines":
        return "".join(json.dumps(dict(zip(header, (_json(v) for v in row)))) + "\n" for row in rows)
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in cells]
        return "\n".join(lines) + "\n"
    widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(header)]
    fmt_row = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([fmt_row(header)] + [fmt_row(r) for r in cells]) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(_num(v))


def _json(v):
    return _num(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v


@dataclass(frozen=True)
class TableRow:
    name: str
    ord_v: int
    bridge: int | None

    @property
    def verdict(self) -> str:
        if self.bridge is None:
            return "n/a"
        return "pass" if self.ord_v <= self.bridge - 1 else "fail"


def read_table_csv(text: str) -> tuple[list[TableRow], list[str]]:
    """Parse ``name,ord_v,bridge`` rows; malformed rows become error messages."""
    rows: list[TableRow] = []
    errors: list[str] = []
    if not text.strip():
        return rows, errors
    reader = csv.reader(io.StringIO(text))
    header = [h.strip() for h in next(reader)]
    if header[:2] != ["name", "ord_v"] or header[2:] not in ([], ["bridge"]):
        return rows, [f"line 1: expected header name,ord_v,bridge, got {','.join(header)}"]
    for rec in reader:
        line = reader.line_num
        if not any(c.strip() for c in rec):
            continue
        if len(rec) not in (2, 3):
            errors.append(f"line {line}: expected 3 fields, got {len(rec)}")
            continue
        name = rec[0].strip()
        try:
            o = int(rec[1])
            b = int(rec[2]) if len(rec) == 3 and rec[2].strip() else None
        except ValueError:
            errors.append(f"line {line}: non-integer field in {','.join(rec)}")
            continue
        if not name or o < 0 or (b is not None and b < 1):
            errors.append(f"line {line}: invalid row {','.join(rec)}")
            continue
        rows.append(TableRow(name, o, b))
    return rows, errors


def torus_rows(max_q: int) -> list[tuple[int, int, int, int, bool]]:
    """``(p, q, ord_v, br, sharp)`` for coprime ``2 <= p < q <= max_q``."""
    out = []
    for q in range(3, max_q + 1):
        for p in range(2, q):
            if math.gcd(p, q) != 1:
                continue
            k = ord_v(decompose_graded(realize_graded(torus(p, q))))
            out.append((p, q, k, p, k == p - 1))
    return sorted(out)


# --------------------------------------------------------------------------
# commands


def cmd_knot(args, out: TextIO) -> int:
    e = parse(args.expr)
    r = bound_report(e, bigraded=args.bigraded, base_dir=args.base_dir)
    d_t = r.d_t_unknot
    if args.graded_distance:
        d_t = torsion_distance(r.decomp, decompose_graded(realize_graded(parse("U"))), graded=True)
    if args.format == "json-lines":
        doc = {
            "expr": r.expr,
            "free_rank": r.decomp.free_rank,
            "torsion": [list(t) for t in r.decomp.torsion],
            "ord_v": r.ord_v,
            "d_t_unknot": _num(d_t),
            "graded_distance": args.graded_distance,
            "bounds": [
                {"quantity": b.quantity, "value": _num(b.value), "known": b.known, "sharp": b.sharp,
                 "condition": b.condition or None, "rule": b.rule}
                for b in r.bounds
            ],
            "known": r.known,
        }
        if args.bigraded:
            doc.update(c_ord_v=r.c_ord_v, c_ord_uv=r.c_ord_uv,
                       chain={"lo": r.chain.lo, "hi": r.chain.hi, "exact": r.chain.exact})
        out.write(json.dumps(doc) + "\n")
        return EXIT_OK
    if args.format in ("md", "csv"):
        rows = [(b.quantity, b.value, b.known, b.sharp, b.condition, b.rule) for b in r.bounds]
        out.write(render_table(("quantity", "lower_bound", "known", "sharp", "condition", "rule"), rows, args.format))
        return EXIT_OK
    label = "d_t(K, U), graded" if args.graded_distance else "d_t(K, U)"
    out.write(f"knot: {r.expr}\n")
    out.write(f"HFK^-: {r.decomp}\n")
    out.write(f"ord_v: {r.ord_v}\n")
    out.write(f"{label}: {_num(d_t)}\n")
    if args.bigraded:
        out.write(f"c_ord_v: {r.c_ord_v}\n")
        out.write(f"c_ord_uv: {r.c_ord_uv}\n")
        out.write(f"chain interval: {r.chain}\n")
    out.write("bounds:\n")
    width = max(len(str(b)) for b in r.bounds)
    for b in r.bounds:
        out.write(f"  {str(b).ljust(width)}  {b.rule}\n")
    if r.known:
        out.write("known: " + " ".join(f"{k}={v}" for k, v in r.known.items()) + "\n")
    if r.genus_chain:
        out.write(f"genus chain: {r.genus_chain}\n")
    return EXIT_OK


def cmd_dist(args, out: TextIO) -> int:
    e1, e2 = parse(args.expr1), parse(args.expr2)
    refined = refined_distance_lower(e1, e2, base_dir=args.base_dir)
    d_t = ribbon_distance_lower(e1, e2, graded=args.graded, base_dir=args.base_dir)
    if args.format == "json-lines":
        out.write(json.dumps({"expr1": str(e1), "expr2": str(e2), "refined_distance_lower": refined,
                              "ribbon_distance_lower": _num(d_t), "graded": args.graded}) + "\n")
        return EXIT_OK
    out.write(f"{e1}  vs  {e2}\n")
    out.write(f"refined cobordism distance >= {refined}\n")
    out.write(f"ribbon distance >= {_num(d_t)}{'  (graded)' if args.graded else ''}\n")
    return EXIT_OK


_CHECK_FLAGS = {
    "cobordism": ("ord0", "ord1", "M", "g"),
    "ribbon-concordance": ("ord0", "ord1", "b"),
    "ribbon-cobordism": ("ord0", "ord1", "g"),
    "movie": ("m", "M", "g"),
}
_FLAG_SPELLING = {"ord0": "--ord0", "ord1": "--ord1", "M": "-M", "m": "-m", "b": "-b", "g": "-g"}


def cmd_check(args, out: TextIO) -> int:
    missing = [_FLAG_SPELLING[f] for f in _CHECK_FLAGS[args.kind] if getattr(args, f) is None]
    if missing:
        raise UsageError(f"{args.usage}check {args.kind}: missing {', '.join(missing)}")
    negative = [_FLAG_SPELLING[f] for f in _FLAG_SPELLING if (getattr(args, f) or 0) < 0]
    if negative:
        raise UsageError(f"{args.usage}check {args.kind}: {', '.join(negative)} must be non-negative")
    if args.kind == "movie":
        n = surface_norm(CobordismData(args.m, args.M, args.g, args.b))
        out.write(f"|S| = max({args.m}, {args.M}) + 2*{args.g} = {n.norm}\n")
        if n.saddle_form is not None:
            out.write(f"|S| = max(b - m, b - M) = {n.saddle_form} <= b = {n.b}\n")
        return EXIT_OK
    if args.kind == "cobordism":
        v: Verdict = cobordism_consistency(args.ord0, args.ord1, args.M, args.g)
    elif args.kind == "ribbon-concordance":
        v = ribbon_concordance_check(args.ord0, args.ord1, args.b)
    else:
        v = ribbon_cobordism_check(args.ord0, args.ord1, args.g)
    out.write(f"{v}\nrule: {v.rule}\n")
    return EXIT_OK if v.consistent else EXIT_FAIL


def cmd_table(args, out: TextIO) -> int:
    if args.family == "torus":
        if args.max is None or args.max < 3:
            raise UsageError(f"{args.usage}table torus: --max must be at least 3")
        rows = torus_rows(args.max)
        out.write(render_table(("p", "q", "ord_v", "br", "sharp"), rows, args.format))
        return EXIT_OK if all(r[4] for r in rows) else EXIT_FAIL
    if args.path is None:
        raise UsageError(f"{args.usage}table ingest: missing PATH")
    text = Path(args.path).read_text(encoding="utf-8")
    rows, errors = read_table_csv(text)
    table = [(r.name, r.ord_v, r.bridge, r.verdict) for r in rows]
    out.write(render_table(("name", "ord_v", "bridge", "verdict"), table, args.format))
    failed = sum(r.verdict == "fail" for r in rows)
    passed = sum(r.verdict == "pass" for r in rows)
    if args.format != "json-lines":
        if errors:
            out.write("errors:\n" + "".join(f"  {e}\n" for e in errors))
        out.write(f"summary: {len(rows)} rows, {passed} pass, {failed} fail, {len(errors)} errors\n")
    return EXIT_FAIL if failed or errors else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hfk-torsion", description="Knot Floer torsion orders and the bounds they imply.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("knot", help="decomposition, torsion orders and bounds for one expression")
    k.add_argument("expr")
    k.add_argument("--bigraded", action="store_true", help="also compute two-variable orders")
    k.add_argument("--graded-distance", action="store_true", help="use graded isomorphism for d_t")
    k.add_argument("--format", choices=FORMATS, default="text")
    k.add_argument("--base-dir", default=None, help="directory for relative file: leaves")
    k.set_defaults(func=cmd_knot)

    d = sub.add_parser("dist", help="distance lower bounds between two expressions")
    d.add_argument("expr1")
    d.add_argument("expr2")
    d.add_argument("--graded", action="store_true", help="use graded isomorphism for d_t")
    d.add_argument("--format", choices=("text", "json-lines"), default="text")
    d.add_argument("--base-dir", default=None)
    d.set_defaults(func=cmd_dist)

    c = sub.add_parser("check", help="consistency rules for cobordism data")
    c.add_argument("kind", choices=tuple(_CHECK_FLAGS))
    c.add_argument("--ord0", type=int)
    c.add_argument("--ord1", type=int)
    c.add_argument("-M", dest="M", type=int, metavar="MAXIMA", help="local maxima (deaths)")
    c.add_argument("-m", dest="m", type=int, metavar="MINIMA", help="local minima (births)")
    c.add_argument("-b", dest="b", type=int, metavar="SADDLES", help="saddles")
    c.add_argument("-g", dest="g", type=int, metavar="GENUS", help="genus")
    c.set_defaults(func=cmd_check, usage=c.format_usage())

    t = sub.add_parser("table", help="torus-knot table or audit of ingested data")
    t.add_argument("family", choices=("torus", "ingest"))
    t.add_argument("path", nargs="?", help="CSV file for ingest (name,ord_v,bridge)")
    t.add_argument("--max", type=int, default=None, help="largest q for the torus family")
    t.add_argument("--format", choices=FORMATS, default="text")
    t.set_defaults(func=cmd_table, usage=t.format_usage())
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(exc.pretty() + "\n")
        return EXIT_USAGE
    except (HFKError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
