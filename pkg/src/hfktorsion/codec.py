"""JSON document format for complexes.

Graded document::

    {"kind": "graded",
     "generators": [{"name": "y0", "alexander": 1, "maslov": 0}, ...],
     "arrows": [{"from": "y1", "to": "y2", "v": 1}, ...]}

Bigraded document::

    {"kind": "bigraded",
     "generators": [{"name": "x0", "gr_u": 0, "gr_v": -2}, ...],
     "arrows": [{"from": "x1", "to": "x0", "u": 1, "v": 0}, ...]}

``maslov`` is optional on graded generators.  ``u`` is optional on bigraded
arrows (default 0) and forbidden on graded ones.  Unknown fields are
rejected.  :func:`encode` writes generators in canonical order (Alexander
descending, then name) and arrows sorted by source, target, exponents, so
``encode(decode(encode(c))) == encode(c)`` byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .complex import (
    BigradedArrow,
    BigradedComplex,
    BigradedGenerator,
    Complex,
    GradedArrow,
    GradedComplex,
    GradedGenerator,
    validate,
)
from .errors import CodecError, ComplexError

__all__ = ["encode", "decode", "load", "dump", "to_document", "from_document"]

_GEN_FIELDS = {
    "graded": ({"name", "alexander"}, {"maslov"}),
    "bigraded": ({"name", "gr_u", "gr_v"}, set()),
}
_ARROW_FIELDS = {
    "graded": ({"from", "to", "v"}, set()),
    "bigraded": ({"from", "to", "v"}, {"u"}),
}


def to_document(c: Complex) -> dict[str, Any]:
    if isinstance(c, GradedComplex):
        gens = []
        for g in c.generators:
            d = {"name": g.name, "alexander": g.alexander}
            if g.maslov is not None:
                d["maslov"] = g.maslov
            gens.append(d)
        arrows = [{"from": a.source, "to": a.target, "v": a.v} for a in c.arrows]
    else:
        gens = [{"name": g.name, "gr_u": g.gr_u, "gr_v": g.gr_v} for g in c.generators]
        arrows = [{"from": a.source, "to": a.target, "u": a.u, "v": a.v} for a in c.arrows]
    return {"kind": c.kind, "generators": gens, "arrows": arrows}


def encode(c: Complex) -> bytes:
    return (json.dumps(to_document(c), indent=1, ensure_ascii=False) + "\n").encode("utf-8")


def _expect_fields(obj: Any, required: set[str], optional: set[str], loc: str) -> None:
    if not isinstance(obj, dict):
        raise CodecError(f"expected an object, got {type(obj).__name__}", loc)
    missing = sorted(required - obj.keys())
    if missing:
        raise CodecError(f"missing field {missing[0]!r}", loc)
    unknown = sorted(obj.keys() - required - optional)
    if unknown:
        raise CodecError(f"unknown field {unknown[0]!r}", loc)


def _int(obj: dict, key: str, loc: str, *, nonneg: bool = False) -> int:
    x = obj[key]
    if isinstance(x, bool) or not isinstance(x, int):
        raise CodecError(f"expected an integer, got {x!r}", f"{loc}.{key}")
    if nonneg and x < 0:
        raise CodecError(f"negative exponent {x}", f"{loc}.{key}")
    return x


def from_document(doc: Any) -> Complex:
    """Build a complex from a parsed document, validating it strictly."""
    _expect_fields(doc, {"kind", "generators", "arrows"}, set(), "$")
    kind = doc["kind"]
    if kind not in _GEN_FIELDS:
        raise CodecError(f"unknown kind {kind!r} (expected 'graded' or 'bigraded')", "$.kind")
    for key in ("generators", "arrows"):
        if not isinstance(doc[key], list):
            raise CodecError("expected an array", f"$.{key}")

    gens = []
    names: set[str] = set()
    req, opt = _GEN_FIELDS[kind]
    for n, g in enumerate(doc["generators"]):
        loc = f"generators[{n}]"
        _expect_fields(g, req, opt, loc)
        name = g["name"]
        if not isinstance(name, str) or not name:
            raise CodecError("name must be a non-empty string", f"{loc}.name")
        if name in names:
            raise CodecError(f"duplicate generator {name!r}", f"{loc}.name")
        names.add(name)
        if kind == "graded":
            maslov = _int(g, "maslov", loc) if "maslov" in g else None
            gens.append(GradedGenerator(name, _int(g, "alexander", loc), maslov))
        else:
            gens.append(BigradedGenerator(name, _int(g, "gr_u", loc), _int(g, "gr_v", loc)))

    arrows = []
    req, opt = _ARROW_FIELDS[kind]
    for n, a in enumerate(doc["arrows"]):
        loc = f"arrows[{n}]"
        _expect_fields(a, req, opt, loc)
        for end in ("from", "to"):
            if a[end] not in names:
                raise CodecError(f"unknown generator {a[end]!r}", f"{loc}.{end}")
        v = _int(a, "v", loc, nonneg=True)
        if kind == "graded":
            arrows.append(GradedArrow(a["from"], a["to"], v))
        else:
            u = _int(a, "u", loc, nonneg=True) if "u" in a else 0
            arrows.append(BigradedArrow(a["from"], a["to"], u, v))

    try:
        c = GradedComplex(tuple(gens), tuple(arrows)) if kind == "graded" else \
            BigradedComplex(tuple(gens), tuple(arrows))
    except ComplexError as exc:
        raise CodecError(str(exc), "$") from exc
    violation = validate(c)
    if violation is not None:
        raise CodecError(f"invalid complex: {violation}", "$")
    return c


def decode(data: bytes | str) -> Complex:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CodecError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    return from_document(doc)


def load(path: str | Path) -> Complex:
    path = Path(path)
    try:
        return decode(path.read_bytes())
    except CodecError as exc:
        raise CodecError(str(exc), str(path)) from exc


def dump(c: Complex, path: str | Path) -> None:
    Path(path).write_bytes(encode(c))
