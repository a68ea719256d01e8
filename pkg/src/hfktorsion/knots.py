"""Knot expressions and their complexes.

Expressions are built from the unknot ``U``, positive torus knots ``T(p,q)``,
L-space knots given by their Alexander polynomial ``L[c_e;...]``, and complex
documents ``file:PATH``, combined with mirror ``m(E)`` and connected sum
``E # E``.  L-space leaves (including torus knots) are realized as staircase
complexes; mirror and sum act at the complex level by dual and tensor.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from . import codec
from .complex import (
    BigradedArrow,
    BigradedComplex,
    BigradedGenerator,
    GradedArrow,
    GradedComplex,
    GradedGenerator,
    dual,
    ensure_valid,
    set_u_zero,
    tensor,
)
from .errors import AlexanderError, ComplexError, ParseError

__all__ = [
    "AlexPoly",
    "StaircaseSpec",
    "torus_alexander",
    "staircase_from_alexander",
    "staircase_graded",
    "staircase_bigraded",
    "Unknot",
    "Torus",
    "LSpace",
    "File",
    "Mirror",
    "Sum",
    "KnotExpr",
    "torus",
    "parse",
    "realize_graded",
    "realize_bigraded",
    "staircase_of",
    "torus_leaf",
]


# --------------------------------------------------------------------------
# Alexander polynomials


@dataclass(frozen=True)
class AlexPoly:
    """Integer Laurent polynomial in ``t``, stored as ``(exponent, coeff)``
    pairs with exponents strictly decreasing and coefficients nonzero."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        acc: dict[int, int] = {}
        for e, c in self.terms:
            acc[e] = acc.get(e, 0) + c
        object.__setattr__(self, "terms", tuple(sorted(((e, c) for e, c in acc.items() if c), reverse=True)))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> AlexPoly:
        return cls(tuple(coeffs.items()))

    def coefficient(self, e: int) -> int:
        return dict(self.terms).get(e, 0)

    def __call__(self, t: float) -> float:
        return sum(c * t ** e for e, c in self.terms)

    @property
    def top_degree(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def is_symmetric(self) -> bool:
        d = dict(self.terms)
        return all(d.get(-e) == c for e, c in d.items())

    def check(self) -> None:
        """Raise unless symmetric with value 1 at t = 1."""
        if not self.is_symmetric():
            raise AlexanderError(f"Alexander polynomial {self} is not symmetric")
        if sum(c for _, c in self.terms) != 1:
            raise AlexanderError(f"Alexander polynomial {self} does not evaluate to 1 at t = 1")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for n, (e, c) in enumerate(self.terms):
            mag = abs(c)
            mono = "1" if e == 0 else "t" if e == 1 else f"t^{e}"
            body = mono if mag == 1 else (f"{mag}" if e == 0 else f"{mag}{mono}")
            if n == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def to_latex(self) -> str:
        """Compact TeX rendering, e.g. ``t^{10}-t^9+1``."""
        out = []
        for n, (e, c) in enumerate(self.terms):
            mag = abs(c)
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "t"
            else:
                s = str(e)
                mono = f"t^{s}" if len(s) == 1 else f"t^{{{s}}}"
            body = (str(mag) if mag != 1 or not mono else "") + mono
            sign = "-" if c < 0 else ("+" if n else "")
            out.append(sign + body)
        return "".join(out) or "0"

    def bracket_string(self) -> str:
        """Expression-grammar form ``L[c_e;...]``."""
        return "L[" + ";".join(f"{c}_{e}" for e, c in self.terms) + "]"


def torus_alexander(p: int, q: int) -> AlexPoly:
    """Symmetrized Alexander polynomial of the torus knot ``T(p,q)``.

    Uses ``Delta(t) / (1 - t) = sum over s in <p, q> of t^s`` (before
    symmetrizing), where ``<p, q>`` is the numerical semigroup generated by
    ``p`` and ``q``.  Every integer ``>= (p-1)(q-1)`` lies in the semigroup, so
    the coefficient of ``t^k`` is ``[k in S] - [k-1 in S]`` for
    ``0 <= k <= (p-1)(q-1)``.

    >>> print(torus_alexander(2, 3))
    t - 1 + t^-1
    """
    if p < 1 or q < 1:
        raise AlexanderError(f"torus knot parameters must be positive, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise AlexanderError(f"p,q not coprime: ({p}, {q})")
    conductor = (p - 1) * (q - 1)
    in_s = [False] * (conductor + 1)
    for a in range(0, conductor + 1, p):
        for s in range(a, conductor + 1, q):
            in_s[s] = True
    d = conductor // 2
    coeffs = {}
    for k in range(conductor + 1):
        c = int(in_s[k]) - (int(in_s[k - 1]) if k else 0)
        if c:
            coeffs[k - d] = c
    return AlexPoly.from_dict(coeffs)


# --------------------------------------------------------------------------
# Staircases


@dataclass(frozen=True)
class StaircaseSpec:
    """Exponents ``alpha_0 > ... > alpha_2n`` of an L-space knot's Alexander
    polynomial; ``gaps[i-1] = alpha_{i-1} - alpha_i``."""

    alphas: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.alphas)
        object.__setattr__(self, "alphas", a)
        if len(a) % 2 != 1:
            raise AlexanderError(f"staircase needs an odd number of exponents, got {len(a)}")
        if any(x <= y for x, y in zip(a, a[1:])):
            raise AlexanderError(f"staircase exponents must strictly decrease: {a}")
        if any(x != -y for x, y in zip(a, reversed(a))):
            raise AlexanderError(f"staircase exponents are not symmetric: {a}")

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(x - y for x, y in zip(self.alphas, self.alphas[1:]))

    @property
    def n(self) -> int:
        return len(self.alphas) // 2

    @property
    def genus(self) -> int:
        return self.alphas[0]

    def alexander(self) -> AlexPoly:
        return AlexPoly(tuple((e, (-1) ** k) for k, e in enumerate(self.alphas)))


def staircase_from_alexander(poly: AlexPoly) -> StaircaseSpec:
    """Read off the staircase of an L-space knot from its Alexander polynomial.

    The polynomial must be ``sum_k (-1)^k t^alpha_k`` with symmetric exponents.
    """
    terms = poly.terms

    def bad(reason: str, term: tuple[int, int] | None = None) -> AlexanderError:
        where = f" (offending term {term[1]:+d}*t^{term[0]})" if term else ""
        return AlexanderError(f"not an L-space-knot Alexander polynomial: {reason}{where}")

    if len(terms) % 2 != 1:
        raise bad(f"even number of terms ({len(terms)})")
    for k, term in enumerate(terms):
        if abs(term[1]) != 1:
            raise bad("coefficient is not +1 or -1", term)
        if term[1] != (-1) ** k:
            raise bad("signs do not alternate starting from +1", term)
    for term, mirror in zip(terms, reversed(terms)):
        if term[0] != -mirror[0]:
            raise bad("exponents are not symmetric", term)
    return StaircaseSpec(tuple(e for e, _ in terms))


def staircase_graded(s: StaircaseSpec) -> GradedComplex:
    """The F2[v] staircase: ``d y_{2k+1} = v^{d_{2k+2}} y_{2k+2}``, ``A(y_i) = alpha_i``.

    Maslov gradings start at ``M(y_0) = -2 alpha_0`` (matching the ``gr_v``
    of the bigraded model) and step by ``+1`` into odd generators and by
    ``2 d_{2k+2} - 1`` into even ones.
    """
    d = s.gaps
    gens = []
    m = -2 * s.alphas[0]
    for i, a in enumerate(s.alphas):
        if i:
            m = m + 1 if i % 2 else m - 1 + 2 * d[i - 1]
        gens.append(GradedGenerator(f"y{i}", a, m))
    arrows = [GradedArrow(f"y{i}", f"y{i + 1}", d[i]) for i in range(1, len(s.alphas) - 1, 2)]
    return GradedComplex(tuple(gens), tuple(arrows))


def staircase_bigraded(s: StaircaseSpec) -> BigradedComplex:
    """The F2[u,v] staircase:
    ``d x_{2i-1} = u^{d_{2i-1}} x_{2i-2} + v^{d_{2i}} x_{2i}``, ``gr_u(x_0) = 0``."""
    d = s.gaps
    gu, gv = 0, -2 * s.alphas[0]
    gens = [BigradedGenerator("x0", gu, gv)]
    arrows = []
    for i in range(1, len(s.alphas)):
        if i % 2:
            gu, gv = gu - 2 * d[i - 1] + 1, gv + 1
            arrows.append(BigradedArrow(f"x{i}", f"x{i - 1}", d[i - 1], 0))
        else:
            gu, gv = gu - 1, gv - 1 + 2 * d[i - 1]
            arrows.append(BigradedArrow(f"x{i - 1}", f"x{i}", 0, d[i - 1]))
        gens.append(BigradedGenerator(f"x{i}", gu, gv))
    return BigradedComplex(tuple(gens), tuple(arrows))


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Unknot:
    def __str__(self) -> str:
        return "U"


@dataclass(frozen=True)
class Torus:
    """Positive torus knot with ``2 <= p < q`` coprime; build with :func:`torus`."""

    p: int
    q: int

    def __post_init__(self):
        if not (2 <= self.p < self.q) or math.gcd(self.p, self.q) != 1:
            raise AlexanderError(f"Torus needs coprime 2 <= p < q, got ({self.p}, {self.q})")

    def __str__(self) -> str:
        return f"T({self.p},{self.q})"


@dataclass(frozen=True)
class LSpace:
    poly: AlexPoly

    def __str__(self) -> str:
        return self.poly.bracket_string()


@dataclass(frozen=True)
class File:
    path: str

    def __str__(self) -> str:
        return f"file:{self.path}"


@dataclass(frozen=True)
class Mirror:
    inner: KnotExpr

    def __str__(self) -> str:
        return f"m({self.inner})"


@dataclass(frozen=True)
class Sum:
    left: KnotExpr
    right: KnotExpr

    def __str__(self) -> str:
        r = f"({self.right})" if isinstance(self.right, Sum) else str(self.right)
        return f"{self.left} # {r}"


KnotExpr = Union[Unknot, Torus, LSpace, File, Mirror, Sum]


def torus(p: int, q: int) -> Unknot | Torus:
    """``T(p,q)`` normalized: order-independent, ``T(1,q)`` is the unknot."""
    if p < 1 or q < 1:
        raise AlexanderError(f"torus knot parameters must be positive, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise AlexanderError(f"p,q not coprime: ({p}, {q})")
    p, q = sorted((p, q))
    return Unknot() if p == 1 else Torus(p, q)


def staircase_of(e: KnotExpr) -> StaircaseSpec | None:
    """Staircase of an L-space leaf, or None for anything else."""
    if isinstance(e, Unknot):
        return StaircaseSpec((0,))
    if isinstance(e, Torus):
        return staircase_from_alexander(torus_alexander(e.p, e.q))
    if isinstance(e, LSpace):
        return staircase_from_alexander(e.poly)
    return None


def torus_leaf(e: KnotExpr) -> Torus | None:
    return e if isinstance(e, Torus) else None


# --------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<file>file:[^\s#()]+)
      | (?P<int>[+-]?\d+)
      | (?P<name>[A-Za-z]+)
      | (?P<punct>[()\[\];,#_{}])
    )""",
    re.VERBOSE,
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        return ParseError(message, self.text, pos)

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {value or kind}, found end of input")
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise self.error(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take(kind="int")[1])

    def expr(self) -> KnotExpr:
        node = self.term()
        while (tok := self.peek()) is not None and tok[1] == "#":
            self.i += 1
            node = Sum(node, self.term())
        return node

    def term(self) -> KnotExpr:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a knot, found end of input")
        kind, value, pos = tok
        if kind == "file":
            self.i += 1
            return File(value[len("file:"):])
        if value == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        if value == "U":
            self.i += 1
            return Unknot()
        if value == "T":
            self.i += 1
            self.take("(")
            p = self.integer()
            self.take(",")
            q = self.integer()
            self.take(")")
            try:
                return torus(p, q)
            except AlexanderError as exc:
                raise ParseError(str(exc), self.text, pos) from exc
        if value == "m":
            self.i += 1
            self.take("(")
            node = self.expr()
            self.take(")")
            return Mirror(node)
        if value == "L":
            self.i += 1
            return self.lspace(pos)
        raise self.error(f"expected a knot, found {value!r}")

    def lspace(self, pos: int) -> KnotExpr:
        self.take("[")
        coeffs: dict[int, int] = {}
        while True:
            c = self.integer()
            self.take("_")
            if (tok := self.peek()) is not None and tok[1] == "{":
                self.i += 1
                e = self.integer()
                self.take("}")
            else:
                e = self.integer()
            coeffs[e] = coeffs.get(e, 0) + c
            if self.peek() is not None and self.peek()[1] == ";":
                self.i += 1
                continue
            break
        self.take("]")
        poly = AlexPoly.from_dict(coeffs)
        try:
            s = staircase_from_alexander(poly)
        except AlexanderError as exc:
            raise ParseError(str(exc), self.text, pos) from exc
        return Unknot() if s.n == 0 else LSpace(poly)


def parse(text: str) -> KnotExpr:
    """Parse a knot expression.

    >>> str(parse("T(3,2) # m(T(2,3))"))
    'T(2,3) # m(T(2,3))'
    """
    p = _Parser(text)
    node = p.expr()
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek()[1]!r}")
    return node


# --------------------------------------------------------------------------
# Realization


def _resolve(path: str, base_dir: str | Path | None) -> Path:
    p = Path(path)
    if not p.is_absolute() and base_dir is not None:
        p = Path(base_dir) / p
    return p


def realize_graded(e: KnotExpr, base_dir: str | Path | None = None) -> GradedComplex:
    """The F2[v] complex of an expression.

    File leaves may hold graded documents, or bigraded ones which are then
    reduced with ``u = 0``.
    """
    s = staircase_of(e)
    if s is not None:
        c = staircase_graded(s)
    elif isinstance(e, File):
        c = codec.load(_resolve(e.path, base_dir))
        if isinstance(c, BigradedComplex):
            c = set_u_zero(c)
    elif isinstance(e, Mirror):
        c = dual(realize_graded(e.inner, base_dir))
    elif isinstance(e, Sum):
        c = tensor(realize_graded(e.left, base_dir), realize_graded(e.right, base_dir))
    else:
        raise TypeError(f"not a knot expression: {e!r}")
    return ensure_valid(c)


def realize_bigraded(e: KnotExpr, base_dir: str | Path | None = None) -> BigradedComplex:
    """The F2[u,v] complex of an expression; File leaves must be bigraded."""
    s = staircase_of(e)
    if s is not None:
        c = staircase_bigraded(s)
    elif isinstance(e, File):
        c = codec.load(_resolve(e.path, base_dir))
        if not isinstance(c, BigradedComplex):
            raise ComplexError(f"{e.path}: bigraded evaluation needs a bigraded document, got {c.kind}")
    elif isinstance(e, Mirror):
        c = dual(realize_bigraded(e.inner, base_dir))
    elif isinstance(e, Sum):
        c = tensor(realize_bigraded(e.left, base_dir), realize_bigraded(e.right, base_dir))
    else:
        raise TypeError(f"not a knot expression: {e!r}")
    return ensure_valid(c)
