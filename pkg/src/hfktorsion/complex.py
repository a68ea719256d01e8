"""Free chain complexes over F2[v] and F2[u,v] with monomial differentials.

Grading conventions
-------------------
Bigraded complexes carry ``(gr_u, gr_v)``.  Multiplication by ``u`` has
bidegree ``(-2, 0)``, by ``v`` has ``(0, -2)``, and the differential has
``(-1, -1)``.  An arrow ``x -> u^i v^j y`` is homogeneous when

    gr_u(y) - 2i = gr_u(x) - 1   and   gr_v(y) - 2j = gr_v(x) - 1.

The Alexander grading is ``(gr_u - gr_v) / 2``.

Graded complexes (over F2[v]) carry an Alexander grading and an optional
Maslov grading; an arrow ``x -> v^k y`` is homogeneous when
``A(y) = A(x) - k`` and ``M(y) - 2k = M(x) - 1``.  Setting ``u = 0`` in a
bigraded complex keeps ``gr_v`` as the Maslov grading, since ``v`` is the
variable that survives.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import ComplexError

__all__ = [
    "GradedGenerator",
    "GradedArrow",
    "GradedComplex",
    "BigradedGenerator",
    "BigradedArrow",
    "BigradedComplex",
    "Violation",
    "validate",
    "ensure_valid",
    "tensor",
    "dual",
    "set_u_zero",
    "rename",
    "unknot_graded",
    "unknot_bigraded",
]


@dataclass(frozen=True)
class GradedGenerator:
    name: str
    alexander: int
    maslov: int | None = None


@dataclass(frozen=True, order=True)
class GradedArrow:
    source: str
    target: str
    v: int


@dataclass(frozen=True)
class BigradedGenerator:
    name: str
    gr_u: int
    gr_v: int

    @property
    def alexander(self) -> int:
        return (self.gr_u - self.gr_v) // 2


@dataclass(frozen=True, order=True)
class BigradedArrow:
    source: str
    target: str
    u: int
    v: int


def _canonical_arrows(arrows: Iterable, names: set[str], kind: str) -> tuple:
    counts = Counter()
    for a in arrows:
        for end in (a.source, a.target):
            if end not in names:
                raise ComplexError(f"arrow {a.source} -> {a.target} references unknown generator {end!r}")
        exps = (a.v,) if kind == "graded" else (a.u, a.v)
        if any(not isinstance(e, int) or e < 0 for e in exps):
            raise ComplexError(f"arrow {a.source} -> {a.target} has negative exponent")
        counts[a] += 1
    # F2 coefficients: repeated arrows cancel in pairs
    return tuple(sorted(a for a, n in counts.items() if n % 2))


def _check_names(generators) -> set[str]:
    names = set()
    for g in generators:
        if not isinstance(g.name, str) or not g.name:
            raise ComplexError(f"generator name must be a non-empty string, got {g.name!r}")
        if g.name in names:
            raise ComplexError(f"duplicate generator name {g.name!r}")
        names.add(g.name)
    return names


@dataclass(frozen=True)
class GradedComplex:
    """Free complex over F2[v]; generators are kept in canonical order
    (Alexander descending, then name) and arrows sorted, so ``==`` is
    structural equality."""

    generators: tuple[GradedGenerator, ...]
    arrows: tuple[GradedArrow, ...] = ()
    kind = "graded"

    def __post_init__(self):
        gens = tuple(sorted(self.generators, key=lambda g: (-g.alexander, g.name)))
        names = _check_names(gens)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "arrows", _canonical_arrows(self.arrows, names, "graded"))

    def __len__(self) -> int:
        return len(self.generators)

    def generator(self, name: str) -> GradedGenerator:
        return self._by_name[name]

    @property
    def _by_name(self) -> dict[str, GradedGenerator]:
        return {g.name: g for g in self.generators}

    def differential(self) -> dict[str, list[tuple[int, str]]]:
        """Map ``x`` to ``[(k, y), ...]`` meaning ``dx = sum v^k y``."""
        out: dict[str, list[tuple[int, str]]] = {g.name: [] for g in self.generators}
        for a in self.arrows:
            out[a.source].append((a.v, a.target))
        return out

    @property
    def has_maslov(self) -> bool:
        return all(g.maslov is not None for g in self.generators)


@dataclass(frozen=True)
class BigradedComplex:
    """Free complex over F2[u, v] with monomial arrows."""

    generators: tuple[BigradedGenerator, ...]
    arrows: tuple[BigradedArrow, ...] = ()
    kind = "bigraded"

    def __post_init__(self):
        gens = tuple(sorted(self.generators, key=lambda g: (g.gr_v - g.gr_u, g.name)))
        names = _check_names(gens)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "arrows", _canonical_arrows(self.arrows, names, "bigraded"))

    def __len__(self) -> int:
        return len(self.generators)

    def generator(self, name: str) -> BigradedGenerator:
        return {g.name: g for g in self.generators}[name]

    def differential(self) -> dict[str, list[tuple[int, int, str]]]:
        """Map ``x`` to ``[(i, j, y), ...]`` meaning ``dx = sum u^i v^j y``."""
        out: dict[str, list[tuple[int, int, str]]] = {g.name: [] for g in self.generators}
        for a in self.arrows:
            out[a.source].append((a.u, a.v, a.target))
        return out


Complex = Union[GradedComplex, BigradedComplex]


@dataclass(frozen=True)
class Violation:
    """First violated invariant found by :func:`validate`."""

    rule: str
    witness: tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        w = ", ".join(self.witness)
        return f"{self.rule} at ({w})" + (f": {self.detail}" if self.detail else "")


def validate(c: Complex) -> Violation | None:
    """Return ``None`` when ``c`` is a valid complex, else the first violation.

    Homogeneity of each arrow is checked first (in arrow order), then
    ``d∘d = 0``.
    """
    by_name = {g.name: g for g in c.generators}
    if isinstance(c, GradedComplex):
        for a in c.arrows:
            x, y = by_name[a.source], by_name[a.target]
            if x.alexander - a.v != y.alexander:
                return Violation(
                    "inhomogeneous arrow", (a.source, a.target),
                    f"A({a.source}) - {a.v} = {x.alexander - a.v} != A({a.target}) = {y.alexander}",
                )
            if x.maslov is not None and y.maslov is not None and x.maslov - 1 != y.maslov - 2 * a.v:
                return Violation(
                    "inhomogeneous arrow", (a.source, a.target),
                    f"Maslov {x.maslov} - 1 != {y.maslov} - 2*{a.v}",
                )
        d = c.differential()
        for g in c.generators:
            acc = Counter()
            for k1, y in d[g.name]:
                for k2, z in d[y]:
                    acc[(z, k1 + k2)] += 1
            bad = sorted(key for key, n in acc.items() if n % 2)
            if bad:
                z, k = bad[0]
                return Violation("∂²≠0", (g.name, z), f"coefficient v^{k}")
        return None

    for g in c.generators:
        if (g.gr_u - g.gr_v) % 2:
            return Violation("odd Alexander grading", (g.name,), f"gr_u - gr_v = {g.gr_u - g.gr_v}")
    for a in c.arrows:
        x, y = by_name[a.source], by_name[a.target]
        if y.gr_u - 2 * a.u != x.gr_u - 1 or y.gr_v - 2 * a.v != x.gr_v - 1:
            return Violation(
                "inhomogeneous arrow", (a.source, a.target),
                f"({x.gr_u}, {x.gr_v}) -> u^{a.u} v^{a.v} ({y.gr_u}, {y.gr_v})",
            )
    d = c.differential()
    for g in c.generators:
        acc = Counter()
        for i1, j1, y in d[g.name]:
            for i2, j2, z in d[y]:
                acc[(z, i1 + i2, j1 + j2)] += 1
        bad = sorted(key for key, n in acc.items() if n % 2)
        if bad:
            z, i, j = bad[0]
            return Violation("∂²≠0", (g.name, z), f"coefficient u^{i} v^{j}")
    return None


def ensure_valid(c: Complex) -> Complex:
    v = validate(c)
    if v is not None:
        raise ComplexError(f"invalid {c.kind} complex: {v}")
    return c


def _pair_name(a: str, b: str) -> str:
    return f"{a}*{b}"


def tensor(c1: Complex, c2: Complex) -> Complex:
    """Tensor product over the ground ring with the Leibniz differential.

    Generator ``x*y`` has the sum of the gradings of ``x`` and ``y``.
    """
    if type(c1) is not type(c2):
        raise ComplexError(f"cannot tensor a {c1.kind} complex with a {c2.kind} complex")
    if isinstance(c1, GradedComplex):
        gens = [
            GradedGenerator(
                _pair_name(x.name, y.name),
                x.alexander + y.alexander,
                None if x.maslov is None or y.maslov is None else x.maslov + y.maslov,
            )
            for x in c1.generators for y in c2.generators
        ]
        arrows = [GradedArrow(_pair_name(a.source, y.name), _pair_name(a.target, y.name), a.v)
                  for a in c1.arrows for y in c2.generators]
        arrows += [GradedArrow(_pair_name(x.name, a.source), _pair_name(x.name, a.target), a.v)
                   for x in c1.generators for a in c2.arrows]
        return GradedComplex(tuple(gens), tuple(arrows))
    gens = [
        BigradedGenerator(_pair_name(x.name, y.name), x.gr_u + y.gr_u, x.gr_v + y.gr_v)
        for x in c1.generators for y in c2.generators
    ]
    arrows = [BigradedArrow(_pair_name(a.source, y.name), _pair_name(a.target, y.name), a.u, a.v)
              for a in c1.arrows for y in c2.generators]
    arrows += [BigradedArrow(_pair_name(x.name, a.source), _pair_name(x.name, a.target), a.u, a.v)
               for x in c1.generators for a in c2.arrows]
    return BigradedComplex(tuple(gens), tuple(arrows))


def dual(c: Complex) -> Complex:
    """Hom into the ground ring: arrows reversed, gradings negated, names kept."""
    if isinstance(c, GradedComplex):
        gens = tuple(
            GradedGenerator(g.name, -g.alexander, None if g.maslov is None else -g.maslov)
            for g in c.generators
        )
        return GradedComplex(gens, tuple(GradedArrow(a.target, a.source, a.v) for a in c.arrows))
    gens = tuple(BigradedGenerator(g.name, -g.gr_u, -g.gr_v) for g in c.generators)
    return BigradedComplex(gens, tuple(BigradedArrow(a.target, a.source, a.u, a.v) for a in c.arrows))


def set_u_zero(c: BigradedComplex) -> GradedComplex:
    """Tensor with F2[u,v]/(u): drop arrows carrying a positive power of ``u``."""
    if not isinstance(c, BigradedComplex):
        raise ComplexError("set_u_zero expects a bigraded complex")
    gens = tuple(GradedGenerator(g.name, g.alexander, g.gr_v) for g in c.generators)
    arrows = tuple(GradedArrow(a.source, a.target, a.v) for a in c.arrows if a.u == 0)
    return GradedComplex(gens, arrows)


def rename(c: Complex, mapping: Mapping[str, str]) -> Complex:
    """Rename generators; names missing from ``mapping`` are kept."""
    f = lambda n: mapping.get(n, n)  # noqa: E731
    if isinstance(c, GradedComplex):
        return GradedComplex(
            tuple(GradedGenerator(f(g.name), g.alexander, g.maslov) for g in c.generators),
            tuple(GradedArrow(f(a.source), f(a.target), a.v) for a in c.arrows),
        )
    return BigradedComplex(
        tuple(BigradedGenerator(f(g.name), g.gr_u, g.gr_v) for g in c.generators),
        tuple(BigradedArrow(f(a.source), f(a.target), a.u, a.v) for a in c.arrows),
    )


def unknot_graded() -> GradedComplex:
    return GradedComplex((GradedGenerator("y0", 0, 0),))


def unknot_bigraded() -> BigradedComplex:
    return BigradedComplex((BigradedGenerator("x0", 0, 0),))
