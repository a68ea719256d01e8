"""Topological lower bounds and consistency rules driven by torsion orders.

Every rule here is one-sided.  A rule can certify that a cobordism with the
given counts cannot exist; it never certifies that one does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BoundsError
from .homology import (
    ChainInterval,
    ModuleDecomp,
    bigraded_homology,
    c_ord_chain_interval,
    c_ord_uv,
    c_ord_v,
    decompose_graded,
    ord_v,
    strip_unknots,
    torsion_distance,
)
from .knots import (
    KnotExpr,
    Mirror,
    StaircaseSpec,
    Sum,
    Torus,
    Unknot,
    realize_bigraded,
    realize_graded,
    staircase_graded,
)

__all__ = [
    "RULES",
    "Bound",
    "BoundReport",
    "CobordismData",
    "SurfaceNorm",
    "Verdict",
    "bound_report",
    "refined_distance_lower",
    "ribbon_distance_lower",
    "cobordism_consistency",
    "chain_cobordism_consistency",
    "ribbon_concordance_check",
    "ribbon_cobordism_check",
    "surface_norm",
    "bridge_from_concordant_torus",
    "n_invariant",
]

RULES = {
    "bridge": "bridge index: ord_v(K) <= br(K) - 1",
    "fusion": "fusion number of a ribbon knot: ord_v(K) <= Fus(K)",
    "band_unlink": "band-unlinking number: ord_v(K) <= ul_b(K)",
    "slice_minima": "slice disk with m local minima: ord_v(K) <= m - 1",
    "ribbon_distance": "ribbon distance: d_t(K, K') <= d_r(K, K')",
    "refined_distance": "refined cobordism distance: |ord_v(K0) - ord_v(K1)| <= d(K0, K1)",
    "cobordism": "cobordism: ord_v(K0) <= max(M, ord_v(K1)) + 2g(S)",
    "chain_cobordism": "cobordism, chain order: ord_ch(K0) <= max(M, ord_ch(K1)) + 2g(S)",
    "chain_band_unlink": "band-unlinking number: ord_ch(K) <= ul_b(K)",
    "chain_fusion": "fusion number of a ribbon knot: ord_ch(K) <= Fus(K)",
    "ribbon_concordance": "ribbon concordance: b <= ord_v(K0) = ord_v(K1) or ord_v(K0) <= ord_v(K1) <= b",
    "ribbon_cobordism": "ribbon cobordism: ord_v(K0) - ord_v(K1) <= 2g(S)",
    "surface_norm": "surface norm: |S| = max(m, M) + 2g(S) = max(b - m, b - M) <= b",
    "torus_concordance": "concordant to T(p,q): br(K) >= br(T(p,q)) = min(p, q)",
}


def _nonneg(**values: int) -> None:
    for name, x in values.items():
        if isinstance(x, bool) or not isinstance(x, int):
            raise BoundsError(f"{name} must be an integer, got {x!r}")
        if x < 0:
            raise BoundsError(f"{name} must be non-negative, got {x}")


@dataclass(frozen=True)
class Bound:
    """``quantity >= value``, with the true value attached when known.

    ``condition`` names a hypothesis the bound needs (e.g. that the knot is
    ribbon); it is empty when the bound holds unconditionally.
    """

    quantity: str
    value: int | float
    rule: str
    known: int | None = None
    condition: str = ""

    @property
    def sharp(self) -> bool | None:
        return None if self.known is None else self.known == self.value

    def __str__(self) -> str:
        s = f"{self.quantity} >= {_fmt(self.value)}"
        if self.known is not None:
            s += f" (known {self.known}{', sharp' if self.sharp else ''})"
        if self.condition:
            s += f" [if {self.condition}]"
        return s


def _fmt(x: int | float) -> str:
    return "inf" if x == math.inf else str(x)


@dataclass(frozen=True)
class BoundReport:
    expr: str
    decomp: ModuleDecomp
    ord_v: int
    d_t_unknot: int | float
    bounds: tuple[Bound, ...]
    known: dict[str, int] = field(default_factory=dict)
    genus_chain: str | None = None
    c_ord_v: int | None = None
    c_ord_uv: int | None = None
    chain: ChainInterval | None = None

    def bound(self, quantity: str) -> Bound:
        for b in self.bounds:
            if b.quantity == quantity:
                return b
        raise KeyError(quantity)


def _torus_up_to_mirror(e: KnotExpr) -> Torus | None:
    inner = e.inner if isinstance(e, Mirror) else e
    return inner if isinstance(inner, Torus) else None


def _mirror_pair(e: KnotExpr) -> KnotExpr | None:
    """``K`` when ``e`` is ``K # m(K)`` or ``m(K) # K``."""
    if isinstance(e, Sum):
        for k, mk in ((e.left, e.right), (e.right, e.left)):
            if isinstance(mk, Mirror) and mk.inner == k:
                return k
    return None


def bound_report(e: KnotExpr, *, bigraded: bool = False, base_dir: str | Path | None = None) -> BoundReport:
    """All torsion-order lower bounds for ``e``.

    ``bigraded=True`` adds the two-variable orders and the chain-order
    interval, which is slower on large connected sums.
    """
    e = strip_unknots(e)
    decomp = decompose_graded(realize_graded(e, base_dir))
    k = ord_v(decomp)
    d_t = torsion_distance(decomp, ModuleDecomp(1))
    known: dict[str, int] = {}
    genus_chain = None

    t = _torus_up_to_mirror(e)
    if isinstance(e, Unknot):
        known = {"br": 1, "ul_b": 0, "g3": 0, "g4": 0, "Fus": 0}
    elif t is not None:
        g = (t.p - 1) * (t.q - 1) // 2
        known = {"br": t.p, "ul_b": 2 * g, "g3": g, "g4": g}
        genus_chain = f"2g4 = {2 * g} <= 2g_r <= ul_b = {2 * g} <= u_b <= 2g3 = {2 * g}"

    pair = _mirror_pair(e)
    ribbon = isinstance(e, Unknot) or pair is not None
    fus_known = known.get("Fus")
    if pair is not None:
        tp = _torus_up_to_mirror(pair)
        if tp is not None:
            # T(p,q) # m(T(p,q)) has a ribbon disk with p - 1 bands
            fus_known = tp.p - 1
    ribbon_cond = "" if ribbon else "K is ribbon"

    bounds = [
        Bound("bridge", k + 1, RULES["bridge"], known.get("br")),
        Bound("fusion", k, RULES["fusion"], fus_known, ribbon_cond),
        Bound("band_unlink", k, RULES["band_unlink"], known.get("ul_b")),
        Bound("slice_disk_minima", k + 1, RULES["slice_minima"], None, "" if ribbon else "K is slice"),
        Bound("ribbon_distance_to_unknot", d_t, RULES["ribbon_distance"], None, ribbon_cond),
    ]

    cv = cuv = chain = None
    if bigraded:
        h = bigraded_homology(realize_bigraded(e, base_dir))
        cv, cuv = c_ord_v(h), c_ord_uv(h)
        chain = c_ord_chain_interval(e, h)
        bounds.append(Bound("band_unlink_chain", chain.lo, RULES["chain_band_unlink"], known.get("ul_b")))
        bounds.append(Bound("fusion_chain", chain.lo, RULES["chain_fusion"], fus_known, ribbon_cond))

    return BoundReport(str(e), decomp, k, d_t, tuple(bounds), known, genus_chain, cv, cuv, chain)


def refined_distance_lower(e1: KnotExpr, e2: KnotExpr, base_dir: str | Path | None = None) -> int:
    """Lower bound on the refined cobordism distance, and on the number of
    oriented band moves between the two knots."""
    o1 = ord_v(decompose_graded(realize_graded(e1, base_dir)))
    o2 = ord_v(decompose_graded(realize_graded(e2, base_dir)))
    return abs(o1 - o2)


def ribbon_distance_lower(e1: KnotExpr, e2: KnotExpr, *, graded: bool = False,
                          base_dir: str | Path | None = None) -> int | float:
    m1 = decompose_graded(realize_graded(e1, base_dir))
    m2 = decompose_graded(realize_graded(e2, base_dir))
    return torsion_distance(m1, m2, graded=graded)


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    inequality: str
    rule: str

    def __bool__(self) -> bool:
        return self.consistent

    @property
    def status(self) -> str:
        return "consistent" if self.consistent else "obstructed"

    def __str__(self) -> str:
        return f"{self.status}: {self.inequality}"


def cobordism_consistency(ord0: int, ord1: int, M: int, g: int) -> Verdict:
    """Can a connected cobordism with ``M`` local maxima and genus ``g`` run
    from a knot with torsion order ``ord0`` to one with ``ord1``?"""
    _nonneg(ord0=ord0, ord1=ord1, M=M, g=g)
    rhs = max(M, ord1) + 2 * g
    ok = ord0 <= rhs
    return Verdict(ok, f"{ord0} {'<=' if ok else '>'} max({M}, {ord1}) + 2*{g} = {rhs}", RULES["cobordism"])


def chain_cobordism_consistency(c0: ChainInterval, c1: ChainInterval, M: int, g: int) -> Verdict:
    """Chain-order version of :func:`cobordism_consistency` on intervals.

    Obstructed only when the lower end for ``K0`` already exceeds the
    largest possible right-hand side.
    """
    _nonneg(M=M, g=g)
    if c1.hi is None:
        return Verdict(True, f"{c0.lo} <= max({M}, ord_ch(K1)) + 2*{g} (ord_ch(K1) unbounded above)",
                       RULES["chain_cobordism"])
    rhs = max(M, c1.hi) + 2 * g
    ok = c0.lo <= rhs
    return Verdict(ok, f"{c0.lo} {'<=' if ok else '>'} max({M}, {c1.hi}) + 2*{g} = {rhs}", RULES["chain_cobordism"])


def ribbon_concordance_check(ord0: int, ord1: int, b: int) -> Verdict:
    """Ribbon concordance from ``K0`` to ``K1`` with ``b`` saddles."""
    _nonneg(ord0=ord0, ord1=ord1, b=b)
    if b <= ord0 == ord1:
        return Verdict(True, f"{b} <= {ord0} = {ord1}", RULES["ribbon_concordance"])
    if ord0 <= ord1 <= b:
        return Verdict(True, f"{ord0} <= {ord1} <= {b}", RULES["ribbon_concordance"])
    return Verdict(False, f"neither {b} <= {ord0} = {ord1} nor {ord0} <= {ord1} <= {b}",
                   RULES["ribbon_concordance"])


def ribbon_cobordism_check(ord0: int, ord1: int, g: int) -> Verdict:
    _nonneg(ord0=ord0, ord1=ord1, g=g)
    ok = ord0 - ord1 <= 2 * g
    return Verdict(ok, f"{ord0} - {ord1} {'<=' if ok else '>'} 2*{g}", RULES["ribbon_cobordism"])


@dataclass(frozen=True)
class CobordismData:
    """Critical point counts of a connected cobordism: ``m`` births,
    ``b`` saddles (optional), ``M`` deaths, genus ``g``."""

    m: int
    M: int
    g: int
    b: int | None = None

    def __post_init__(self):
        _nonneg(m=self.m, M=self.M, g=self.g)
        if self.b is not None:
            _nonneg(b=self.b)
            if 2 * self.g != self.b - self.m - self.M:
                raise BoundsError(
                    f"Euler characteristic mismatch: 2g != b - m - M "
                    f"({2 * self.g} != {self.b} - {self.m} - {self.M} = {self.b - self.m - self.M})"
                )


@dataclass(frozen=True)
class SurfaceNorm:
    norm: int
    saddle_form: int | None
    b: int | None

    def __int__(self) -> int:
        return self.norm


def surface_norm(d: CobordismData) -> SurfaceNorm:
    """``max(m, M) + 2g``; with ``b`` known also ``max(b - m, b - M)``, which
    agrees with it and is at most ``b``."""
    norm = max(d.m, d.M) + 2 * d.g
    if d.b is None:
        return SurfaceNorm(norm, None, None)
    saddle = max(d.b - d.m, d.b - d.M)
    return SurfaceNorm(norm, saddle, d.b)


def bridge_from_concordant_torus(p: int, q: int) -> Bound:
    """Bridge bound for a knot the caller asserts is concordant to ``T(p,q)``.

    The concordance is taken on trust; nothing here checks it.
    """
    _nonneg(p=p, q=q)
    if math.gcd(p, q) != 1 or min(p, q) < 1:
        raise BoundsError(f"T({p},{q}) is not a torus knot")
    return Bound("bridge", min(p, q), RULES["torus_concordance"], None, f"K is concordant to T({p},{q})")


def n_invariant(s: StaircaseSpec) -> int:
    """``N(K)`` of an L-space knot, which equals its torsion order."""
    return ord_v(decompose_graded(staircase_graded(s)))
