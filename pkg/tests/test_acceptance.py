"""Acceptance criteria AC1 to AC10.

Every test carries a ``criterion`` marker; conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""

import itertools
import math
import random
import time

import pytest

from hfktorsion import (
    CobordismData,
    ModuleDecomp,
    bigraded_homology,
    bound_report,
    c_ord_uv,
    c_ord_v,
    cobordism_consistency,
    decompose_graded,
    dual,
    ord_v,
    parse,
    realize_bigraded,
    realize_graded,
    ribbon_concordance_check,
    surface_norm,
    tensor,
    torsion_distance,
    torus_alexander,
)
from hfktorsion.algebra import PolyV, SparseMat, smith_normal_form

from conftest import FIXTURES

import oracles

COPRIME_12 = [(p, q) for q in range(3, 13) for p in range(2, q) if math.gcd(p, q) == 1]
COPRIME_9 = [(p, q) for p, q in COPRIME_12 if q <= 9]
COPRIME_7 = [(p, q) for p, q in COPRIME_12 if q <= 7]
COPRIME_5 = [(p, q) for p, q in COPRIME_12 if q <= 5]


def graded_order(text: str) -> int:
    return ord_v(decompose_graded(realize_graded(parse(text), FIXTURES)))


# --------------------------------------------------------------------------
# AC1


@pytest.mark.criterion(1, "torus torsion orders, coprime 2 <= p < q <= 12")
def test_ac1_torus_orders_sweep():
    start = time.perf_counter()
    got = {(p, q): graded_order(f"T({p},{q})") for p, q in COPRIME_12}
    elapsed = time.perf_counter() - start
    assert got == {(p, q): min(p, q) - 1 for p, q in COPRIME_12}
    assert elapsed < 5.0, f"sweep took {elapsed:.2f} s"


# --------------------------------------------------------------------------
# AC2


@pytest.mark.criterion(2, "Alexander polynomial expansion")
@pytest.mark.parametrize("p, q", COPRIME_12)
def test_ac2_alexander_matches_division_oracle(p, q):
    a = torus_alexander(p, q)
    assert dict(a.terms) == oracles.laurent_torus_alexander(p, q)
    d = (p - 1) * (q - 1) // 2
    top = sorted(a.terms, reverse=True)[:3]
    assert top == [(d, 1), (d - 1, -1), (d - min(p, q), 1)]


# --------------------------------------------------------------------------
# AC3


@pytest.mark.criterion(3, "T(5,6) figure fixture")
def test_ac3_t56_fixture():
    assert torus_alexander(5, 6).to_latex() == "t^{10}-t^9+t^5-t^3+1-t^{-3}+t^{-5}-t^{-9}+t^{-10}"
    m = decompose_graded(realize_graded(parse("T(5,6)")))
    assert sorted(m.orders) == [1, 2, 3, 4]
    assert m.free_rank == 1
    assert ord_v(m) == 4


# --------------------------------------------------------------------------
# AC4


@pytest.mark.criterion(4, "Kunneth max rule and mirror duality, 200 random staircase pairs")
def test_ac4_kunneth_and_mirror():
    rng = random.Random(2024)
    knots = [f"T({p},{q})" for p, q in COPRIME_7] + [f"m(T({p},{q}))" for p, q in COPRIME_7]
    complexes = {k: realize_graded(parse(k)) for k in knots}
    expected = {k: min(p, q) - 1 for (p, q) in COPRIME_7 for k in (f"T({p},{q})", f"m(T({p},{q}))")}
    start = time.perf_counter()
    for _ in range(200):
        a, b = rng.choice(knots), rng.choice(knots)
        c1, c2 = complexes[a], complexes[b]
        assert ord_v(decompose_graded(tensor(c1, c2))) == max(expected[a], expected[b]), (a, b)
        assert ord_v(decompose_graded(dual(c1))) == ord_v(decompose_graded(c1)) == expected[a], a
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.2f} s"


# --------------------------------------------------------------------------
# AC5


def _timed_bigraded(text):
    start = time.perf_counter()
    h = bigraded_homology(realize_bigraded(parse(text)))
    return h, start


@pytest.mark.criterion(5, "bigraded torsion orders")
@pytest.mark.parametrize("p, q", COPRIME_7)
def test_ac5_torus_torsion_free_not_free(p, q):
    h, start = _timed_bigraded(f"T({p},{q})")
    assert c_ord_uv(h) == 0
    assert h.torsion.is_zero()
    assert h.min_generators > 1
    assert not h.is_free()
    assert time.perf_counter() - start < 60.0


@pytest.mark.criterion(5, "bigraded torsion orders")
@pytest.mark.parametrize("p, q", COPRIME_7)
def test_ac5_mirror_torus_order_is_genus(p, q):
    h, start = _timed_bigraded(f"m(T({p},{q}))")
    assert c_ord_v(h) == (p - 1) * (q - 1) // 2
    assert time.perf_counter() - start < 60.0


@pytest.mark.criterion(5, "bigraded torsion orders")
@pytest.mark.parametrize("p, q", COPRIME_5)
def test_ac5_self_cancelling_sum(p, q):
    h, start = _timed_bigraded(f"T({p},{q}) # m(T({p},{q}))")
    assert c_ord_v(h) == min(p, q) - 1
    assert time.perf_counter() - start < 60.0


# --------------------------------------------------------------------------
# AC6


@pytest.mark.criterion(6, "sharpness of the bridge and fusion bounds, p, q <= 9")
@pytest.mark.parametrize("p, q", COPRIME_9)
def test_ac6_bridge_sharp(p, q):
    r = bound_report(parse(f"T({p},{q})"))
    b = r.bound("bridge")
    assert r.ord_v == min(p, q) - 1
    assert b.value == b.known == min(p, q)
    assert b.sharp is True


@pytest.mark.criterion(6, "sharpness of the bridge and fusion bounds, p, q <= 9")
@pytest.mark.parametrize("p, q", COPRIME_9)
def test_ac6_fusion_sharp(p, q):
    r = bound_report(parse(f"T({p},{q}) # m(T({p},{q}))"))
    f = r.bound("fusion")
    assert r.ord_v == min(p, q) - 1
    assert f.value == f.known == min(p, q) - 1
    assert f.sharp is True and f.condition == ""


# --------------------------------------------------------------------------
# AC7


@pytest.mark.criterion(7, "consistency rules, exhaustive over [0, 6]")
def test_ac7_consistency_exhaustive():
    start = time.perf_counter()
    r = range(7)
    for o0, o1, M, g in itertools.product(r, repeat=4):
        assert bool(cobordism_consistency(o0, o1, M, g)) == (o0 <= max(M, o1) + 2 * g)
    for o0, o1, b in itertools.product(r, repeat=3):
        direct = (b <= o0 and o0 == o1) or (o0 <= o1 and o1 <= b)
        assert bool(ribbon_concordance_check(o0, o1, b)) == direct
    checked = 0
    for m, M, g, b in itertools.product(r, repeat=4):
        if 2 * g != b - m - M:
            continue
        s = surface_norm(CobordismData(m=m, M=M, g=g, b=b))
        assert s.norm == max(m, M) + 2 * g == max(b - m, b - M) == s.saddle_form
        checked += 1
    assert checked > 0
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f} s"


# --------------------------------------------------------------------------
# AC8


def _oracle_distance(m1: ModuleDecomp, m2: ModuleDecomp):
    if m1.free_rank != m2.free_rank:
        return math.inf
    d = 0
    while True:
        a = sorted(n - d for n in m1.orders if n > d)
        b = sorted(n - d for n in m2.orders if n > d)
        if a == b:
            return d
        d += 1


@pytest.mark.criterion(8, "metric property")
def test_ac8_max_subadditivity():
    rng = random.Random(8)
    for _ in range(10_000):
        A, B, A2, B2 = (rng.randint(0, 50) for _ in range(4))
        assert max(A + A2, B + B2) <= max(A, B) + max(A2, B2)


@pytest.mark.criterion(8, "metric property")
def test_ac8_torsion_distance_triangle():
    rng = random.Random(88)

    def random_module():
        free = rng.choice([1, 1, 1, 0, 2])
        return ModuleDecomp.from_orders(free, [rng.randint(1, 6) for _ in range(rng.randint(0, 5))])

    for _ in range(1_000):
        x, y, z = random_module(), random_module(), random_module()
        dxy, dyz, dxz = torsion_distance(x, y), torsion_distance(y, z), torsion_distance(x, z)
        assert dxz <= dxy + dyz
        assert dxy == torsion_distance(y, x) == _oracle_distance(x, y)
        assert torsion_distance(x, x) == 0


# --------------------------------------------------------------------------
# AC9

ALPHABET = [0, 1, 2, 4, 8]  # 0, 1, v, v^2, v^3 as bitmasks


def _snf_bits(m: list[list[int]]) -> list[int]:
    return [d.bits for d in smith_normal_form(SparseMat.from_dense([[PolyV(x) for x in r] for r in m]))]


def _orbit_representatives(rows: int, cols: int, alphabet):
    """One matrix per orbit of row and column permutations."""
    perms = list(itertools.permutations(range(cols)))
    for combo in itertools.combinations_with_replacement(itertools.product(alphabet, repeat=cols), rows):
        if all(combo <= tuple(sorted(tuple(r[c] for c in p) for r in combo)) for p in perms):
            yield [list(r) for r in combo]


# transposition preserves invariant factors, so rows <= cols suffices
EXHAUSTIVE_SHAPES = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 3)]


@pytest.mark.criterion(9, "Smith normal form against the minors oracle")
@pytest.mark.parametrize("rows, cols", EXHAUSTIVE_SHAPES)
def test_ac9_exhaustive_small_shapes(rows, cols):
    count = 0
    for m in _orbit_representatives(rows, cols, ALPHABET):
        assert _snf_bits(m) == oracles.bm_invariant_factors(m), m
        t = [list(c) for c in zip(*m)]
        assert _snf_bits(t) == oracles.bm_invariant_factors(t), t
        count += 1
    assert count > 0


@pytest.mark.criterion(9, "Smith normal form against the minors oracle")
@pytest.mark.parametrize("alphabet", [(0, 1), (1, 2)])
def test_ac9_exhaustive_4x4_two_letters(alphabet):
    for m in _orbit_representatives(4, 4, alphabet):
        assert _snf_bits(m) == oracles.bm_invariant_factors(m), m


@pytest.mark.criterion(9, "Smith normal form against the minors oracle")
@pytest.mark.parametrize("rows, cols", [(3, 4), (4, 3), (4, 4)])
def test_ac9_sampled_large_shapes(rows, cols):
    rng = random.Random(rows * 10 + cols)
    for _ in range(4000):
        m = [[rng.choice(ALPHABET) for _ in range(cols)] for _ in range(rows)]
        assert _snf_bits(m) == oracles.bm_invariant_factors(m), m


@pytest.mark.criterion(9, "Smith normal form against the minors oracle")
def test_ac9_exhaustive_4x4_five_letters():
    # 5^16 matrices, about 2.6e8 orbits: beyond any reasonable test budget
    pytest.skip("exhaustive 4x4 enumeration over {0, 1, v, v^2, v^3} is infeasible (5^16 matrices)")


# --------------------------------------------------------------------------
# AC10

CORPUS = (
    ["U", "T(1,5)", "m(U)", "U # U"]
    + [f"T({p},{q})" for p, q in COPRIME_9]
    + [f"m(T({p},{q}))" for p, q in COPRIME_9]
    + [f"T({p},{q}) # m(T({p},{q}))" for p, q in COPRIME_7]
    + [
        "T(2,3) # T(2,3)",
        "T(2,3) # T(3,4)",
        "m(T(2,3)) # T(2,5) # T(3,5)",
        "m(T(2,3) # T(2,5))",
        "T(3,4) # m(T(2,5)) # U",
        "L[1_1;-1_0;1_-1]",
        "L[1_2;-1_1;1_0;-1_-1;1_-2] # m(T(2,3))",
        "L[1_3;-1_2;1_0;-1_-2;1_-3]",
        "file:trefoil_graded.json",
        "file:trefoil_bigraded.json # m(T(2,3))",
        "file:trefoil_graded.json # T(3,4)",
    ]
)


@pytest.mark.criterion(10, "torsion distance to the unknot equals ord_v")
@pytest.mark.parametrize("text", CORPUS)
def test_ac10_distance_to_unknot(text):
    m = decompose_graded(realize_graded(parse(text), FIXTURES))
    u = ModuleDecomp(1, (), (0,))
    assert torsion_distance(m, u) == ord_v(m)
    assert torsion_distance(m, u, graded=True) == ord_v(m)
    assert bound_report(parse(text), base_dir=FIXTURES).d_t_unknot == ord_v(m)
