"""Exact arithmetic over F2, F2[v] and monomials u^i v^j.

Polynomials over F2 are stored as Python integers used as bit sets: bit ``k``
is the coefficient of ``v^k``.  Addition is XOR and multiplication is
carry-less multiplication, so ``PolyV`` is cheap to hash and compare.

>>> a = PolyV.from_exponents([2, 1])
>>> q, r = poly_divmod(a, PolyV.monomial(1))
>>> print(q, r)
v + 1 0
>>> print(poly_gcd(PolyV.from_exponents([3, 0]), PolyV.from_exponents([1, 0])))
v + 1
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Generic, Iterable, Iterator, Mapping, Sequence, TypeVar

from .errors import AlgebraError

__all__ = [
    "PolyV",
    "MonoUV",
    "SparseMat",
    "poly_divmod",
    "poly_gcd",
    "smith_normal_form",
    "smith_diagonal",
    "invariant_factors",
    "kernel_basis_f2",
    "rank_f2",
    "F2Span",
]


@dataclass(frozen=True, order=True)
class PolyV:
    """An element of F2[v], coefficients packed into the bits of an int."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise AlgebraError("PolyV bit pattern must be non-negative")

    @classmethod
    def monomial(cls, k: int) -> PolyV:
        if k < 0:
            raise AlgebraError(f"negative exponent {k}")
        return cls(1 << k)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> PolyV:
        bits = 0
        for k in exps:
            if k < 0:
                raise AlgebraError(f"negative exponent {k}")
            bits ^= 1 << k
        return cls(bits)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def valuation(self) -> int:
        """Lowest exponent with nonzero coefficient; -1 for zero."""
        if not self.bits:
            return -1
        return (self.bits & -self.bits).bit_length() - 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_one(self) -> bool:
        return self.bits == 1

    def is_monomial(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def exponents(self) -> list[int]:
        out = []
        b, k = self.bits, 0
        while b:
            if b & 1:
                out.append(k)
            b >>= 1
            k += 1
        return out

    def __bool__(self) -> bool:
        return self.bits != 0

    def __add__(self, other: PolyV) -> PolyV:
        return PolyV(self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self) -> PolyV:
        return self

    def __mul__(self, other: PolyV) -> PolyV:
        return PolyV(_clmul(self.bits, other.bits))

    def __pow__(self, n: int) -> PolyV:
        out = PolyV(1)
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other: PolyV) -> tuple[PolyV, PolyV]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: PolyV) -> PolyV:
        return poly_divmod(self, other)[0]

    def __mod__(self, other: PolyV) -> PolyV:
        return poly_divmod(self, other)[1]

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        parts = []
        for k in reversed(self.exponents()):
            parts.append("1" if k == 0 else "v" if k == 1 else f"v^{k}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyV({self})"


ZERO = PolyV(0)
ONE = PolyV(1)


def _clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: PolyV, b: PolyV) -> tuple[PolyV, PolyV]:
    """Euclidean division in F2[v]: ``a = q*b + r`` with ``deg r < deg b``."""
    if not b.bits:
        raise AlgebraError("zero divisor")
    db = b.degree
    q, r = 0, a.bits
    while r and r.bit_length() - 1 >= db:
        shift = r.bit_length() - 1 - db
        q ^= 1 << shift
        r ^= b.bits << shift
    return PolyV(q), PolyV(r)


def poly_gcd(a: PolyV, b: PolyV) -> PolyV:
    """Monic gcd by the Euclidean algorithm; over F2 every nonzero poly is monic."""
    if not a.bits and not b.bits:
        raise AlgebraError("gcd(0, 0) is undefined")
    while b.bits:
        a, b = b, poly_divmod(a, b)[1]
    return a


def poly_lcm(a: PolyV, b: PolyV) -> PolyV:
    return poly_divmod(a * b, poly_gcd(a, b))[0]


@dataclass(frozen=True, order=True)
class MonoUV:
    """The monomial u^i v^j."""

    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise AlgebraError(f"negative exponent in u^{self.i} v^{self.j}")

    def __mul__(self, other: MonoUV) -> MonoUV:
        return MonoUV(self.i + other.i, self.j + other.j)

    def divides(self, other: MonoUV) -> bool:
        return self.i <= other.i and self.j <= other.j

    @property
    def total_degree(self) -> int:
        return self.i + self.j

    def __str__(self) -> str:
        parts = []
        for var, e in (("u", self.i), ("v", self.j)):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts) or "1"


E = TypeVar("E")


@dataclass(frozen=True)
class SparseMat(Generic[E]):
    """Sparse matrix; ``entries`` maps ``(row, col)`` to a nonzero element.

    Entries equal to zero (``0``, ``PolyV(0)``) are dropped on construction.
    """

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], E] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), x in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise AlgebraError(f"entry ({r}, {c}) out of range for {self.rows}x{self.cols}")
            if x:
                clean[(r, c)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[E]], cols: int | None = None) -> SparseMat[E]:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {(r, c): x for r, row in enumerate(data) for c, x in enumerate(row)}
        return cls(rows, cols, entries)

    def get(self, r: int, c: int, default=0):
        return self.entries.get((r, c), default)

    def to_dense(self, zero=0) -> list[list]:
        out = [[zero] * self.cols for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    def __len__(self) -> int:
        return len(self.entries)


# --------------------------------------------------------------------------
# Smith normal form over F2[v]


def smith_diagonal(m: SparseMat[PolyV]) -> list[tuple[PolyV, int, int]]:
    """Diagonalize ``m`` by unimodular row and column operations.

    Returns ``(d, row, col)`` for every pivot, where ``row``/``col`` are the
    original indices of the pivot's row and column.  The diagonal need not
    satisfy the divisibility chain; see :func:`invariant_factors`.

    Pivots are chosen by smallest degree, ties broken by lowest ``(row, col)``.
    When the matrix is homogeneous (entry degrees given by row and column
    gradings) every quotient is a monomial, no remainders occur, and the
    pivot row/column labels carry the gradings of the new basis vectors.
    """
    rows: dict[int, dict[int, PolyV]] = {}
    cols: dict[int, dict[int, PolyV]] = {}
    heap: list[tuple[int, int, int]] = []
    for (r, c), x in m.entries.items():
        if not isinstance(x, PolyV):
            x = PolyV(int(x))
        if not x:
            continue
        rows.setdefault(r, {})[c] = x
        cols.setdefault(c, {})[r] = x
        heap.append((x.degree, r, c))
    heapq.heapify(heap)

    def put(r: int, c: int, x: PolyV) -> None:
        if x:
            rows.setdefault(r, {})[c] = x
            cols.setdefault(c, {})[r] = x
            heapq.heappush(heap, (x.degree, r, c))
        else:
            rows.get(r, {}).pop(c, None)
            cols.get(c, {}).pop(r, None)

    out: list[tuple[PolyV, int, int]] = []
    while heap:
        deg, r, c = heapq.heappop(heap)
        a = rows.get(r, {}).get(c)
        if a is None or a.degree != deg:
            continue
        clean = True
        # column pass: row_k += q * row_r
        for k in [k for k in cols[c] if k != r]:
            q, rem = poly_divmod(cols[c][k], a)
            for cc, x in list(rows[r].items()):
                put(k, cc, rows[k].get(cc, ZERO) + q * x)
            if rem:
                clean = False
        if clean:
            # column c now holds only the pivot, so column ops touch row r only
            for cc in [cc for cc in rows[r] if cc != c]:
                rem = poly_divmod(rows[r][cc], a)[1]
                put(r, cc, rem)
                if rem:
                    clean = False
        if not clean:
            heapq.heappush(heap, (deg, r, c))
            continue
        out.append((a, r, c))
        del rows[r]
        del cols[c]
    return out


def invariant_factors(diagonal: Iterable[PolyV]) -> list[PolyV]:
    """Turn any nonzero diagonal into the chain d1 | d2 | ... via gcd/lcm swaps."""
    ds = sorted((d for d in diagonal if d), key=lambda p: (p.degree, p.bits))
    n = len(ds)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = ds[i], ds[j]
            if poly_divmod(b, a)[1]:
                g = poly_gcd(a, b)
                ds[i], ds[j] = g, poly_divmod(a * b, g)[0]
    return ds


def smith_normal_form(m: SparseMat[PolyV]) -> list[PolyV]:
    """Invariant factors of a matrix over F2[v].

    >>> v = PolyV.monomial
    >>> [str(d) for d in smith_normal_form(SparseMat.from_dense([[v(1), v(2)], [ZERO, v(3)]]))]
    ['v', 'v^3']
    """
    return invariant_factors(d for d, _, _ in smith_diagonal(m))


# --------------------------------------------------------------------------
# Linear algebra over F2 with int bit-vectors


class F2Span:
    """Incrementally maintained echelon basis of a subspace of F2^n.

    Vectors are ints; bit ``k`` is coordinate ``k``.  Each stored vector is
    keyed by its highest set bit.
    """

    __slots__ = ("_piv",)

    def __init__(self, vectors: Iterable[int] = ()):
        self._piv: dict[int, int] = {}
        for x in vectors:
            self.add(x)

    def reduce(self, x: int) -> int:
        """Residue of ``x`` modulo the span; zero iff ``x`` is in the span."""
        piv = self._piv
        out = 0
        while x:
            top = x.bit_length() - 1
            p = piv.get(top)
            if p is None:
                out |= 1 << top
                x ^= 1 << top
            else:
                x ^= p
        return out

    def add(self, x: int) -> bool:
        """Add ``x``; return True when it enlarged the span."""
        x = self.reduce(x)
        if not x:
            return False
        self._piv[x.bit_length() - 1] = x
        return True

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def __len__(self) -> int:
        return len(self._piv)

    def __iter__(self) -> Iterator[int]:
        return iter(self._piv.values())

    def copy(self) -> F2Span:
        s = F2Span()
        s._piv = dict(self._piv)
        return s

    def contains_span(self, other: Iterable[int]) -> bool:
        return all(x in self for x in other)


def kernel_bits(images: Sequence[int]) -> list[int]:
    """Kernel of the map sending basis vector ``k`` to ``images[k]``.

    Returns kernel vectors as bit masks over the source basis.
    """
    piv: dict[int, tuple[int, int]] = {}
    kernel = []
    for k, img in enumerate(images):
        combo = 1 << k
        while img:
            top = img.bit_length() - 1
            hit = piv.get(top)
            if hit is None:
                piv[top] = (img, combo)
                break
            img ^= hit[0]
            combo ^= hit[1]
        else:
            kernel.append(combo)
    return kernel


def _rref_bits(vectors: list[int]) -> list[int]:
    basis = F2Span(vectors)
    vecs = sorted(basis, reverse=True)
    # back-substitute so every pivot bit appears in exactly one vector
    for i, x in enumerate(vecs):
        top = x.bit_length() - 1
        for j in range(len(vecs)):
            if j != i and vecs[j] >> top & 1:
                vecs[j] ^= x
    return sorted(vecs, reverse=True)


def _rows_as_bits(m: SparseMat) -> list[int]:
    bits = [0] * m.rows
    for (r, c), x in m.entries.items():
        if int(x) % 2:
            bits[r] |= 1 << c
    return bits


def rank_f2(m: SparseMat) -> int:
    return len(F2Span(_rows_as_bits(m)))


def kernel_basis_f2(m: SparseMat) -> list[tuple[int, ...]]:
    """Reduced echelon basis of the null space of ``m`` over F2.

    >>> kernel_basis_f2(SparseMat.from_dense([[1, 1]]))
    [(1, 1)]
    """
    cols = [0] * m.cols
    for (r, c), x in m.entries.items():
        if int(x) % 2:
            cols[c] |= 1 << r
    kernel = _rref_bits(kernel_bits(cols))
    return [tuple((x >> c) & 1 for c in range(m.cols)) for x in kernel]
