"""Orlik-Solomon ideals, their k-adic truncations, and derived invariants.

The algebra A = E/I is never built as a ring object.  Each graded piece of
the ideal is a canonical :class:`~osalgebra.linalg.EchelonBasis` over
subset bitmasks, and reducing an exterior element modulo it gives its
normal form, supported on the nbc monomials of the natural order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import FieldMismatch, LevelOutOfRange, ValidationError
from .exterior import (
    GradedSubspace,
    boundary_terms,
    elements,
    mask,
    popcount,
    subsets_of_size,
    wedge_dicts,
    wedge_sign,
)
from .fields import QQ, ScalarField
from .linalg import EchelonBasis
from .matroid import Matroid, PointedMatroid, _as_mask


def _generators(m: Matroid, p: int, max_circuit: int):
    """Yield e_T ^ d(e_C) for circuits |C| <= max_circuit landing in degree p."""
    n = m.n
    for c in m.circuits:
        size = popcount(c)
        if size > max_circuit or size - 1 > p:
            continue
        t = p + 1 - size
        terms = list(boundary_terms(c))
        for tm in subsets_of_size(n, t):
            if popcount(tm & c) > 1:
                continue
            vec: dict[int, int] = {}
            for sg, rest in terms:
                ws = wedge_sign(tm, rest)
                if ws:
                    k = tm | rest
                    vec[k] = vec.get(k, 0) + sg * ws
            vec = {k: v for k, v in vec.items() if v}
            if vec:
                yield vec


def _ideal_part(m: Matroid, field: ScalarField, p: int, max_circuit: int) -> EchelonBasis:
    basis = EchelonBasis(field)
    full = comb(m.n, p)
    for vec in _generators(m, p, max_circuit):
        basis.add(vec)
        if basis.dim == full:
            break
    return basis


@dataclass
class OSIdeal:
    matroid: Matroid
    field: ScalarField
    k: int
    graded: GradedSubspace

    @property
    def is_full(self) -> bool:
        return self.k >= self.matroid.rank()

    @property
    def dims(self) -> list[int]:
        return self.graded.dims

    def __getitem__(self, p: int) -> EchelonBasis:
        return self.graded[p]

    def quotient_dims(self) -> list[int]:
        return [comb(self.matroid.n, p) - d for p, d in enumerate(self.dims)]


_cache_lock = threading.Lock()


@lru_cache(maxsize=256)
def _cached_ideal(m: Matroid, p_char: int, level: int) -> OSIdeal:
    field = QQ if p_char == 0 else _prime_field(p_char)
    g = GradedSubspace(m.n, field)
    for p in range(m.n + 1):
        g.parts[p] = _ideal_part(m, field, p, level + 1)
    return OSIdeal(m, field, level, g)


def _prime_field(p: int):
    from .fields import GF

    return GF(p)


def _effective_level(m: Matroid, k: int | None) -> int:
    r = m.rank()
    if k is None:
        return max(r, 2)
    if k < 2 or k > max(r, 2):
        raise LevelOutOfRange(f"level {k} outside 2..{max(r, 2)}")
    return k


def os_ideal(m: Matroid, field: ScalarField = QQ, k: int | None = None) -> OSIdeal:
    """The k-adic OS ideal; ``k=None`` (or k = rank) is the full ideal."""
    level = _effective_level(m, k)
    with _cache_lock:
        return _cached_ideal(m, field.p, level)


def os_dims(m: Matroid, field: ScalarField = QQ) -> list[int]:
    """Graded dimensions of A(m) up to the rank, checked against the Whitney numbers."""
    q = os_ideal(m, field).quotient_dims()
    r = m.rank()
    w = m.whitney_vector()
    if q[: r + 1] != w or any(q[r + 1 :]):
        raise AssertionError(f"dim A^p = {q} disagrees with Whitney numbers {w}")
    return q[: r + 1]


def kadic_dims(m: Matroid, k: int, field: ScalarField = QQ) -> list[int]:
    """dim A_k^p for p = 0..n (trailing degrees may be nonzero for k < rank)."""
    return os_ideal(m, field, k).quotient_dims()


def is_quadratic(m: Matroid, field: ScalarField = QQ) -> bool:
    full = os_ideal(m, field).quotient_dims()
    return kadic_dims(m, 2, field) == full


def boundary_in_ideal(m: Matroid, s, k: int | None = None, field: ScalarField = QQ) -> bool:
    sm = _as_mask(m.n, s)
    if not sm:
        raise ValidationError("boundary of the empty monomial")
    vec: dict[int, int] = {}
    for sg, t in boundary_terms(sm):
        vec[t] = vec.get(t, 0) + sg
    return os_ideal(m, field, k)[popcount(sm) - 1].contains(vec)


# -- nbc and nbb -------------------------------------------------------------------


def _positions(n: int, order: Sequence[int] | None) -> list[int]:
    if order is None:
        return list(range(n))
    if sorted(order) != list(range(n)):
        raise ValidationError(f"order {list(order)} is not a permutation of 0..{n - 1}")
    pos = [0] * n
    for rank_, e in enumerate(order):
        pos[e] = rank_
    return pos


def nbc_sets(m: Matroid, order: Sequence[int] | None = None) -> list[list[frozenset[int]]]:
    """nbc sets grouped by size; ``order`` lists the elements smallest first."""
    pos = _positions(m.n, order)
    broken = []
    for c in m.circuits:
        low = min(elements(c), key=lambda e: pos[e])
        broken.append(c & ~(1 << low))
    seq = sorted(range(m.n), key=lambda e: pos[e])
    out: list[list[frozenset[int]]] = [[] for _ in range(m.rank() + 1)]

    def grow(cur: int, start: int, size: int) -> None:
        out[size].append(frozenset(elements(cur)))
        for j in range(start, m.n):
            nxt = cur | (1 << seq[j])
            if any(b & ~nxt == 0 for b in broken):
                continue
            grow(nxt, j + 1, size + 1)

    grow(0, 0, 0)
    return [sorted(layer, key=lambda s: sorted(s)) for layer in out]


def nbc_counts(m: Matroid, order: Sequence[int] | None = None) -> list[int]:
    return [len(layer) for layer in nbc_sets(m, order)]


def nbb_sets(m: Matroid, order: Sequence[int] | None = None) -> list[list[frozenset[int]]]:
    """Sets whose every suffix (in the order) is the minimum of its line closure."""
    pos = _positions(m.n, order)
    seq = sorted(range(m.n), key=lambda e: pos[e])
    found: dict[int, list[frozenset[int]]] = {0: [frozenset()]}

    def ok(t: int, low: int) -> bool:
        lc = m._line_closure(t)
        return all(pos[e] >= pos[low] for e in elements(lc))

    def grow(cur: int, low_index: int, size: int) -> None:
        found.setdefault(size, []).append(frozenset(elements(cur)))
        for j in range(low_index):
            x = seq[j]
            nxt = cur | (1 << x)
            if ok(nxt, x):
                grow(nxt, j, size + 1)

    for j, x in enumerate(seq):
        if ok(1 << x, x):
            grow(1 << x, j, 1)
    top = max(found)
    return [sorted(found.get(p, []), key=lambda s: sorted(s)) for p in range(top + 1)]


def nbb_counts(m: Matroid, order: Sequence[int] | None = None) -> list[int]:
    return [len(layer) for layer in nbb_sets(m, order)]


# -- phi_3 -------------------------------------------------------------------------


def phi3_nullity(m: Matroid, field: ScalarField = QQ) -> int:
    """Nullity of E^1 (x) I^2 -> E^3, from the basis of I^2 directly."""
    n = m.n
    if n < 3:
        return 0
    i2 = os_ideal(m, field)[2].basis()
    image = EchelonBasis(field)
    p = field.p
    for i in range(n):
        ei = {1 << i: 1}
        for row in i2:
            image.add(wedge_dicts(ei, row, p))
    return n * len(i2) - image.dim


def phi3_formula(m: Matroid, field: ScalarField = QQ) -> int:
    """2 C(n+1,3) - n w_2 + dim A_2^3 with n the number of points."""
    n = m.n
    w2 = m.whitney(2) if m.rank() >= 2 else 0
    a23 = kadic_dims(m, 2, field)[3] if n >= 3 else 0
    return 2 * comb(n + 1, 3) - n * w2 + a23


def phi3(m: Matroid, field: ScalarField = QQ) -> int:
    direct = phi3_nullity(m, field)
    closed = phi3_formula(m, field)
    if direct != closed:
        raise AssertionError(f"phi3 nullity {direct} != closed formula {closed}")
    return direct


# -- the quotient algebra ------------------------------------------------------------


class OSAlgebra:
    """Normal forms and multiplication in A(m) with nbc-monomial coordinates."""

    def __init__(self, m: Matroid, field: ScalarField = QQ):
        self.matroid = m
        self.field = field
        self.ideal = os_ideal(m, field)
        self._basis: dict[int, list[int]] = {}

    def basis(self, p: int) -> list[int]:
        """Standard monomials of degree p (bitmasks, colex order)."""
        if p not in self._basis:
            if not 0 <= p <= self.matroid.n:
                self._basis[p] = []
            else:
                piv = self.ideal[p].rows
                self._basis[p] = [s for s in subsets_of_size(self.matroid.n, p) if s not in piv]
        return self._basis[p]

    def dims(self) -> list[int]:
        return [len(self.basis(p)) for p in range(self.matroid.rank() + 1)]

    def normal_form(self, vec: dict, p: int) -> dict:
        return self.ideal[p].reduce(vec)

    def multiply(self, x: dict, y: dict, p: int, q: int) -> dict:
        if p + q > self.matroid.n:
            return {}
        return self.normal_form(wedge_dicts(x, y, self.field.p), p + q)

    def left_mult_columns(self, i: int, p: int) -> list[dict]:
        """Columns of a_i: A^p -> A^{p+1}, one per standard monomial of degree p."""
        ei = {1 << i: 1}
        return [self.multiply(ei, {s: 1}, 1, p) for s in self.basis(p)]

    def left_mult_matrices(self, p: int):
        """Integer arrays M_i with shape (dim A^{p+1}, dim A^p), one per point."""
        import numpy as np

        rows = {s: r for r, s in enumerate(self.basis(p + 1))}
        out = np.zeros((self.matroid.n, len(rows), len(self.basis(p))), dtype=np.int64)
        for i in range(self.matroid.n):
            for j, col in enumerate(self.left_mult_columns(i, p)):
                for s, c in col.items():
                    out[i, rows[s], j] = int(c) if self.field.p else _int_or_fail(c)
        return out


def _int_or_fail(c) -> int:
    if c.denominator != 1:
        raise ValidationError(f"non-integral structure constant {c}")
    return int(c)


# -- affine OS algebras ----------------------------------------------------------------


@dataclass
class AffineOSAlgebra:
    pointed: PointedMatroid
    field: ScalarField
    parts: list[EchelonBasis]  # degree p subspace of A^p in nbc coordinates

    @property
    def dims(self) -> list[int]:
        return [b.dim for b in self.parts]

    def same_subspace(self, other: "AffineOSAlgebra") -> bool:
        if self.pointed.matroid != other.pointed.matroid:
            return False
        return self.field == other.field and self.parts == other.parts


def affine_os(dm: PointedMatroid, field: ScalarField = QQ) -> AffineOSAlgebra:
    """Subalgebra of A generated by a_i - a_0 (0 the base point)."""
    m = dm.matroid
    alg = OSAlgebra(m, field)
    b0 = 1 << dm.basepoint
    gens = [{1 << i: 1, b0: -1} for i in range(m.n) if i != dm.basepoint]
    unit = EchelonBasis(field, [{0: 1}])
    parts = [unit]
    for p in range(1, m.rank() + 1):
        cur = EchelonBasis(field)
        for v in parts[-1].basis():
            for g in gens:
                cur.add(alg.multiply(g, v, 1, p - 1))
        parts.append(cur)
    while len(parts) > 1 and parts[-1].dim == 0:
        parts.pop()
    aff = AffineOSAlgebra(dm, field, parts)
    full = os_dims(m, field)
    fact = [0] * (len(aff.dims) + 1)
    for p, d in enumerate(aff.dims):
        fact[p] += d
        fact[p + 1] += d
    while len(fact) > 1 and fact[-1] == 0:
        fact.pop()
    if fact != full:
        raise AssertionError(f"(1+t) * {aff.dims} != {full}")
    return aff


def convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def tensor_dims(a: AffineOSAlgebra, b: AffineOSAlgebra) -> list[int]:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    return convolve(a.dims, b.dims)


def base_point_independent(m: Matroid, field: ScalarField = QQ) -> bool:
    algs = [affine_os(PointedMatroid(m, i), field) for i in range(m.n)]
    return all(algs[0].parts == a.parts for a in algs[1:])
