"""Simple matroids stored by their circuits.

Subsets are bitmasks internally.  Public methods accept any iterable of
element labels (0-based) or an ``int`` bitmask, and return frozensets.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    CircuitAxiomViolation,
    ElementOutOfRange,
    EmptyMatrix,
    NotSimple,
    RankOutOfRange,
    RankTooLow,
    ValidationError,
)
from .exterior import MAX_N, elements, mask, popcount
from .fields import QQ
from .linalg import EchelonBasis

SubsetLike = "Iterable[int] | int"


def _as_mask(n: int, s) -> int:
    if isinstance(s, int):
        m = s
        if m < 0 or m >> n:
            raise ElementOutOfRange(f"bitmask {m} has elements outside 0..{n - 1}")
        return m
    m = 0
    for i in s:
        if not isinstance(i, int) or not 0 <= i < n:
            raise ElementOutOfRange(f"element {i!r} outside 0..{n - 1}")
        m |= 1 << i
    return m


def _minimal(sets: Iterable[int]) -> list[int]:
    out: list[int] = []
    for s in sorted(set(sets), key=lambda x: (popcount(x), x)):
        if not any(c & ~s == 0 for c in out):
            out.append(s)
    return out


@dataclass(frozen=True)
class FlatLattice:
    flats: tuple[tuple[int, ...], ...]  # bitmasks grouped by rank
    mobius: dict[int, int]

    def whitney(self) -> list[int]:
        return [sum((-1) ** p * self.mobius[x] for x in layer) for p, layer in enumerate(self.flats)]


class Matroid:
    """A simple matroid on ``range(n)`` given by its circuits."""

    def __init__(self, n: int, circuits: Iterable[int], *, rank: int | None = None, validate: bool = True):
        if n < 0:
            raise ValidationError("negative ground-set size")
        if n > MAX_N:
            raise ValidationError(f"ground set of size {n} exceeds the limit {MAX_N}")
        self.n = n
        cs = list(circuits)
        for c in cs:
            if c <= 0 or c >> n:
                raise ElementOutOfRange(f"circuit {elements(c)} not a nonempty subset of 0..{n - 1}")
        self.circuits: tuple[int, ...] = tuple(_minimal(cs))
        self._rank_cache: dict[int, int] = {}
        self._lock = threading.Lock()
        self._lattice: FlatLattice | None = None
        self._pair_lines: dict[tuple[int, int], int] | None = None
        for c in self.circuits:
            if popcount(c) <= 2:
                raise NotSimple(f"circuit {sorted(elements(c))} has size {popcount(c)}")
        if validate:
            self._check_elimination()
        if rank is not None and self.rank() != rank:
            raise ValidationError(f"declared rank {rank} but circuits give rank {self.rank()}")

    # -- construction helpers -------------------------------------------------

    def _check_elimination(self) -> None:
        cs = self.circuits
        for a, b in combinations(cs, 2):
            common = a & b
            if not common:
                continue
            union = a | b
            for e in elements(common):
                rest = union & ~(1 << e)
                if not any(c & ~rest == 0 for c in cs):
                    raise CircuitAxiomViolation(
                        f"no circuit inside {sorted(elements(rest))} (eliminating {e} from "
                        f"{sorted(elements(a))}, {sorted(elements(b))})"
                    )

    @classmethod
    def from_circuits(cls, n: int, circuits: Iterable[Iterable[int]], rank: int | None = None) -> "Matroid":
        return cls(n, [_as_mask(n, c) for c in circuits], rank=rank)

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[Iterable[int]]) -> "Matroid":
        bs = {_as_mask(n, b) for b in bases}
        if not bs:
            raise ValidationError("no bases given")
        sizes = {popcount(b) for b in bs}
        if len(sizes) != 1:
            raise ValidationError("bases of different sizes")
        r = sizes.pop()
        circuits = []
        for k in range(1, r + 2):
            for s in map(mask, combinations(range(n), k)):
                if any(c & ~s == 0 for c in circuits):
                    continue
                if not any(s & ~b == 0 for b in bs):
                    circuits.append(s)
        m = cls(n, circuits)
        if {b for b in map(mask, combinations(range(n), r)) if m.is_independent(b)} != bs:
            raise ValidationError("the given sets do not form the bases of a matroid")
        return m

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "Matroid":
        """Column matroid of a matrix with exact rational entries."""
        if not rows or not rows[0]:
            raise EmptyMatrix("matrix has no entries")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValidationError("ragged matrix")
        cols = [{i: QQ(r[j]) for i, r in enumerate(rows) if QQ(r[j])} for j in range(width)]
        n = width

        def col_rank(s: int) -> int:
            return EchelonBasis(QQ, (cols[j] for j in elements(s))).dim

        full = col_rank((1 << n) - 1)
        circuits: list[int] = []
        for k in range(1, full + 2):
            for s in map(mask, combinations(range(n), k)):
                if any(c & ~s == 0 for c in circuits):
                    continue
                if col_rank(s) < k:
                    circuits.append(s)
        small = [sorted(elements(c)) for c in circuits if popcount(c) <= 2]
        if small:
            raise NotSimple(f"matrix has zero or parallel columns: {small}")
        return cls(n, circuits, rank=full)

    @classmethod
    def from_lines(cls, n: int, lines: Iterable[Iterable[int]]) -> "Matroid":
        """Rank-3 matroid whose nontrivial lines (3 or more points) are given."""
        ls = [_as_mask(n, l) for l in lines]
        for l in ls:
            if popcount(l) < 3:
                raise ValidationError(f"line {sorted(elements(l))} has fewer than 3 points")
        for a, b in combinations(ls, 2):
            if popcount(a & b) > 1:
                raise ValidationError(f"lines {sorted(elements(a))} and {sorted(elements(b))} share two points")
        circuits = [t for t in map(mask, combinations(range(n), 3)) if any(t & ~l == 0 for l in ls)]
        for q in map(mask, combinations(range(n), 4)):
            if not any(popcount(q & l) >= 3 for l in ls):
                circuits.append(q)
        return cls(n, circuits)

    @classmethod
    def uniform(cls, r: int, n: int) -> "Matroid":
        return cls(n, list(map(mask, combinations(range(n), r + 1))) if r < n else [])

    @classmethod
    def boolean(cls, n: int) -> "Matroid":
        return cls(n, [])

    @classmethod
    def graphic(cls, edges: Sequence[tuple[int, int]]) -> "Matroid":
        """Cycle matroid of a simple graph, via its signed incidence matrix."""
        verts = sorted({v for e in edges for v in e})
        idx = {v: i for i, v in enumerate(verts)}
        rows = [[0] * len(edges) for _ in verts]
        for j, (u, v) in enumerate(edges):
            rows[idx[u]][j] = 1
            rows[idx[v]][j] = -1
        return cls.from_matrix(rows)

    # -- basic structure ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.circuits == other.circuits

    def __hash__(self) -> int:
        return hash((self.n, self.circuits))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, rank={self.rank()}, circuits={len(self.circuits)})"

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    def circuit_sets(self) -> list[tuple[int, ...]]:
        return [elements(c) for c in self.circuits]

    def is_independent(self, s) -> bool:
        m = _as_mask(self.n, s)
        return not any(c & ~m == 0 for c in self.circuits)

    def _rank(self, m: int) -> int:
        r = self._rank_cache.get(m)
        if r is not None:
            return r
        indep = 0
        count = 0
        cs = self.circuits
        for e in elements(m):
            t = indep | (1 << e)
            if not any(c & ~t == 0 for c in cs):
                indep = t
                count += 1
        with self._lock:
            self._rank_cache[m] = count
        return count

    def rank(self, s=None) -> int:
        if s is None:
            return self._rank(self.ground)
        return self._rank(_as_mask(self.n, s))

    def _closure(self, m: int) -> int:
        r = self._rank(m)
        out = m
        for e in range(self.n):
            if not m >> e & 1 and self._rank(m | (1 << e)) == r:
                out |= 1 << e
        return out

    def closure(self, s) -> frozenset[int]:
        return frozenset(elements(self._closure(_as_mask(self.n, s))))

    def is_flat(self, s) -> bool:
        m = _as_mask(self.n, s)
        return self._closure(m) == m

    def lattice(self) -> FlatLattice:
        if self._lattice is None:
            r = self.rank()
            layers: list[list[int]] = [[self._closure(0)]]
            for _ in range(r):
                nxt = set()
                for f in layers[-1]:
                    for e in range(self.n):
                        if not f >> e & 1:
                            nxt.add(self._closure(f | (1 << e)))
                layers.append(sorted(nxt))
            mob: dict[int, int] = {}
            seen: list[int] = []
            for layer in layers:
                for x in layer:
                    if not seen:
                        mob[x] = 1
                    else:
                        mob[x] = -sum(mob[y] for y in seen if y & ~x == 0)
                for x in layer:
                    seen.append(x)
            lat = FlatLattice(tuple(tuple(l) for l in layers), mob)
            for p, layer in enumerate(lat.flats):
                for x in layer:
                    if (-1) ** p * mob[x] <= 0:
                        raise AssertionError(f"Mobius sign check failed at flat {elements(x)}")
            self._lattice = lat
        return self._lattice

    def flats(self, p: int) -> list[frozenset[int]]:
        if not 0 <= p <= self.rank():
            raise RankOutOfRange(f"rank {p} outside 0..{self.rank()}")
        return [frozenset(elements(x)) for x in self.lattice().flats[p]]

    def lines(self) -> list[frozenset[int]]:
        return self.flats(2) if self.rank() >= 2 else []

    def line_masks(self) -> list[int]:
        return list(self.lattice().flats[2]) if self.rank() >= 2 else []

    def mobius(self, s) -> int:
        m = _as_mask(self.n, s)
        lat = self.lattice()
        if m not in lat.mobius:
            raise ValidationError(f"{sorted(elements(m))} is not a flat")
        return lat.mobius[m]

    def whitney(self, p: int) -> int:
        if not 0 <= p <= self.rank():
            raise RankOutOfRange(f"rank {p} outside 0..{self.rank()}")
        return self.lattice().whitney()[p]

    def whitney_vector(self) -> list[int]:
        return self.lattice().whitney()

    def characteristic_polynomial(self) -> list[int]:
        """Coefficients c_k of t^k in sum_X mu(0,X) t^(r - rk X), low degree first."""
        r = self.rank()
        lat = self.lattice()
        coeffs = [0] * (r + 1)
        for p, layer in enumerate(lat.flats):
            coeffs[r - p] += sum(lat.mobius[x] for x in layer)
        return coeffs

    def line_sizes(self) -> list[int]:
        return sorted(popcount(x) for x in self.line_masks())

    def flat_counts(self) -> list[int]:
        return [len(layer) for layer in self.lattice().flats]

    # -- lines and line closure -----------------------------------------------------

    def _line_of_pair(self) -> dict[tuple[int, int], int]:
        if self._pair_lines is None:
            pl = {}
            for i, j in combinations(range(self.n), 2):
                pl[(i, j)] = self._closure((1 << i) | (1 << j))
            self._pair_lines = pl
        return self._pair_lines

    def _line_closure(self, m: int) -> int:
        pl = self._line_of_pair()
        cur = m
        while True:
            nxt = cur
            els = elements(cur)
            for a, b in combinations(els, 2):
                nxt |= pl[(a, b)]
            if nxt == cur:
                return cur
            cur = nxt

    def line_closure(self, s) -> frozenset[int]:
        return frozenset(elements(self._line_closure(_as_mask(self.n, s))))

    def line_closed_sets(self) -> list[int]:
        """All fixed points of the line closure, found by closing upward from the empty set."""
        start = self._line_closure(0)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for e in range(self.n):
                if not x >> e & 1:
                    y = self._line_closure(x | (1 << e))
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return sorted(seen)

    def is_line_closed(self) -> bool:
        return all(self._closure(x) == x for x in self.line_closed_sets())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "labeling": "0-based",
            "rank": self.rank(),
            "circuits": [list(elements(c)) for c in self.circuits],
        }

    def relabel(self, perm: Sequence[int]) -> "Matroid":
        """Image under the bijection i -> perm[i]."""
        if sorted(perm) != list(range(self.n)):
            raise ValidationError("relabeling is not a permutation")
        return Matroid(self.n, [mask(perm[i] for i in elements(c)) for c in self.circuits], validate=False)


@dataclass(frozen=True)
class PointedMatroid:
    matroid: Matroid
    basepoint: int

    def __post_init__(self):
        if not 0 <= self.basepoint < self.matroid.n:
            raise ElementOutOfRange(f"base point {self.basepoint} outside 0..{self.matroid.n - 1}")

    @property
    def n(self) -> int:
        return self.matroid.n

    def with_basepoint(self, i: int) -> "PointedMatroid":
        return PointedMatroid(self.matroid, i)


def isthmus() -> Matroid:
    return Matroid(1, [])


def empty_matroid() -> Matroid:
    return Matroid(0, [])


def direct_sum(a: Matroid, b: Matroid) -> Matroid:
    shifted = [c << a.n for c in b.circuits]
    return Matroid(a.n + b.n, list(a.circuits) + shifted, validate=False)


def cone(m: Matroid) -> PointedMatroid:
    """{0} + m with the isthmus 0 as base point."""
    return PointedMatroid(direct_sum(isthmus(), m), 0)


def parallel_connection(a: PointedMatroid, b: PointedMatroid) -> PointedMatroid:
    """Glue ``b`` onto ``a`` along the base points.

    ``a`` keeps its labels; the non-base elements of ``b`` follow in order.
    The glued base point is the base point of ``a``.
    """
    label = {}
    nxt = a.n
    for i in range(b.n):
        if i == b.basepoint:
            label[i] = a.basepoint
        else:
            label[i] = nxt
            nxt += 1
    n = nxt
    pa, pb = 1 << a.basepoint, 1 << b.basepoint
    cb = [mask(label[i] for i in elements(c)) for c in b.matroid.circuits]
    circuits = list(a.matroid.circuits) + cb
    through_a = [c & ~pa for c in a.matroid.circuits if c & pa]
    through_b = [mask(label[i] for i in elements(c & ~pb)) for c in b.matroid.circuits if c & pb]
    circuits += [x | y for x in through_a for y in through_b]
    m = Matroid(n, circuits)
    expected = a.matroid.rank() + b.matroid.rank() - 1
    if b.n > 0 and a.n > 0 and m.rank() != expected:
        raise AssertionError(f"parallel connection rank {m.rank()} != {expected}")
    return PointedMatroid(m, a.basepoint)


def truncate(m: Matroid) -> Matroid:
    """Corank-one truncation: rank capped at rank(m) - 1."""
    r = m.rank()
    if r < 2:
        raise RankTooLow(f"cannot truncate a matroid of rank {r}")
    if r == 2 and m.n >= 2:
        raise NotSimple(f"truncating rank 2 on {m.n} points gives parallel elements")
    cap = r - 1
    circuits: list[int] = []
    for k in range(1, r + 1):
        for s in map(mask, combinations(range(m.n), k)):
            if any(c & ~s == 0 for c in circuits):
                continue
            if min(m._rank(s), cap) < k:
                circuits.append(s)
    return Matroid(m.n, circuits)


def tutte_witness(a: Matroid, b: Matroid) -> dict:
    """Combinatorial data that differs between non-isomorphic matroids."""
    return {
        "line_sizes_differ": Counter(a.line_sizes()) != Counter(b.line_sizes()),
        "flat_counts_differ": a.flat_counts() != b.flat_counts(),
        "line_sizes": [a.line_sizes(), b.line_sizes()],
        "flat_counts": [a.flat_counts(), b.flat_counts()],
    }


def parse_rational(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValidationError(f"not an exact rational: {x!r}")
