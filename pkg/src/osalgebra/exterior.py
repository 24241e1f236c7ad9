"""The exterior algebra on n generators with exact coefficients.

A monomial e_S is identified with the bitmask of S (bit i set iff i in S),
and always means the product taken in increasing index order.  Within one
degree the numeric order of bitmasks is the colexicographic order of subsets,
so :func:`colex_index` is a dense re-indexing of the same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import DegreeOverflow, DegreeZero, FieldMismatch, MixedAmbient
from .fields import QQ, ScalarField
from .linalg import EchelonBasis, intersection, subspace_sum

MAX_N = 20


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask(elements: Iterable[int]) -> int:
    m = 0
    for i in elements:
        m |= 1 << i
    return m


def elements(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def subsets_of_size(n: int, p: int) -> tuple[int, ...]:
    """All p-subsets of range(n) as bitmasks, in colex order."""
    return tuple(sorted(mask(c) for c in combinations(range(n), p)))


def colex_index(m: int) -> int:
    idx = 0
    for j, s in enumerate(elements(m), start=1):
        idx += comb(s, j)
    return idx


def colex_unrank(index: int, p: int) -> int:
    """Inverse of :func:`colex_index` for p-subsets."""
    out = 0
    for j in range(p, 0, -1):
        s = j - 1
        while comb(s + 1, j) <= index:
            s += 1
        index -= comb(s, j)
        out |= 1 << s
    return out


def wedge_sign(s: int, t: int) -> int:
    """Sign of e_S ^ e_T relative to e_{S u T}; 0 if S and T meet."""
    if s & t:
        return 0
    inversions = 0
    for j in elements(t):
        inversions += popcount(s >> (j + 1))
    return -1 if inversions & 1 else 1


def boundary_terms(s: int) -> Iterator[tuple[int, int]]:
    """Yield (sign, S minus i) for the terms of the boundary of e_S."""
    k = 0
    for i in elements(s):
        yield (1 if k % 2 == 0 else -1), s & ~(1 << i)
        k += 1


@dataclass(frozen=True)
class ExteriorElement:
    """Homogeneous element of degree ``degree`` in the exterior algebra on n."""

    n: int
    degree: int
    coeffs: Mapping[int, object]
    field: ScalarField = QQ

    def __post_init__(self):
        if not 0 <= self.degree <= self.n:
            raise DegreeOverflow(f"degree {self.degree} outside 0..{self.n}")
        f = self.field
        clean = {}
        for k, c in self.coeffs.items():
            if popcount(k) != self.degree or k >> self.n:
                raise MixedAmbient(f"monomial {elements(k)} is not a degree-{self.degree} monomial on {self.n}")
            c = f(c)
            if c:
                clean[k] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, n: int, s: Iterable[int], field: ScalarField = QQ, coeff=1) -> "ExteriorElement":
        """e_{i1} ^ ... ^ e_{ip} in the order given (sign applied)."""
        seq = list(s)
        m = 0
        sign = 1
        for i in seq:
            sg = wedge_sign(m, 1 << i)
            if sg == 0:
                return cls(n, len(seq), {}, field)
            sign *= sg
            m |= 1 << i
        return cls(n, len(seq), {m: sign * coeff}, field)

    @classmethod
    def linear(cls, n: int, values: Iterable, field: ScalarField = QQ) -> "ExteriorElement":
        """e_lambda = sum lambda_i e_i."""
        return cls(n, 1, {1 << i: c for i, c in enumerate(values)}, field)

    @classmethod
    def from_coords(cls, n: int, degree: int, coords: list, field: ScalarField = QQ) -> "ExteriorElement":
        if len(coords) != comb(n, degree):
            raise MixedAmbient(f"expected {comb(n, degree)} coordinates, got {len(coords)}")
        basis = subsets_of_size(n, degree)
        return cls(n, degree, {basis[i]: c for i, c in enumerate(coords) if c}, field)

    def coords(self) -> list:
        basis = subsets_of_size(self.n, self.degree)
        zero = self.field.zero
        return [self.coeffs.get(m, zero) for m in basis]

    def is_zero(self) -> bool:
        return not self.coeffs

    def _compatible(self, other: "ExteriorElement") -> None:
        if self.n != other.n:
            raise MixedAmbient(f"ambient {self.n} vs {other.n}")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        self._compatible(other)
        if self.degree != other.degree:
            raise MixedAmbient("sum of elements of different degree")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return ExteriorElement(self.n, self.degree, out, self.field)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement(self.n, self.degree, {k: -c for k, c in self.coeffs.items()}, self.field)

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def scale(self, c) -> "ExteriorElement":
        c = self.field(c)
        return ExteriorElement(self.n, self.degree, {k: c * v for k, v in self.coeffs.items()}, self.field)

    def __xor__(self, other: "ExteriorElement") -> "ExteriorElement":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return (self.n, self.degree, self.field) == (other.n, other.degree, other.field) and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.n, self.degree, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for m in sorted(self.coeffs):
            name = "e" + "".join(str(i) for i in elements(m)) if m else "1"
            terms.append(f"{self.coeffs[m]}*{name}")
        return " + ".join(terms)


def wedge_dicts(x: Mapping[int, object], y: Mapping[int, object], p: int = 0) -> dict:
    out: dict = {}
    for s, a in x.items():
        for t, b in y.items():
            sg = wedge_sign(s, t)
            if sg:
                k = s | t
                out[k] = out.get(k, 0) + sg * a * b
    if p:
        return {k: c % p for k, c in out.items() if c % p}
    return {k: c for k, c in out.items() if c}


def boundary_dict(x: Mapping[int, object], p: int = 0) -> dict:
    out: dict = {}
    for s, a in x.items():
        for sg, t in boundary_terms(s):
            out[t] = out.get(t, 0) + sg * a
    if p:
        return {k: c % p for k, c in out.items() if c % p}
    return {k: c for k, c in out.items() if c}


def wedge(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    x._compatible(y)
    if x.degree + y.degree > x.n:
        raise DegreeOverflow(f"degree {x.degree}+{y.degree} exceeds {x.n}")
    return ExteriorElement(x.n, x.degree + y.degree, wedge_dicts(x.coeffs, y.coeffs, x.field.p), x.field)


def boundary(x: ExteriorElement) -> ExteriorElement:
    if x.degree < 1:
        raise DegreeZero("boundary of a degree-0 element")
    return ExteriorElement(x.n, x.degree - 1, boundary_dict(x.coeffs, x.field.p), x.field)


class GradedSubspace:
    """Per-degree canonical echelon bases of subspaces of E^p, p = 0..n."""

    def __init__(self, n: int, field: ScalarField = QQ, parts: Mapping[int, EchelonBasis] | None = None):
        if n > MAX_N:
            raise MixedAmbient(f"n={n} exceeds the supported maximum {MAX_N}")
        self.n = n
        self.field = field
        self.parts: dict[int, EchelonBasis] = {p: EchelonBasis(field) for p in range(n + 1)}
        if parts:
            for p, b in parts.items():
                if b.field != field:
                    raise FieldMismatch(f"{b.field!r} vs {field!r}")
                self.parts[p] = b

    @classmethod
    def span(cls, n: int, elements_: Iterable[ExteriorElement], field: ScalarField = QQ) -> "GradedSubspace":
        g = cls(n, field)
        for x in elements_:
            g.add(x)
        return g

    def add(self, x: ExteriorElement) -> bool:
        if x.n != self.n:
            raise MixedAmbient(f"ambient {x.n} vs {self.n}")
        if x.field != self.field:
            raise FieldMismatch(f"{x.field!r} vs {self.field!r}")
        return self.parts[x.degree].add(x.coeffs)

    def __getitem__(self, p: int) -> EchelonBasis:
        return self.parts[p]

    @property
    def dims(self) -> list[int]:
        return [self.parts[p].dim for p in range(self.n + 1)]

    def contains(self, x: ExteriorElement) -> bool:
        if x.n != self.n:
            raise MixedAmbient(f"ambient {x.n} vs {self.n}")
        return self.parts[x.degree].contains(x.coeffs)

    def _check(self, other: "GradedSubspace") -> None:
        if self.n != other.n:
            raise MixedAmbient(f"ambient {self.n} vs {other.n}")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "GradedSubspace") -> "GradedSubspace":
        self._check(other)
        return GradedSubspace(self.n, self.field, {p: subspace_sum(self.parts[p], other.parts[p]) for p in self.parts})

    def __and__(self, other: "GradedSubspace") -> "GradedSubspace":
        self._check(other)
        return GradedSubspace(self.n, self.field, {p: intersection(self.parts[p], other.parts[p]) for p in self.parts})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.n == other.n and self.field == other.field and all(
            self.parts[p] == other.parts[p] for p in self.parts
        )

    def basis(self, p: int) -> list[ExteriorElement]:
        return [ExteriorElement(self.n, p, v, self.field) for v in self.parts[p].basis()]

    def __repr__(self) -> str:
        return f"GradedSubspace(n={self.n}, dims={self.dims}, field={self.field!r})"
