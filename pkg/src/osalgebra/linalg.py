"""Sparse exact row reduction with a canonical output.

Vectors are ``dict[int, scalar]`` mapping a column key to a nonzero
coefficient.  An :class:`EchelonBasis` keeps its rows in fully reduced
echelon form where the pivot of each row is its *largest* column key and
the pivot coefficient is one.  The pivot entry itself is not stored, so a row
only holds entries in non-pivot columns.  Two bases of the same subspace
therefore have identical ``rows`` dictionaries, which is what makes equality
tests cheap.

Choosing the largest key as pivot matters for the Orlik-Solomon code: with
subsets encoded as bitmasks the non-pivot columns of the ideal are exactly
the nbc monomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DimensionMismatch, FieldMismatch
from .fields import ScalarField

Vector = dict


class EchelonBasis:
    __slots__ = ("field", "rows")

    def __init__(self, field: ScalarField, vectors: Iterable[Mapping] = ()):
        self.field = field
        self.rows: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    def copy(self) -> "EchelonBasis":
        new = EchelonBasis(self.field)
        new.rows = {k: dict(r) for k, r in self.rows.items()}
        return new

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        """Return the remainder of ``vec`` modulo the span (no pivot columns)."""
        rows = self.rows
        p = self.field.p
        if p:
            v = {k: c % p for k, c in vec.items() if c % p}
        else:
            v = {k: Fraction(c) for k, c in vec.items() if c}
        hits = [k for k in v if k in rows]
        if not hits:
            return v
        if p:
            for piv in hits:
                c = v.pop(piv)
                for k, r in rows[piv].items():
                    x = (v.get(k, 0) - c * r) % p
                    if x:
                        v[k] = x
                    else:
                        v.pop(k, None)
        else:
            for piv in hits:
                c = v.pop(piv)
                for k, r in rows[piv].items():
                    x = v.get(k, 0) - c * r
                    if x:
                        v[k] = x
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True if the dimension grew."""
        r = self.reduce(vec)
        if not r:
            return False
        self._insert(r)
        return True

    def _insert(self, r: dict) -> None:
        p = self.field.p
        piv = max(r)
        c = r.pop(piv)
        if p:
            inv = pow(c, -1, p)
            if inv != 1:
                r = {k: x * inv % p for k, x in r.items()}
        else:
            if c != 1:
                r = {k: x / c for k, x in r.items()}
        for row in self.rows.values():
            f = row.pop(piv, None)
            if f is None:
                continue
            if p:
                for k, x in r.items():
                    y = (row.get(k, 0) - f * x) % p
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
            else:
                for k, x in r.items():
                    y = row.get(k, 0) - f * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self.rows[piv] = r

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        """Canonical basis vectors (pivot entry restored), sorted by pivot."""
        one = self.field.one
        out = []
        for piv in sorted(self.rows):
            v = dict(self.rows[piv])
            v[piv] = one
            out.append(v)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __repr__(self) -> str:
        return f"EchelonBasis(dim={self.dim}, field={self.field!r})"


def _check_fields(a: EchelonBasis, b: EchelonBasis) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def span(field: ScalarField, vectors: Iterable[Mapping]) -> EchelonBasis:
    return EchelonBasis(field, vectors)


def subspace_sum(a: EchelonBasis, b: EchelonBasis) -> EchelonBasis:
    _check_fields(a, b)
    out = a.copy()
    for v in b.basis():
        out.add(v)
    return out


def _max_key(*bases: EchelonBasis) -> int:
    m = -1
    for bs in bases:
        for piv, row in bs.rows.items():
            m = max(m, piv, *row.keys()) if row else max(m, piv)
    return m


def intersection(a: EchelonBasis, b: EchelonBasis) -> EchelonBasis:
    """Zassenhaus: reduce rows (x | x) for x in a and (y | 0) for y in b."""
    _check_fields(a, b)
    shift = _max_key(a, b) + 1
    work = EchelonBasis(a.field)
    for x in a.basis():
        row = {k + shift: c for k, c in x.items()}
        row.update(x)
        work.add(row)
    for y in b.basis():
        work.add({k + shift: c for k, c in y.items()})
    out = EchelonBasis(a.field)
    for v in work.basis():
        if max(v) < shift:
            out.add(v)
    return out


def kernel(field: ScalarField, images: list[Mapping]) -> EchelonBasis:
    """Kernel of the map sending domain basis vector ``i`` to ``images[i]``.

    The result lives in domain coordinates ``0..len(images)-1``.
    """
    ndom = len(images)
    shift = ndom
    work = EchelonBasis(field)
    one = field.one
    for i, img in enumerate(images):
        for k in img:
            if k < 0:
                raise DimensionMismatch("negative column key in image")
        row = {k + shift: c for k, c in img.items() if c}
        row[i] = one
        work.add(row)
    out = EchelonBasis(field)
    for v in work.basis():
        if max(v) < shift:
            out.add(v)
    return out


def rank_of(field: ScalarField, vectors: Iterable[Mapping]) -> int:
    return EchelonBasis(field, vectors).dim


def to_dense(vec: Mapping, length: int, field: ScalarField) -> list:
    out = [field.zero] * length
    for k, c in vec.items():
        if not 0 <= k < length:
            raise DimensionMismatch(f"key {k} outside 0..{length - 1}")
        out[k] = c
    return out
