"""Built-in matroids, addressable as ``corpus:<name>``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

from .errors import ParseError
from .matroid import Matroid, PointedMatroid, cone, direct_sum, isthmus, parallel_connection

AnyMatroid = Union[Matroid, PointedMatroid]

YUZVINSKY_LINES = [(1, 2, 3), (3, 4, 5, 6), (1, 6, 7), (2, 5, 8), (4, 7, 8)]
NONFANO_LINES = [(1, 2, 4), (1, 3, 5), (2, 3, 6), (1, 6, 7), (2, 5, 7), (3, 4, 7)]
K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    matroid: AnyMatroid
    provenance: str

    @property
    def pointed(self) -> bool:
        return isinstance(self.matroid, PointedMatroid)

    @property
    def plain(self) -> Matroid:
        return self.matroid.matroid if self.pointed else self.matroid


def _one_based(lines):
    return [[i - 1 for i in x] for x in lines]


def yuzvinsky8() -> Matroid:
    return Matroid.from_lines(8, _one_based(YUZVINSKY_LINES))


def nonfano() -> Matroid:
    return Matroid.from_lines(7, _one_based(NONFANO_LINES))


def k4() -> Matroid:
    return Matroid.graphic(K4_EDGES)


def iso_pair(g0: Matroid, g1: Matroid, b0: int = 0, b1: int = 0) -> tuple[Matroid, Matroid]:
    """G0 + G1 and {0} + P(G0, G1), the two sides of the isomorphism construction."""
    g = direct_sum(g0, g1)
    par = parallel_connection(PointedMatroid(g0, b0), PointedMatroid(g1, b1)).matroid
    return g, direct_sum(isthmus(), par)


def _pair(a: str, b: str, side: int) -> Callable[[], Matroid]:
    return lambda: iso_pair(get(a).plain, get(b).plain)[side]


_BUILDERS: dict[str, tuple[Callable[[], AnyMatroid], str]] = {
    "u23": (lambda: Matroid.uniform(2, 3), "uniform matroid, three points on a line"),
    "u24": (lambda: Matroid.uniform(2, 4), "uniform matroid, four points on a line"),
    "u25": (lambda: Matroid.uniform(2, 5), "uniform matroid, five points on a line"),
    "u34": (lambda: Matroid.uniform(3, 4), "uniform matroid, four generic points in the plane"),
    "boolean1": (lambda: Matroid.boolean(1), "free matroid on one point"),
    "boolean2": (lambda: Matroid.boolean(2), "free matroid on two points"),
    "boolean3": (lambda: Matroid.boolean(3), "free matroid on three points"),
    "boolean4": (lambda: Matroid.boolean(4), "free matroid on four points"),
    "k4": (k4, "cycle matroid of K4 from the incidence matrix, braid arrangement A3"),
    "nonfano": (nonfano, "non-Fano plane: seven points, six three-point lines"),
    "yuzvinsky8": (yuzvinsky8, "8 points in rank 3, lines 123 3456 167 258 478 (1-based)"),
    "cone_u23": (lambda: cone(Matroid.uniform(2, 3)), "cone over U23, base point the added isthmus"),
    "cone_k4": (lambda: cone(k4()), "cone over M(K4), base point the added isthmus"),
    "d_u23": (lambda: PointedMatroid(Matroid.uniform(2, 3), 0), "U23 pointed at 0 (decone)"),
    "d_u34": (lambda: PointedMatroid(Matroid.uniform(3, 4), 0), "U34 pointed at 0 (decone)"),
    "d_k4": (lambda: PointedMatroid(k4(), 0), "M(K4) pointed at edge 01 (decone)"),
    "d_yuzvinsky8": (lambda: PointedMatroid(yuzvinsky8(), 0), "Yuzvinsky matroid pointed at its first point"),
    "sum_u23_u23": (_pair("u23", "u23", 0), "U23 + U23"),
    "par_u23_u23": (_pair("u23", "u23", 1), "{0} + P(U23, U23)"),
    "sum_u23_u24": (_pair("u23", "u24", 0), "U23 + U24"),
    "par_u23_u24": (_pair("u23", "u24", 1), "{0} + P(U23, U24)"),
    "sum_u23_u34": (_pair("u23", "u34", 0), "U23 + U34"),
    "par_u23_u34": (_pair("u23", "u34", 1), "{0} + P(U23, U34)"),
}

ISO_SEEDS = [("u23", "u23"), ("u23", "u24"), ("u23", "u34"), ("k4", "u23")]


def names() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> CorpusEntry:
    if name not in _BUILDERS:
        raise ParseError(f"unknown corpus entry {name!r}; known: {', '.join(_BUILDERS)}")
    build, note = _BUILDERS[name]
    return CorpusEntry(name, build(), note)


def entries() -> list[CorpusEntry]:
    return [get(x) for x in _BUILDERS]


def plain_matroids() -> list[CorpusEntry]:
    """Entries that are plain matroids (pointed entries are covered by the affine checks)."""
    return [e for e in entries() if not e.pointed]


def pointed_matroids() -> list[CorpusEntry]:
    return [e for e in entries() if e.pointed]
