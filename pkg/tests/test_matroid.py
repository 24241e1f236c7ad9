from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_whitney, realized_circuits
from osalgebra import corpus
from osalgebra.errors import (
    CircuitAxiomViolation,
    ElementOutOfRange,
    EmptyMatrix,
    NotSimple,
    RankOutOfRange,
    RankTooLow,
)
from osalgebra.matroid import (
    Matroid,
    PointedMatroid,
    cone,
    direct_sum,
    empty_matroid,
    isthmus,
    parallel_connection,
    truncate,
)


def subsets(n):
    for k in range(n + 1):
        yield from combinations(range(n), k)


def test_closure_axioms(corpus_entry):
    m = corpus_entry.plain
    if m.n > 8:
        pytest.skip("exhaustive over subsets")
    for s in subsets(m.n):
        c = m.closure(s)
        assert set(s) <= c
        assert m.closure(c) == c
        assert m.rank(c) == m.rank(s)
        assert m.line_closure(s) <= c


def test_whitney_against_subset_expansion(corpus_entry):
    m = corpus_entry.plain
    circuits = [frozenset(c) for c in m.circuit_sets()]
    assert m.whitney_vector() == brute_whitney(m.n, circuits)


def test_characteristic_polynomial_vanishes_at_one(corpus_entry):
    m = corpus_entry.plain
    if m.n:
        assert sum(m.characteristic_polynomial()) == 0


def test_mobius_signs_alternate(corpus_entry):
    lat = corpus_entry.plain.lattice()
    for r, level in enumerate(lat.flats):
        for x in level:
            assert (-1) ** r * lat.mobius[x] > 0


def test_direct_sum_whitney_convolution():
    names = ["u23", "u24", "u34", "boolean2", "k4"]
    for a, b in combinations(names, 2):
        ma, mb = corpus.get(a).plain, corpus.get(b).plain
        wa, wb = ma.whitney_vector(), mb.whitney_vector()
        conv = [sum(wa[i] * wb[p - i] for i in range(len(wa)) if 0 <= p - i < len(wb)) for p in range(len(wa) + len(wb) - 1)]
        assert direct_sum(ma, mb).whitney_vector() == conv


@pytest.mark.parametrize("a,b", [("u23", "u23"), ("u23", "u34"), ("k4", "k4"), ("k4", "u24"), ("boolean2", "u23")])
def test_parallel_connection_rank(a, b):
    ma, mb = corpus.get(a).plain, corpus.get(b).plain
    for pa in range(ma.n):
        p = parallel_connection(PointedMatroid(ma, pa), PointedMatroid(mb, 0))
        assert p.matroid.n == ma.n + mb.n - 1
        assert p.matroid.rank() == ma.rank() + mb.rank() - 1


def test_parallel_connection_of_two_lines():
    p = parallel_connection(PointedMatroid(Matroid.uniform(2, 3), 0), PointedMatroid(Matroid.uniform(2, 3), 0))
    m = p.matroid
    assert (m.n, m.rank()) == (5, 3)
    assert sorted(m.circuit_sets()) == [(0, 1, 2), (0, 3, 4), (1, 2, 3, 4)]
    assert parallel_connection(PointedMatroid(corpus.k4(), 0), PointedMatroid(corpus.k4(), 0)).matroid.rank() == 5


def test_parallel_connection_with_single_point_is_identity():
    b = Matroid.uniform(2, 4)
    p = parallel_connection(PointedMatroid(isthmus(), 0), PointedMatroid(b, 0))
    assert p.matroid == b


@pytest.mark.parametrize("name", ["u34", "k4", "boolean4", "yuzvinsky8", "sum_u23_u24", "nonfano"])
def test_truncation_keeps_low_flats(name):
    m = corpus.get(name).plain
    t = truncate(m)
    assert t.rank() == m.rank() - 1
    for p in range(m.rank() - 1):
        assert sorted(map(sorted, t.flats(p))) == sorted(map(sorted, m.flats(p)))


def test_truncation_examples():
    assert truncate(Matroid.boolean(3)) == Matroid.uniform(2, 3)
    assert truncate(Matroid.uniform(3, 4)) == Matroid.uniform(2, 4)
    assert truncate(corpus.k4()) == Matroid.uniform(2, 6)
    with pytest.raises(RankTooLow):
        truncate(isthmus())
    with pytest.raises(NotSimple):
        truncate(Matroid.uniform(2, 3))


def test_circuit_examples():
    assert Matroid.from_circuits(3, [[0, 1, 2]]) == Matroid.uniform(2, 3)
    assert Matroid.from_circuits(3, [[0, 1, 2]]).rank() == 2
    with pytest.raises(NotSimple):
        Matroid.from_circuits(3, [[0, 1]])
    with pytest.raises(CircuitAxiomViolation):
        Matroid.from_circuits(4, [[0, 1, 2], [1, 2, 3]])
    with pytest.raises(ElementOutOfRange):
        Matroid.from_circuits(3, [[0, 1, 5]])
    # non-minimal input is minimalized
    assert Matroid.from_circuits(3, [[0, 1, 2], [0, 1, 2]]) == Matroid.uniform(2, 3)


def test_matrix_examples():
    assert Matroid.from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == Matroid.boolean(3)
    m = Matroid.from_matrix([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
    assert m == Matroid.uniform(3, 4)
    assert sorted(m.circuit_sets()) == [(0, 1, 2, 3)]
    with pytest.raises(NotSimple):
        Matroid.from_matrix([[1, 2, 0], [1, 2, 1]])
    with pytest.raises(NotSimple):
        Matroid.from_matrix([[1, 0], [0, 0]])
    with pytest.raises(EmptyMatrix):
        Matroid.from_matrix([])


def test_k4_structure():
    k4 = corpus.k4()
    assert k4.rank() == 3
    assert sum(1 for c in k4.circuit_sets() if len(c) == 3) == 4
    assert len(k4.lines()) == 7
    assert Counter(k4.line_sizes()) == {3: 4, 2: 3}
    assert k4.rank([0, 1, 3]) == 2  # triangle 012 on edges 01, 02, 12
    # edges 01 and 23 are disjoint: their closure is themselves
    assert k4.closure([0, 5]) == {0, 5}
    assert k4.whitney_vector() == [1, 6, 11, 6]


def test_k4_matches_sympy_circuits():
    cols = [(1, -1, 0, 0), (1, 0, -1, 0), (1, 0, 0, -1), (0, 1, -1, 0), (0, 1, 0, -1), (0, 0, 1, -1)]
    assert sorted(map(sorted, realized_circuits(cols))) == sorted(map(list, corpus.k4().circuit_sets()))


def test_yuzvinsky_structure():
    y = corpus.yuzvinsky8()
    assert y.closure([0, 1]) == {0, 1, 2}
    big = sorted(sorted(x) for x in y.lines() if len(x) >= 3)
    assert big == [[0, 1, 2], [0, 5, 6], [1, 4, 7], [2, 3, 4, 5], [3, 6, 7]]
    assert y.whitney_vector() == [1, 8, 21, 14]


def test_flats_and_rank_errors():
    m = Matroid.uniform(2, 3)
    assert sorted(map(sorted, m.flats(1))) == [[0], [1], [2]]
    assert Matroid.boolean(4).whitney_vector() == [1, 4, 6, 4, 1]
    with pytest.raises(RankOutOfRange):
        m.flats(3)
    with pytest.raises(ElementOutOfRange):
        m.rank([7])


def test_direct_sum_examples():
    c = cone(Matroid.uniform(2, 3))
    assert (c.matroid.n, c.matroid.rank(), c.basepoint) == (4, 3, 0)
    s = direct_sum(Matroid.uniform(2, 3), Matroid.uniform(2, 3))
    assert (s.n, s.rank(), len(s.circuits)) == (6, 4, 2)
    assert direct_sum(corpus.k4(), empty_matroid()) == corpus.k4()


def test_line_closure():
    y = corpus.yuzvinsky8()
    assert y.line_closure([0, 1]) == {0, 1, 2}
    u34 = Matroid.uniform(3, 4)
    # no three collinear points, so {0, 1, 2} is line-closed without being a flat
    assert u34.line_closure([0, 1, 2]) == {0, 1, 2}
    assert u34.closure([0, 1, 2]) == {0, 1, 2, 3}
    assert not u34.is_line_closed()
    assert y.is_line_closed()


def test_bases_roundtrip(corpus_entry):
    m = corpus_entry.plain
    if m.n > 7:
        pytest.skip("enumeration of bases")
    bases = [b for b in combinations(range(m.n), m.rank()) if m.is_independent(b)]
    assert Matroid.from_bases(m.n, bases) == m


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(6))))
def test_relabeling_preserves_invariants(perm):
    k4 = corpus.k4()
    r = k4.relabel(perm)
    assert r.whitney_vector() == k4.whitney_vector()
    assert sorted(r.line_sizes()) == sorted(k4.line_sizes())
    assert r.flat_counts() == k4.flat_counts()
