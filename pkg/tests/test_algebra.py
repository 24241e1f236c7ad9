import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osalgebra import corpus
from osalgebra.algebra import (
    OSAlgebra,
    affine_os,
    base_point_independent,
    boundary_in_ideal,
    convolve,
    is_quadratic,
    kadic_dims,
    nbb_counts,
    nbb_sets,
    nbc_counts,
    nbc_sets,
    os_dims,
    os_ideal,
    phi3,
    phi3_formula,
    phi3_nullity,
    tensor_dims,
)
from osalgebra.errors import FieldMismatch, LevelOutOfRange
from osalgebra.exterior import subsets_of_size, wedge_dicts
from osalgebra.fields import GF, QQ
from osalgebra.matroid import Matroid, PointedMatroid, parallel_connection

FIELDS = [QQ, GF(2), GF(3), GF(5)]

# Values derived by hand (see test names) and cross-checked by two code paths.
PHI3 = {"u23": 2, "u24": 8, "u25": 20, "u34": 0, "boolean3": 0, "boolean4": 0, "k4": 10, "yuzvinsky8": 16}
BETTI = {"u23": [1, 3, 2], "k4": [1, 6, 11, 6], "yuzvinsky8": [1, 8, 21, 14], "boolean4": [1, 4, 6, 4, 1]}


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_dimensions_equal_whitney_numbers(corpus_entry, field):
    m = corpus_entry.plain
    assert os_dims(m, field) == m.whitney_vector()


@pytest.mark.parametrize("name,expected", BETTI.items())
def test_known_betti_vectors(name, expected):
    assert os_dims(corpus.get(name).plain) == expected


def test_ideal_examples():
    u23 = Matroid.uniform(2, 3)
    assert os_ideal(u23).dims == [0, 0, 1, 1]
    assert os_ideal(Matroid.uniform(3, 4), k=2).dims == [0] * 5
    assert os_ideal(Matroid.boolean(3)).dims == [0] * 4
    assert kadic_dims(Matroid.uniform(3, 4), 2) == [1, 4, 6, 4, 1]
    with pytest.raises(LevelOutOfRange):
        os_ideal(u23, k=3)
    with pytest.raises(LevelOutOfRange):
        os_ideal(corpus.k4(), k=1)


def test_ideal_is_closed_under_multiplication(corpus_entry):
    m = corpus_entry.plain
    ideal = os_ideal(m, QQ, 2)
    rnd = random.Random(m.n)
    for p in range(2, m.n):
        rows = ideal[p].basis()
        for v in rnd.sample(rows, min(4, len(rows))):
            i = rnd.randrange(m.n)
            assert ideal[p + 1].contains(wedge_dicts({1 << i: 1}, v))


def test_kadic_tower_is_monotone(corpus_entry):
    m = corpus_entry.plain
    r = max(m.rank(), 2)
    tower = [kadic_dims(m, k) for k in range(2, r + 1)]
    for lo, hi in zip(tower, tower[1:]):
        assert all(a >= b for a, b in zip(lo, hi))
    assert tower[-1][: m.rank() + 1] == os_dims(m)


@pytest.mark.parametrize("field", [QQ, GF(3)], ids=repr)
def test_phi3_two_ways(corpus_entry, field):
    m = corpus_entry.plain
    assert phi3_nullity(m, field) == phi3_formula(m, field)


@pytest.mark.parametrize("name,value", PHI3.items())
def test_phi3_values(name, value):
    assert phi3(corpus.get(name).plain) == value


def _orders(n, count=4):
    rnd = random.Random(1234 + n)
    out = [list(range(n)), list(range(n))[::-1]]
    while len(out) < count:
        o = list(range(n))
        rnd.shuffle(o)
        out.append(o)
    return out


def test_nbc_counts_every_order(corpus_entry):
    m = corpus_entry.plain
    for order in _orders(m.n):
        assert nbc_counts(m, order) == os_dims(m)


def test_nbc_examples():
    sets = nbc_sets(Matroid.uniform(2, 3))
    assert [sorted(map(sorted, level)) for level in sets] == [[[]], [[0], [1], [2]], [[0, 1], [0, 2]]]
    u34 = nbc_sets(Matroid.uniform(3, 4))
    assert sorted(map(sorted, u34[3])) == [[0, 1, 2], [0, 1, 3], [0, 2, 3]]
    assert nbc_counts(Matroid.boolean(4)) == [1, 4, 6, 4, 1]


def test_nbc_are_the_standard_monomials(corpus_entry):
    m = corpus_entry.plain
    alg = OSAlgebra(m)
    for p, level in enumerate(nbc_sets(m)):
        assert sorted(sum(1 << i for i in s) for s in level) == alg.basis(p)


def test_nbb_bound_and_examples(corpus_entry):
    m = corpus_entry.plain
    a2 = kadic_dims(m, 2) if m.rank() >= 2 else os_dims(m)
    for order in _orders(m.n, 3):
        counts = nbb_counts(m, order)
        assert all(c <= a2[p] for p, c in enumerate(counts))
        assert counts[0] == 1 and (m.n == 0 or counts[1] == m.n)
    if m.is_line_closed():
        assert nbb_counts(m) == nbc_counts(m)


def test_nbb_examples():
    assert sum(nbb_counts(Matroid.uniform(3, 4))) == 16
    assert nbb_sets(Matroid.uniform(2, 3)) == nbc_sets(Matroid.uniform(2, 3))


def test_quadratic_implies_line_closed(corpus_entry):
    m = corpus_entry.plain
    if is_quadratic(m):
        assert m.is_line_closed()


def test_yuzvinsky_counterexample():
    y = corpus.yuzvinsky8()
    assert y.is_line_closed()
    assert not is_quadratic(y)
    assert kadic_dims(y, 2)[:4] != os_dims(y)


def test_boundary_membership():
    assert boundary_in_ideal(Matroid.uniform(2, 3), [0, 1, 2], 2)
    assert not boundary_in_ideal(Matroid.uniform(3, 4), [0, 1, 2, 3], 2)
    assert boundary_in_ideal(Matroid.uniform(3, 4), [0, 1, 2, 3])


def test_prime_fields_agree_with_rationals(corpus_entry):
    m = corpus_entry.plain
    for p in (2, 3, 5, 7):
        for k in range(2, max(m.rank(), 2) + 1):
            assert kadic_dims(m, k, GF(p)) == kadic_dims(m, k, QQ)


# -- affine algebras -------------------------------------------------------------------


def _poincare(aff_dims):
    return convolve([1, 1], aff_dims)


@pytest.mark.parametrize("name", [e.name for e in corpus.pointed_matroids()])
def test_affine_factorization(name):
    dm = corpus.get(name).matroid
    aff = affine_os(dm)
    full = os_dims(dm.matroid)
    fact = _poincare(aff.dims)
    while fact and fact[-1] == 0:
        fact.pop()
    assert fact == full


def test_affine_examples():
    assert affine_os(corpus.get("cone_u23").matroid).dims == [1, 3, 2]
    assert affine_os(corpus.get("d_u23").matroid).dims == [1, 2]


@pytest.mark.parametrize("name", ["u23", "u34", "k4", "nonfano", "yuzvinsky8"])
def test_base_point_independence(name):
    assert base_point_independent(corpus.get(name).plain)


@pytest.mark.parametrize("a,b", [("u23", "u23"), ("u23", "u34"), ("k4", "u24"), ("boolean2", "u23")])
def test_parallel_connection_tensor_dims(a, b):
    ma, mb = corpus.get(a).plain, corpus.get(b).plain
    for pa in range(ma.n):
        da, db = PointedMatroid(ma, pa), PointedMatroid(mb, 0)
        par = parallel_connection(da, db)
        assert affine_os(par).dims == tensor_dims(affine_os(da), affine_os(db))


def test_tensor_field_mismatch():
    d = PointedMatroid(Matroid.uniform(2, 3), 0)
    with pytest.raises(FieldMismatch):
        tensor_dims(affine_os(d, QQ), affine_os(d, GF(3)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_multiplication_is_associative_in_quotient(seed):
    rnd = random.Random(seed)
    m = corpus.get(rnd.choice(["k4", "yuzvinsky8", "nonfano"])).plain
    alg = OSAlgebra(m)
    ps = [1, 1, 1]
    xs = [{s: rnd.randint(-2, 2) for s in rnd.sample(subsets_of_size(m.n, 1), 3)} for _ in ps]
    left = alg.multiply(alg.multiply(xs[0], xs[1], 1, 1), xs[2], 2, 1)
    right = alg.multiply(xs[0], alg.multiply(xs[1], xs[2], 1, 1), 1, 2)
    assert left == right


def test_binomial_dims_of_ideal(corpus_entry):
    m = corpus_entry.plain
    full = os_ideal(m)
    assert [comb(m.n, p) - d for p, d in enumerate(full.dims)][: m.rank() + 1] == os_dims(m)
    assert all(full.dims[p] == comb(m.n, p) for p in range(m.rank() + 1, m.n + 1))
