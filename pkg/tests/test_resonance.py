import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sympy_rank
from osalgebra import corpus
from osalgebra.errors import BudgetExceeded
from osalgebra.matroid import Matroid
from osalgebra.resonance import (
    NeighborlyPartition,
    batch_rank_mod_p,
    compare_mod_p,
    component_subspace,
    exceptional_primes,
    is_neighborly,
    local_components,
    neighborly_partitions,
    nu,
    poly1,
    polymatroids_isomorphic,
    r1_membership_q,
    resonance_fp,
    resonance_q,
)

SMALL = ["u23", "u24", "u25", "u34", "boolean3", "k4"]


def test_local_components():
    assert len(local_components(Matroid.uniform(2, 3))) == 1
    assert local_components(Matroid.boolean(3)) == []
    k4 = local_components(corpus.k4())
    assert len(k4) == 4 and all(c.dimension == 2 and c.kind == "local" for c in k4)


def test_k4_components():
    comps = resonance_q(corpus.k4())
    kinds = [c.kind for c in comps]
    assert kinds.count("local") == 4 and kinds.count("nonlocal") == 1
    assert all(c.dimension == 2 for c in comps)
    nonlocal_ = comps[-1]
    assert [sorted(b) for b in nonlocal_.partition.blocks] == [[0, 5], [1, 4], [2, 3]]


def test_opposite_edge_partition_is_neighborly():
    k4 = corpus.k4()
    blocks = [[0, 5], [1, 4], [2, 3]]
    assert is_neighborly(k4, range(6), blocks)
    lines = [frozenset(x) for x in k4.lines()]
    pi = NeighborlyPartition(frozenset(range(6)), tuple(frozenset(b) for b in blocks), tuple(x for x in lines if len(x) == 3))
    comp = component_subspace(k4, pi)
    assert comp is not None and comp.dimension == 2 and comp.kind == "nonlocal"


@pytest.mark.parametrize("m", [3, 4, 5])
def test_rank_two_uniform_is_the_diagonal(m):
    comps = resonance_q(Matroid.uniform(2, m))
    assert len(comps) == 1 and comps[0].dimension == m - 1


def test_boolean_has_no_resonance():
    for n in range(1, 5):
        assert resonance_q(Matroid.boolean(n)) == []
    prof = resonance_fp(Matroid.boolean(3), 3)
    assert prof.dims == {}


def test_nonfano_and_yuzvinsky_component_counts():
    nf = resonance_q(corpus.nonfano())
    assert [c.kind for c in nf].count("local") == 6
    assert [c.kind for c in nf].count("nonlocal") == 3
    y = resonance_q(corpus.yuzvinsky8())
    assert len(y) == 5 and all(c.kind == "local" for c in y)


def test_component_invariants(corpus_entry):
    m = corpus_entry.plain
    comps = resonance_q(m)
    for c in comps:
        assert c.dimension >= 2
        for v in c.basis_vectors():
            assert sum(v) == 0
            assert all(v[i] == 0 for i in range(m.n) if i not in c.partition.support)
            for x in c.partition.multicolored_lines:
                assert sum(v[i] for i in x) == 0
        for x in c.partition.multicolored_lines:
            assert all(b & x for b in c.partition.blocks)
    for a, b in combinations(comps, 2):
        stacked = [list(v) for v in a.basis_vectors() + b.basis_vectors()]
        assert sympy_rank(stacked) == a.dimension + b.dimension


def test_neighborly_condition_holds(corpus_entry):
    m = corpus_entry.plain
    if m.n > 7:
        pytest.skip("enumeration size")
    for pi in neighborly_partitions(m):
        assert is_neighborly(m, pi.support, pi.blocks)
        assert len(pi.blocks) >= 2


def test_partition_budget():
    with pytest.raises(BudgetExceeded):
        neighborly_partitions(corpus.yuzvinsky8(), budget=10)


def _sample_point(comp, rnd):
    vec = [Fraction(0)] * comp.n
    for v in comp.basis_vectors():
        c = rnd.randint(-5, 5) or 1
        vec = [a + c * b for a, b in zip(vec, v)]
    return vec


@pytest.mark.parametrize("name", ["u23", "u24", "k4", "nonfano", "yuzvinsky8"])
def test_membership_oracle(name):
    m = corpus.get(name).plain
    comps = resonance_q(m)
    rnd = random.Random(7)
    for c in comps:
        for _ in range(3):
            lam = _sample_point(c, rnd)
            if any(lam):
                assert r1_membership_q(m, lam)
    misses = 0
    for _ in range(30):
        lam = [Fraction(rnd.randint(-6, 6)) for _ in range(m.n - 1)]
        lam.append(-sum(lam))
        if any(c.contains(lam) for c in comps):
            continue
        assert not r1_membership_q(m, lam)
        misses += 1
    assert misses > 0 or name.startswith("u2")


def test_membership_examples():
    assert r1_membership_q(Matroid.uniform(2, 3), [1, -1, 0])
    assert r1_membership_q(Matroid.uniform(2, 3), [0, 0, 0])
    assert not r1_membership_q(Matroid.boolean(3), [1, -1, 0])


# -- GF(p) side --------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7, 11]))
def test_batch_rank_matches_reference(seed, p):
    rng = np.random.default_rng(seed)
    r, c = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    mats = rng.integers(0, p, size=(20, r, c))
    mats[::4, -1] = (2 * mats[::4, 0]) % p  # force some rank drops
    got = batch_rank_mod_p(mats, p)
    assert list(got) == [sympy_rank(mat.tolist(), p) for mat in mats]


def test_u23_over_gf2():
    prof = resonance_fp(Matroid.uniform(2, 3), 2, 1)
    assert prof.stratum(1) == {(1, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert all(d == 1 for d in prof.dims.values())
    assert nu(Matroid.uniform(2, 3), 2, 1, prof) == 3


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_strata_nested_homogeneous_and_divisible(name, p):
    m = corpus.get(name).plain
    for q in (1, 2):
        if q > m.rank():
            continue
        prof = resonance_fp(m, p, q)
        prev = None
        for d in range(1, prof.max_dim + 2):
            s = prof.stratum(d)
            assert len(s) % (p - 1) == 0
            for lam in s:
                for c in range(2, p):
                    assert tuple(x * c % p for x in lam) in s
                assert sum(lam) % p == 0  # R_q lies in the diagonal hyperplane
            if prev is not None:
                assert s <= prev
            prev = s
        if q == 1:
            exact = sum(nu(m, p, d, prof) for d in range(1, prof.max_dim + 1))
            assert exact == len(prof.stratum(1)) // (p - 1)


@pytest.mark.parametrize("name", SMALL)
def test_degree_zero_resonance_is_the_origin(name):
    m = corpus.get(name).plain
    prof = resonance_fp(m, 3, 0)
    assert prof.dims == {}
    assert prof.zero_dim == 1


def test_affine_and_projective_enumerations_agree():
    m = corpus.k4()
    a = resonance_fp(m, 3, 1, projective=False)
    b = resonance_fp(m, 3, 1, projective=True)
    assert a.stratum(1) == b.stratum(1)
    assert a.projective_counts() == b.projective_counts()


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_components_match_brute_force_on_small_matroids(name, p):
    res = compare_mod_p(corpus.get(name).plain, p)
    assert res["match"]


def test_exceptional_primes_examples():
    assert exceptional_primes(Matroid.uniform(2, 3), 7) == []
    assert exceptional_primes(corpus.k4(), 7) == []


def test_fp_budget():
    with pytest.raises(BudgetExceeded):
        resonance_fp(corpus.yuzvinsky8(), 7, budget=1000)


def test_poly1_k4():
    table = poly1(corpus.k4())
    assert all(table[frozenset([i])] == 2 for i in range(5))
    assert all(table[frozenset(s)] == 4 for s in combinations(range(5), 2))
    assert table[frozenset(range(5))] == 5
    assert poly1(Matroid.uniform(2, 3)) == {frozenset(): 0, frozenset([0]): 2}


def test_polymatroid_isomorphism():
    t = poly1(corpus.k4())
    perm = [3, 0, 4, 1, 2]
    moved = {frozenset(perm[i] for i in s): r for s, r in t.items()}
    assert polymatroids_isomorphic(t, moved)
    broken = dict(moved)
    broken[frozenset([0, 1])] = 3
    assert not polymatroids_isomorphic(t, broken)
