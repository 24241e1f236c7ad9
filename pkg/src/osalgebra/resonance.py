"""First resonance varieties.

Over the rationals the variety is assembled from neighborly partitions: each
partition cuts out a linear subspace L_Pi of the parameter space, and the
components are the maximal L_Pi of dimension at least two.  Over GF(p) it is
computed straight from the definition, by ranking the multiplication maps of
a_lambda for every lambda.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .algebra import OSAlgebra, os_ideal
from .errors import BudgetExceeded, ValidationError
from .exterior import elements, mask, popcount, wedge_dicts
from .fields import GF, QQ, primes_up_to
from .linalg import EchelonBasis, intersection, kernel, subspace_sum
from .matroid import Matroid

log = logging.getLogger(__name__)

DEFAULT_FP_BUDGET = int(os.environ.get("OSALGEBRA_BUDGET", 10**7))
DEFAULT_PARTITION_BUDGET = 2_000_000


@dataclass(frozen=True)
class NeighborlyPartition:
    support: frozenset[int]
    blocks: tuple[frozenset[int], ...]
    multicolored_lines: tuple[frozenset[int], ...] = ()

    def to_json(self) -> dict:
        return {
            "support": sorted(self.support),
            "blocks": [sorted(b) for b in self.blocks],
            "multicolored_lines": [sorted(x) for x in self.multicolored_lines],
        }


@dataclass
class ResonanceComponent:
    partition: NeighborlyPartition
    subspace: EchelonBasis  # over QQ, coordinates 0..n-1
    n: int
    kind: str  # "local" or "nonlocal"

    @property
    def dimension(self) -> int:
        return self.subspace.dim

    def basis_vectors(self) -> list[list[Fraction]]:
        out = []
        for v in self.subspace.basis():
            out.append([Fraction(v.get(i, 0)) for i in range(self.n)])
        return out

    def contains(self, lam) -> bool:
        return self.subspace.contains({i: QQ(c) for i, c in enumerate(lam) if c})

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "support": sorted(self.partition.support),
            "blocks": [sorted(b) for b in self.partition.blocks],
            "dim": self.dimension,
            "basis": [[QQ.to_json(c) for c in v] for v in self.basis_vectors()],
        }


# -- neighborly partitions -------------------------------------------------------------


def restricted_lines(m: Matroid, support: int) -> list[int]:
    """Rank-2 flats of the restriction of m to ``support``."""
    out = []
    for x in m.line_masks():
        y = x & support
        if popcount(y) >= 2:
            out.append(y)
    return out


def is_neighborly(m: Matroid, support, blocks) -> bool:
    s = mask(support)
    bl = [mask(b) for b in blocks]
    if any(not b for b in bl) or sum(popcount(b) for b in bl) != popcount(s) or mask(e for b in blocks for e in b) != s:
        raise ValidationError("blocks do not partition the support")
    for x in restricted_lines(m, s):
        size = popcount(x)
        for b in bl:
            if popcount(b & x) == size - 1:
                return False
    return True


def _multicolored(lines: list[int], blocks: list[int]) -> list[int]:
    return [x for x in lines if sum(1 for b in blocks if b & x) >= 2]


def _partitions_of_support(m: Matroid, s: int, counter: list[int], budget: int):
    """Neighborly partitions of s with at least two blocks, as lists of block masks."""
    lines = restricted_lines(m, s)
    parent = {e: e for e in elements(s)}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in lines:
        if popcount(x) == 2:
            a, b = elements(x)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, int] = {}
    for e in elements(s):
        r = find(e)
        groups[r] = groups.get(r, 0) | (1 << e)
    nodes = [groups[r] for r in sorted(groups)]
    k = len(nodes)
    if k < 2:
        return
    big = [x for x in lines if popcount(x) >= 3]
    # index of the last node touching each big line: check it once that node is placed
    checks: dict[int, list[int]] = {}
    for x in big:
        last = max(i for i, nd in enumerate(nodes) if nd & x)
        checks.setdefault(last, []).append(x)

    blocks: list[int] = []

    def place(i: int):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"neighborly partition search exceeded {budget} steps")
        if i == k:
            if len(blocks) >= 2:
                yield list(blocks)
            return
        nd = nodes[i]
        for j in range(len(blocks) + 1):
            fresh = j == len(blocks)
            if fresh:
                blocks.append(nd)
            else:
                blocks[j] |= nd
            good = True
            for x in checks.get(i, ()):
                size = popcount(x)
                if any(popcount(b & x) == size - 1 for b in blocks):
                    good = False
                    break
            if good:
                yield from place(i + 1)
            if fresh:
                blocks.pop()
            else:
                blocks[j] &= ~nd

    yield from place(0)


def neighborly_partitions(
    m: Matroid, max_support: int | None = None, budget: int = DEFAULT_PARTITION_BUDGET
) -> list[NeighborlyPartition]:
    """All neighborly partitions (two or more blocks) of supports up to ``max_support`` points."""
    if max_support is None:
        max_support = m.n
    if max_support > m.n:
        raise ValidationError(f"max_support {max_support} exceeds {m.n}")
    counter = [0]
    out = []
    for size in range(max_support, 1, -1):
        for s in map(mask, combinations(range(m.n), size)):
            lines = restricted_lines(m, s)
            for bl in _partitions_of_support(m, s, counter, budget):
                mc = _multicolored(lines, bl)
                blocks = tuple(sorted((frozenset(elements(b)) for b in bl), key=lambda b: sorted(b)))
                out.append(
                    NeighborlyPartition(
                        frozenset(elements(s)), blocks, tuple(frozenset(elements(x)) for x in mc)
                    )
                )
    return out


def _l_pi(m: Matroid, pi: NeighborlyPartition) -> EchelonBasis:
    """Solve the defining equations of L_Pi in QQ^n."""
    n = m.n
    eqs: list[list[int]] = [list(range(n))]
    eqs += [[i] for i in range(n) if i not in pi.support]
    eqs += [sorted(x) for x in pi.multicolored_lines]
    images = [{} for _ in range(n)]
    for r, eq in enumerate(eqs):
        for i in eq:
            images[i][r] = 1
    return kernel(QQ, images)


def _is_local(m: Matroid, pi: NeighborlyPartition) -> bool:
    s = mask(pi.support)
    return all(len(b) == 1 for b in pi.blocks) and s in m.line_masks()


def component_subspace(m: Matroid, pi: NeighborlyPartition) -> ResonanceComponent | None:
    """The component L_Pi, or None when its dimension is below two."""
    sub = _l_pi(m, pi)
    if sub.dim < 2:
        return None
    return ResonanceComponent(pi, sub, m.n, "local" if _is_local(m, pi) else "nonlocal")


def local_components(m: Matroid) -> list[ResonanceComponent]:
    out = []
    for x in m.line_masks():
        if popcount(x) >= 3:
            pts = elements(x)
            pi = NeighborlyPartition(frozenset(pts), tuple(frozenset([i]) for i in pts), (frozenset(pts),))
            comp = component_subspace(m, pi)
            if comp is None or comp.dimension != len(pts) - 1:
                raise AssertionError(f"local component of line {pts} has wrong dimension")
            out.append(comp)
    return out


def _subspace_key(b: EchelonBasis) -> tuple:
    return tuple((piv, tuple(sorted(row.items()))) for piv, row in sorted(b.rows.items()))


def _generic_support(b: EchelonBasis) -> int:
    s = 0
    for v in b.basis():
        s |= mask(v)
    return s


def _rep_key(m: Matroid, comp: ResonanceComponent, generic: int):
    pi = comp.partition
    return (
        mask(pi.support) != generic,
        comp.kind != "local",
        -len(pi.blocks),
        sorted(pi.support),
        [sorted(b) for b in pi.blocks],
    )


def resonance_q(m: Matroid, budget: int = DEFAULT_PARTITION_BUDGET) -> list[ResonanceComponent]:
    """Irreducible components of R_1 over the rationals."""
    groups: dict[tuple, list[ResonanceComponent]] = {}
    for pi in neighborly_partitions(m, budget=budget):
        if len(pi.support) < 3:
            continue
        comp = component_subspace(m, pi)
        if comp is not None:
            groups.setdefault(_subspace_key(comp.subspace), []).append(comp)
    reps = []
    for comps in groups.values():
        generic = _generic_support(comps[0].subspace)
        comps.sort(key=lambda c: _rep_key(m, c, generic))
        reps.append(comps[0])
    maximal = []
    for c in reps:
        contained = any(
            d is not c and d.dimension > c.dimension and all(d.subspace.contains(v) for v in c.subspace.basis())
            for d in reps
        )
        if not contained:
            maximal.append(c)
    maximal.sort(key=lambda c: (c.kind != "local", sorted(c.partition.support), [sorted(b) for b in c.partition.blocks]))
    check_components(m, maximal)
    return maximal


def check_components(m: Matroid, comps: list[ResonanceComponent]) -> None:
    """Structural properties every component list must have; raises AssertionError."""
    for c in comps:
        if c.dimension < 2:
            raise AssertionError("component of dimension < 2")
        for v in c.subspace.basis():
            if sum(v.values()) != 0:
                raise AssertionError("component basis vector off the diagonal hyperplane")
            if any(i not in c.partition.support for i in v):
                raise AssertionError("component basis vector outside its support")
        blocks = [mask(b) for b in c.partition.blocks]
        for x in c.partition.multicolored_lines:
            xm = mask(x)
            if not all(b & xm for b in blocks):
                raise AssertionError(f"multicolored line {sorted(x)} misses a block")
    for a, b in combinations(comps, 2):
        if intersection(a.subspace, b.subspace).dim != 0:
            raise AssertionError("two components meet outside the origin")


def r1_membership_q(m: Matroid, lam) -> bool:
    """Elementary-tensor test: does e_lambda ^ e_mu lie in I^2 for some mu not proportional?"""
    lam = [QQ(c) for c in lam]
    if len(lam) != m.n:
        raise ValidationError(f"expected {m.n} coordinates")
    if not any(lam):
        return True
    el = {1 << i: c for i, c in enumerate(lam) if c}
    products = EchelonBasis(QQ, (wedge_dicts(el, {1 << j: 1}) for j in range(m.n)))
    return intersection(products, os_ideal(m, QQ)[2]).dim > 0


# -- resonance over GF(p) --------------------------------------------------------------------


def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over GF(p) of a stack of matrices with shape (B, r, c)."""
    dtype = np.int32 if p < 40000 else np.int64
    a = np.asarray(mats).astype(dtype) % p
    if a.shape[1] < a.shape[2]:
        a = np.ascontiguousarray(a.transpose(0, 2, 1))
    bsz, r, c = a.shape
    rank = np.zeros(bsz, dtype=np.int64)
    if r == 0 or c == 0 or bsz == 0:
        return rank
    inv = np.zeros(p, dtype=dtype)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    rows = np.arange(r)
    every = np.arange(bsz)
    for j in range(c):
        eligible = (a[:, :, j] != 0) & (rows[None, :] >= rank[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        rk = np.minimum(rank, r - 1)
        piv = np.where(has, eligible.argmax(axis=1), rk)
        prow = a[every, piv]
        a[every, piv] = a[every, rk]
        # rows without a pivot get a zero multiplier and change nothing below
        prow = prow * inv[prow[:, j]][:, None] % p
        a[every[has], rk[has]] = prow[has]
        below = rows[None, :] > rk[:, None]
        factors = np.where(below & has[:, None], a[:, :, j], 0)
        a[:, :, j:] = (a[:, :, j:] - factors[:, :, None] * prow[:, None, j:]) % p
        rank += has
    return rank


def _projective_points(n: int, p: int):
    """Yield chunks of representatives whose first nonzero coordinate is 1."""
    for lead in range(n):
        tail = n - lead - 1
        total = p**tail
        chunk = 1 << 16
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            pts = np.zeros((len(idx), n), dtype=np.int64)
            pts[:, lead] = 1
            for j in range(n - 1, lead, -1):
                pts[:, j] = idx % p
                idx = idx // p
            yield pts


def _all_nonzero_points(n: int, p: int):
    total = p**n
    chunk = 1 << 16
    for start in range(1, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = np.zeros((len(idx), n), dtype=np.int64)
        for j in range(n - 1, -1, -1):
            pts[:, j] = idx % p
            idx = idx // p
        yield pts


@dataclass
class ResonanceFpProfile:
    matroid: Matroid
    p: int
    q: int
    dims: dict[tuple[int, ...], int]  # lambda -> dim H^q, only entries with dim >= 1
    projective: bool
    zero_dim: int = 0  # dim H^q at lambda = 0
    max_dim: int = dc_field(default=0)

    def _scaled(self, lam: tuple[int, ...]):
        for c in range(1, self.p):
            yield tuple(x * c % self.p for x in lam)

    def stratum(self, d: int) -> set[tuple[int, ...]]:
        """Nonzero lambda in GF(p)^n with dim H^q >= d (affine, all scalings)."""
        out: set[tuple[int, ...]] = set()
        for lam, k in self.dims.items():
            if k >= d:
                if self.projective:
                    out.update(self._scaled(lam))
                else:
                    out.add(lam)
        return out

    def projective_stratum(self, d: int) -> set[tuple[int, ...]]:
        out = set()
        for lam in self.stratum(d):
            lead = next(x for x in lam if x)
            s = pow(lead, -1, self.p)
            out.add(tuple(x * s % self.p for x in lam))
        return out

    def projective_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        if self.projective:
            for k in self.dims.values():
                counts[k] = counts.get(k, 0) + 1
        else:
            for k in self.dims.values():
                counts[k] = counts.get(k, 0) + 1
            counts = {k: v // (self.p - 1) for k, v in counts.items()}
        return dict(sorted(counts.items()))


def _cohomology_dims(m: Matroid, p: int, q: int, points: np.ndarray, mats) -> np.ndarray:
    d_prev, d_cur, dim_q = mats
    rk_cur = np.zeros(len(points), dtype=np.int64)
    rk_prev = np.zeros(len(points), dtype=np.int64)
    for d, out in ((d_cur, rk_cur), (d_prev, rk_prev)):
        if d is not None and d.shape[1] and d.shape[2]:
            n, r, c = d.shape
            stacked = (points @ d.reshape(n, r * c)) % p
            out[:] = batch_rank_mod_p(stacked.reshape(-1, r, c), p)
    return dim_q - rk_cur - rk_prev


def resonance_fp(
    m: Matroid, p: int, q: int = 1, budget: int | None = None, projective: bool = True
) -> ResonanceFpProfile:
    """dim H^q(A (x) GF(p), a_lambda) for every nonzero lambda."""
    if budget is None:
        budget = DEFAULT_FP_BUDGET
    if p**m.n > budget:
        raise BudgetExceeded(f"{p}^{m.n} parameter points exceed the budget {budget}")
    alg = OSAlgebra(m, GF(p))
    dim_q = len(alg.basis(q))
    d_cur = alg.left_mult_matrices(q) if q < m.n else None
    d_prev = alg.left_mult_matrices(q - 1) if q >= 1 else None
    mats = (d_prev, d_cur, dim_q)
    dims: dict[tuple[int, ...], int] = {}
    gen = _projective_points(m.n, p) if projective else _all_nonzero_points(m.n, p)
    for pts in gen:
        h = _cohomology_dims(m, p, q, pts, mats)
        for i in np.nonzero(h > 0)[0]:
            dims[tuple(int(x) for x in pts[i])] = int(h[i])
    zero = dim_q  # a_0 = 0: every differential vanishes
    prof = ResonanceFpProfile(m, p, q, dims, projective, zero_dim=zero)
    prof.max_dim = max(dims.values(), default=0)
    return prof


def nu(m: Matroid, p: int, d: int, profile: ResonanceFpProfile | None = None, budget: int | None = None) -> int:
    """Number of projective points with dim H^1 exactly d."""
    if profile is None:
        profile = resonance_fp(m, p, 1, budget)
    a = len(profile.stratum(d))
    b = len(profile.stratum(d + 1))
    return (a - b) // (p - 1)


def component_points_mod_p(comps: list[ResonanceComponent], p: int) -> set[tuple[int, ...]] | None:
    """Nonzero GF(p)-points of the union of the reduced components; None on a denominator clash."""
    f = GF(p)
    pts: set[tuple[int, ...]] = set()
    for c in comps:
        basis = []
        for v in c.basis_vectors():
            if any(x.denominator % p == 0 for x in v):
                return None
            basis.append(np.array([f(x) for x in v], dtype=np.int64))
        if not basis:
            continue
        bmat = np.stack(basis)
        for coeffs in product(range(p), repeat=len(basis)):
            if not any(coeffs):
                continue
            vec = np.array(coeffs, dtype=np.int64) @ bmat % p
            pts.add(tuple(int(x) for x in vec))
    return pts


def compare_mod_p(
    m: Matroid, p: int, comps: list[ResonanceComponent] | None = None, budget: int | None = None
) -> dict:
    if comps is None:
        comps = resonance_q(m)
    reduced = component_points_mod_p(comps, p)
    if reduced is None:
        return {"p": p, "denominator_clash": True, "match": None}
    brute = resonance_fp(m, p, 1, budget).stratum(1)
    return {
        "p": p,
        "denominator_clash": False,
        "match": reduced == brute,
        "extra_in_fp": len(brute - reduced),
        "missing_in_fp": len(reduced - brute),
    }


def exceptional_primes(m: Matroid, p_max: int, budget: int | None = None, details: list | None = None) -> list[int]:
    """Primes p <= p_max where reducing the rational components disagrees with R_1 over GF(p).

    Primes dividing a denominator of a component basis are skipped; they are
    appended to ``details`` (when given) with ``denominator_clash`` set.
    """
    comps = resonance_q(m)
    out = []
    for p in primes_up_to(p_max):
        res = compare_mod_p(m, p, comps, budget)
        if details is not None:
            details.append(res)
        if res["denominator_clash"]:
            log.warning("denominator clash at p=%d", p)
            continue
        if not res["match"]:
            out.append(p)
    return out


# -- poly_1 --------------------------------------------------------------------------------


def poly1(m: Matroid, comps: list[ResonanceComponent] | None = None, check: bool = True) -> dict[frozenset[int], int]:
    """Rank table of the subspace arrangement formed by the components."""
    if comps is None:
        comps = resonance_q(m)
    k = len(comps)
    if k > 20:
        raise BudgetExceeded(f"{k} components exceed the poly1 limit of 20")
    if k <= 12:
        subsets = [frozenset(c) for r in range(k + 1) for c in combinations(range(k), r)]
    else:
        subsets = [frozenset(c) for r in range(4) for c in combinations(range(k), r)]
        subsets.append(frozenset(range(k)))
    table: dict[frozenset[int], int] = {}
    for s in sorted(subsets, key=lambda x: (len(x), sorted(x))):
        if not s:
            table[s] = 0
            continue
        acc = EchelonBasis(QQ)
        for i in sorted(s):
            acc = subspace_sum(acc, comps[i].subspace)
        table[s] = acc.dim
    if check and k <= 12:
        for s, r in table.items():
            for i in range(k):
                if i in s:
                    continue
                si = s | {i}
                if table[si] < r:
                    raise AssertionError("poly1 rank table is not monotone")
                for j in range(i + 1, k):
                    if j in s:
                        continue
                    if table[si] + table[s | {j}] < table[si | {j}] + r:
                        raise AssertionError("poly1 rank table is not submodular")
    return table


def poly1_to_json(table: dict[frozenset[int], int]) -> dict[str, int]:
    return {",".join(str(i) for i in sorted(s)): r for s, r in sorted(table.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))}


def polymatroids_isomorphic(a: dict[frozenset[int], int], b: dict[frozenset[int], int]) -> bool:
    """Is there a relabeling of ground elements carrying rank table ``a`` to ``b``?"""
    if set(map(len, a)) != set(map(len, b)) or len(a) != len(b):
        return False
    ka = max((max(s) for s in a if s), default=-1) + 1
    kb = max((max(s) for s in b if s), default=-1) + 1
    if ka != kb:
        return False
    k = ka
    if sorted(a.values()) != sorted(b.values()):
        return False

    def sig(t, i):
        return sorted(r for s, r in t.items() if i in s and len(s) <= 2)

    sa = [sig(a, i) for i in range(k)]
    sb = [sig(b, i) for i in range(k)]
    perm: list[int] = []
    used = [False] * k

    def consistent() -> bool:
        idx = len(perm) - 1
        i = idx
        for s, r in a.items():
            if i in s and all(x <= idx for x in s):
                img = frozenset(perm[x] for x in s)
                if b.get(img) != r:
                    return False
        return True

    def search() -> bool:
        i = len(perm)
        if i == k:
            return all(b.get(frozenset(perm[x] for x in s)) == r for s, r in a.items())
        for j in range(k):
            if not used[j] and sa[i] == sb[j]:
                perm.append(j)
                used[j] = True
                if consistent() and search():
                    return True
                perm.pop()
                used[j] = False
        return False

    return search()
