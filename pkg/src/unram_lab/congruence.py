"""
Congruences between columns of unramified character tables.

``sim_m`` is the equivalence on G generated by conjugation and
g ~ g*h^(p^(m-1)) for h of p-power order commuting with g.  Column pairs
related by it must agree modulo p^m; the verifiers below check that, and
the converse bound, on concrete groups.
"""

from dataclasses import dataclass, field

import numpy as np

from .arith import split_prime_power
from .chartab import character_table
from .cyclotomic import INFINITY, congruence_valuation
from .groups import p_parts
from .unionfind import UnionFind
from .unramified import unramified_table

__all__ = [
    "SimMPartition",
    "DepthMatrix",
    "Report",
    "sim_m",
    "semisimple_blocks",
    "unramified_for",
    "depth_matrix",
    "verify_theorem_3_3",
    "verify_prop_3_2",
    "explain_gap",
]


@dataclass(frozen=True)
class SimMPartition:
    m: int
    p: int
    blocks: tuple

    def block_of(self, class_index):
        for b, block in enumerate(self.blocks):
            if class_index in block:
                return b
        raise IndexError(class_index)

    def related(self, i, j):
        return self.block_of(i) == self.block_of(j)


@dataclass(frozen=True)
class DepthMatrix:
    entries: tuple
    p: int
    e: int
    labels: tuple = ()

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __len__(self):
        return len(self.entries)

    def finite_offdiagonal(self):
        n = len(self.entries)
        return [
            (i, j, self.entries[i][j])
            for i in range(n)
            for j in range(i + 1, n)
            if self.entries[i][j] is not INFINITY
        ]


@dataclass
class Report:
    check: str
    group: str
    p: int
    m: int = None
    passed: bool = True
    details: dict = field(default_factory=dict)
    counterexample: object = None

    def to_json(self):
        out = {"check": self.check, "group": self.group, "p": self.p}
        if self.m is not None:
            out["m"] = self.m
        out["passed"] = self.passed
        out["details"] = self.details
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _power_rows(rows, k):
    """Images of x**k for every row x (composition power)."""
    result = np.tile(np.arange(rows.shape[1], dtype=rows.dtype), (len(rows), 1))
    base = rows
    while k:
        if k & 1:
            result = np.take_along_axis(result, base, axis=1)
        k >>= 1
        if k:
            base = np.take_along_axis(base, base, axis=1)
    return result


def _is_p_power(orders, p):
    out = orders.copy()
    while True:
        div = (out % p == 0) & (out > 1)
        if not div.any():
            break
        out[div] //= p
    return out == 1


def sim_m(G, p, m):
    """Blocks of ~_m on conjugacy classes.

    Moves are only applied at class representatives: a move at x g x^-1
    uses x h x^-1 and lands in the class of the move at g, so this closes
    under the same relation as applying moves at every element.
    """
    if m < 1:
        raise ValueError("m must be positive")
    key = ("sim_m", p, m)
    cached = G._cache.get(key)
    if cached is not None:
        return cached
    classes = G.conjugacy_classes()
    arr = G.array
    orders = G.orders
    cls = G.class_of
    uf = UnionFind(len(classes))
    q = p ** (m - 1)
    for j, c in enumerate(classes):
        g = np.array(c.representative.images, dtype=arr.dtype)
        cent = G.centralizer_indices(g)
        cent = cent[_is_p_power(orders[cent], p)]
        if not len(cent):
            continue
        powers = _power_rows(arr[cent], q)
        moved = G.lookup_rows(g[powers])
        for t in np.unique(cls[moved]).tolist():
            uf.union(j, t)
    result = SimMPartition(m=m, p=p, blocks=tuple(tuple(b) for b in uf.blocks()))
    G._cache[key] = result
    return result


def semisimple_blocks(G, p):
    """Classes grouped by the conjugacy class of the p-semisimple part of their elements."""
    groups = {}
    for j, c in enumerate(G.conjugacy_classes()):
        g_s, _ = p_parts(c.representative, p)
        groups.setdefault(G.class_index(g_s), []).append(j)
    return sorted((tuple(b) for b in groups.values()), key=lambda b: b[0])


def unramified_for(G, p):
    key = ("unramified", p)
    cached = G._cache.get(key)
    if cached is None:
        cached = unramified_table(character_table(G), p)
        G._cache[key] = cached
    return cached


def depth_matrix(U):
    """Pairwise congruence depths between the columns of an unramified table."""
    n = len(U.gamma_classes)
    cols = [U.column(c) for c in range(n)]
    if all(v.denominator == 1 and v.conductor == U.r for col in cols for v in col):
        entries = _depths_integral(cols, U.p)
    else:
        entries = _depths_generic(cols, U.p)
    return DepthMatrix(
        entries=tuple(tuple(r) for r in entries),
        p=U.p,
        e=U.e,
        labels=tuple(U.column_names()),
    )


def _depths_generic(cols, p):
    n = len(cols)
    entries = [[INFINITY] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            d = INFINITY
            for x, y in zip(cols[a], cols[b]):
                v = congruence_valuation(x, y, p)
                if v < d:
                    d = v
                    if d == 0:
                        break
            entries[a][b] = entries[b][a] = d
    return entries


def _depths_integral(cols, p):
    """Same result as the generic path when every value is an integral vector at one conductor."""
    n = len(cols)
    coords = np.array([[v.numerators for v in col] for col in cols], dtype=np.int64)
    coords = coords.reshape(n, -1)
    entries = [[INFINITY] * n for _ in range(n)]
    for a in range(n - 1):
        diff = coords[a + 1:] - coords[a]
        nonzero = diff != 0
        val = np.zeros(diff.shape, dtype=np.int64)
        cur = diff
        live = nonzero.copy()
        while live.any():
            live &= cur % p == 0
            val += live
            cur = np.where(live, cur // p, cur)
        val[~nonzero] = np.iinfo(np.int64).max
        best = val.min(axis=1)
        for off, b in enumerate(range(a + 1, n)):
            d = INFINITY if not nonzero[off].any() else int(best[off])
            entries[a][b] = entries[b][a] = d
    return entries


def _depths(G, p):
    key = ("depth", p)
    cached = G._cache.get(key)
    if cached is None:
        cached = depth_matrix(unramified_for(G, p))
        G._cache[key] = cached
    return cached


def _gamma_partition_pairs(U, partition_blocks):
    """Gamma-class pairs (a < b) that meet a common block."""
    gamma_of = {}
    for c, gc in enumerate(U.gamma_classes):
        for j in gc.classes:
            gamma_of[j] = c
    uf = UnionFind(len(U.gamma_classes))
    for block in partition_blocks:
        for j in block[1:]:
            uf.union(gamma_of[block[0]], gamma_of[j])
    n = len(U.gamma_classes)
    return [(a, b) for a in range(n) for b in range(a + 1, n) if uf.find(a) == uf.find(b)]


def _label(U, pair):
    names = U.column_names()
    return [names[pair[0]], names[pair[1]]]


def _depth_json(d):
    return "inf" if d is INFINITY else d


def verify_theorem_3_3(G, p, m):
    """Every pair of Gamma-classes joined by ~_m has depth >= m."""
    U = unramified_for(G, p)
    D = _depths(G, p)
    pairs = _gamma_partition_pairs(U, sim_m(G, p, m).blocks)
    report = Report("thm33", G.name, p, m, details={"related_pairs": len(pairs)})
    for a, b in pairs:
        if D[a, b] < m:
            report.passed = False
            report.counterexample = {"pair": _label(U, (a, b)), "depth": _depth_json(D[a, b])}
            break
    return report


def verify_prop_3_2(G, p):
    """Every finite off-diagonal depth is at most e = ord_p |G|."""
    U = unramified_for(G, p)
    D = _depths(G, p)
    finite = D.finite_offdiagonal()
    worst = max((d for _, _, d in finite), default=None)
    report = Report("prop32", G.name, p, details={"e": U.e, "max_finite_depth": worst})
    for a, b, d in finite:
        if d > U.e:
            report.passed = False
            report.counterexample = {"pair": _label(U, (a, b)), "depth": d}
            break
    return report


def explain_gap(G, p, m=None):
    """Gamma-class pairs with depth >= m that ~_m (joined with Gamma) does not relate.

    Always passes; the lists are findings.  With ``m`` unset every level
    1..e is reported.  Level 1 is also compared with the semisimple-part
    criterion.
    """
    U = unramified_for(G, p)
    D = _depths(G, p)
    n = len(U.gamma_classes)
    levels = [m] if m is not None else list(range(1, U.e + 1))
    unexplained = {}
    for level in levels:
        related = set(_gamma_partition_pairs(U, sim_m(G, p, level).blocks))
        gap = [
            _label(U, (a, b)) + [_depth_json(D[a, b])]
            for a in range(n)
            for b in range(a + 1, n)
            if D[a, b] >= level and (a, b) not in related
        ]
        unexplained[str(level)] = gap
    semisimple = set(_gamma_partition_pairs(U, semisimple_blocks(G, p)))
    converse = [
        _label(U, (a, b))
        for a in range(n)
        for b in range(a + 1, n)
        if D[a, b] >= 1 and (a, b) not in semisimple
    ]
    e, _ = split_prime_power(G.order, p)
    return Report(
        "gap",
        G.name,
        p,
        m,
        details={"e": e, "unexplained": unexplained, "depth1_not_semisimple_related": converse},
    )
