"""
Partition combinatorics for symmetric groups: cycle types, the comb
relation on partitions, row decompositions and permutation characters of
Young subgroups, plus the two symmetric-group verifiers.
"""

from collections import Counter, deque
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .chartab import partitions
from .congruence import Report, _depths, sim_m, unramified_for
from .errors import BoundExceeded, InvalidShape, ParseError, SizeMismatch
from .groups import symmetric

M_VALUE_BOUND = 12
PROP_4_2_BOUND = 8

__all__ = [
    "Partition",
    "cycle_type",
    "comb_normal_form",
    "comb_equivalent",
    "comb_class_bfs",
    "count_row_decompositions",
    "m_character_value",
    "verify_lemma_4_6",
    "verify_prop_4_2",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        if isinstance(parts, str):
            return cls.parse(parts)
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise InvalidShape(f"parts must be positive: {parts}")
        return super().__new__(cls, sorted(parts, reverse=True))

    @classmethod
    def parse(cls, text):
        """Read ``2,1,1`` or ``2,1^2`` (exponent shorthand); empty text is the empty partition."""
        text = text.strip()
        if not text:
            return super().__new__(cls, ())
        parts = []
        for tok in text.split(","):
            tok = tok.strip()
            base, _, mult = tok.partition("^")
            try:
                k = int(base)
                j = int(mult) if mult else 1
            except ValueError:
                raise ParseError(f"bad partition token {tok!r}") from None
            if k <= 0 or j < 0:
                raise ParseError(f"bad partition token {tok!r}")
            parts.extend([k] * j)
        return cls(parts)

    @property
    def n(self):
        return sum(self)

    @property
    def parts(self):
        return tuple(self)

    def multiplicities(self):
        return Counter(self)

    def __str__(self):
        return ",".join(map(str, self))

    def __repr__(self):
        return f"Partition({str(self)!r})"


def _as_partition(x):
    return x if isinstance(x, Partition) else Partition(x)


def cycle_type(g):
    return Partition(len(c) for c in g.cycles())


# -- comb relation ----------------------------------------------------------


def _from_counts(counts):
    parts = []
    for k in sorted(counts, reverse=True):
        parts.extend([k] * counts[k])
    return Partition(parts)


def comb_normal_form(lam, p, m):
    """Apply forward moves (p^m parts k -> p^(m-1) parts kp) at the smallest size until none applies."""
    counts = Counter(_as_partition(lam))
    big, small = p**m, p ** (m - 1)
    changed = True
    while changed:
        changed = False
        for k in sorted(counts):
            c = counts[k]
            if c >= big:
                times = c // big
                counts[k] = c - times * big
                counts[k * p] += times * small
                if not counts[k]:
                    del counts[k]
                changed = True
                break
    return _from_counts(counts)


def _neighbours(lam, p, m):
    counts = Counter(lam)
    big, small = p**m, p ** (m - 1)
    out = []
    for k, c in counts.items():
        if c >= big:
            new = counts.copy()
            new[k] -= big
            new[k * p] += small
            out.append(_from_counts(+new))
        if k % p == 0 and c >= small:
            new = counts.copy()
            new[k] -= small
            new[k // p] += big
            out.append(_from_counts(+new))
    return out


def comb_class_bfs(lam, p, m):
    """All partitions reachable from lam by forward and backward moves."""
    lam = _as_partition(lam)
    seen = {lam}
    queue = deque([lam])
    while queue:
        cur = queue.popleft()
        for nxt in _neighbours(cur, p, m):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def comb_equivalent(lam, mu, p, m, oracle=False):
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.n != mu.n:
        raise SizeMismatch(f"{lam} and {mu} have different sizes")
    if oracle:
        return mu in comb_class_bfs(lam, p, m)
    return comb_normal_form(lam, p, m) == comb_normal_form(mu, p, m)


# -- row decompositions and Young permutation characters -------------------


def count_row_decompositions(lam, mu):
    """Maps from the (labeled) rows of mu to the rows of lam whose fibre lengths fill each row."""
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.n != mu.n:
        raise SizeMismatch(f"{lam} and {mu} have different sizes")
    return _rd(tuple(lam), tuple(sorted(Counter(mu).items())))


@lru_cache(maxsize=None)
def _rd(rows, avail):
    """Count fillings of ``rows`` using the multiset ``avail`` of labeled parts.

    Each choice of sub-multiset for the first row is weighted by the number of
    ways to pick that many labeled parts of each size.
    """
    if not rows:
        return 1 if not avail else 0
    target, rest = rows[0], rows[1:]
    total = 0
    sizes = [k for k, _ in avail]
    counts = [c for _, c in avail]

    def pick(i, remaining, chosen, weight):
        nonlocal total
        if remaining == 0:
            used = chosen + [0] * (len(sizes) - len(chosen))
            left = tuple((sizes[t], counts[t] - used[t]) for t in range(len(sizes)) if counts[t] - used[t])
            total += weight * _rd(rest, left)
            return
        if i == len(sizes):
            return
        k = sizes[i]
        for j in range(min(counts[i], remaining // k) + 1):
            chosen.append(j)
            pick(i + 1, remaining - j * k, chosen, weight * comb(counts[i], j))
            chosen.pop()

    pick(0, target, [], 1)
    return total


def m_character_value(lam, mu, bound=M_VALUE_BOUND):
    """Number of ordered set partitions of blocks sized lam fixed by a permutation of cycle type mu.

    Brute force over all multinomial(n; lam) set partitions, so only meant
    for small n.
    """
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.n != mu.n:
        raise SizeMismatch(f"{lam} and {mu} have different sizes")
    n = lam.n
    if n > bound:
        raise BoundExceeded(f"n = {n} exceeds the enumeration bound {bound}")
    if n == 0:
        return 1
    sigma = []
    start = 0
    for k in mu:
        sigma.extend(range(start + 1, start + k))
        sigma.append(start)
        start += k
    sigma = np.array(sigma, dtype=np.int64)
    # a word w assigns block w[i] to point i; sigma fixes the set partition iff w[sigma[i]] = w[i]
    word = []
    for b, k in enumerate(lam):
        word.extend([b] * k)
    count = 0
    batch = []
    for w in _distinct_permutations(word):
        batch.append(w)
        if len(batch) == 65536:
            count += _count_fixed(batch, sigma)
            batch = []
    if batch:
        count += _count_fixed(batch, sigma)
    return count


def _count_fixed(batch, sigma):
    words = np.array(batch, dtype=np.int8)
    return int((words[:, sigma] == words).all(axis=1).sum())


def _distinct_permutations(word):
    """Distinct rearrangements of ``word`` in lexicographic order."""
    a = sorted(word)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


# -- verifiers --------------------------------------------------------------


def verify_lemma_4_6(xi, k, m, p):
    """Check M^lam_mu = M^lam_nu - p^m mod p^(m+1) for the axe-head shapes built from xi."""
    xi = _as_partition(xi)
    n = xi.n + k * p**m
    if n - p * k < k:
        raise InvalidShape(f"n - pk = {n - p * k} is smaller than k = {k}")
    mu = Partition(tuple(xi) + (k,) * p**m)
    nu = Partition(tuple(xi) + (p * k,) * p ** (m - 1))
    lam = Partition((n - p * k,) + (k,) * p)
    a = count_row_decompositions(lam, mu)
    b = count_row_decompositions(lam, nu)
    mod = p ** (m + 1)
    ok = (a - (b - p**m)) % mod == 0
    return Report(
        "lemma46",
        f"sym:{n}",
        p,
        m,
        passed=ok,
        details={"xi": str(xi), "k": k, "lambda": str(lam), "mu": str(mu), "nu": str(nu), "M_mu": a, "M_nu": b},
        counterexample=None if ok else {"M_mu": a, "M_nu": b, "modulus": mod},
    )


def verify_prop_4_2(n, p, m, bound=PROP_4_2_BOUND):
    """Compare comb equivalence, ~_m and depth >= m on all pairs of partitions of n."""
    if n > bound:
        raise BoundExceeded(f"n = {n} exceeds the bound {bound}")
    G = symmetric(n, order_cap=max(factorial(n), 1))
    U = unramified_for(G, p)
    D = _depths(G, p)
    blocks = sim_m(G, p, m)
    classes = G.conjugacy_classes()
    types = [cycle_type(c.representative) for c in classes]
    gamma_of = {}
    for c, gc in enumerate(U.gamma_classes):
        for j in gc.classes:
            gamma_of[j] = c
    block_of = {}
    for b, block in enumerate(blocks.blocks):
        for j in block:
            block_of[j] = b
    comb_class = {}
    for t in types:
        if t not in comb_class:
            members = comb_class_bfs(t, p, m)
            for u in members:
                comb_class[u] = t
    mismatches = []
    k = len(classes)
    agree = 0
    for i in range(k):
        for j in range(i + 1, k):
            rel_comb = comb_class[types[i]] == comb_class[types[j]]
            rel_sim = block_of[i] == block_of[j]
            rel_depth = D[gamma_of[i], gamma_of[j]] >= m
            if rel_comb == rel_sim == rel_depth:
                agree += 1
            else:
                mismatches.append([str(types[i]), str(types[j]), rel_comb, rel_sim, rel_depth])
    return Report(
        "prop42",
        G.name,
        p,
        m,
        passed=not mismatches,
        details={"pairs": k * (k - 1) // 2, "agree": agree},
        counterexample=mismatches or None,
    )

