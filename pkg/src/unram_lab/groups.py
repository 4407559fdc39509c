"""
Finite permutation groups by full enumeration.

Every group is closed under its generators once, then all queries work on
the sorted element list (lexicographic on images, so index 0 is the
identity).  Bulk operations go through a numpy array of images and a
bytes-keyed index.
"""

import json
import os
import threading
from dataclasses import dataclass
from itertools import product
from math import factorial, gcd, lcm

import numpy as np

from .arith import is_prime, split_prime_power
from .errors import OrderCapExceeded, SchemaError, UnsupportedParameter
from .unionfind import UnionFind

DEFAULT_ORDER_CAP = 20000

__all__ = [
    "DEFAULT_ORDER_CAP",
    "GroupElement",
    "PermGroup",
    "ConjClass",
    "GammaContext",
    "GammaClass",
    "default_order_cap",
    "symmetric",
    "cyclic",
    "dihedral",
    "elementary_abelian",
    "heisenberg",
    "quaternion8",
    "direct_product",
    "from_file",
    "conjugacy_classes",
    "centralizer",
    "p_parts",
    "gamma_context",
    "gamma_context_for_order",
    "gamma_generators",
    "gamma_classes",
]


def default_order_cap():
    env = os.environ.get("UNRAM_LAB_ORDER_CAP")
    return int(env) if env else DEFAULT_ORDER_CAP


class GroupElement:
    """A permutation of 0..degree-1; ``(g * h)(i) = g(h(i))``."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @classmethod
    def identity(cls, degree):
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree, cycles):
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        a = self.images
        return GroupElement._trusted(tuple(a[i] for i in other.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return GroupElement._trusted(tuple(inv))

    def cycles(self):
        """Disjoint cycles including fixed points, each starting at its least point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(tuple(cyc))
        return out

    def __pow__(self, k):
        img = [0] * len(self.images)
        for cyc in self.cycles():
            n = len(cyc)
            s = k % n
            for t, i in enumerate(cyc):
                img[i] = cyc[(t + s) % n]
        return GroupElement._trusted(tuple(img))

    def order(self):
        return lcm(*(len(c) for c in self.cycles())) if self.images else 1

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True)
class ConjClass:
    index: int
    representative: GroupElement
    size: int
    order: int
    name: str
    members: frozenset = None

    def __repr__(self):
        return f"ConjClass({self.name}, size={self.size}, rep={self.representative!r})"


@dataclass(frozen=True)
class GammaContext:
    p: int
    e: int
    r: int
    order: int
    gamma: tuple


@dataclass(frozen=True)
class GammaClass:
    classes: tuple
    representative: int


def class_names(orders):
    """ATLAS-style labels: element order followed by a letter per order."""
    seen = {}
    names = []
    for o in orders:
        k = seen.get(o, 0)
        seen[o] = k + 1
        letters = ""
        k += 1
        while k:
            k, rem = divmod(k - 1, 26)
            letters = chr(ord("a") + rem) + letters
        names.append(f"{o}{letters}")
    return names


class PermGroup:
    """Permutation group given by generators, enumerated lazily."""

    def __init__(self, degree, generators, name="", order_cap=None):
        self.degree = int(degree)
        gens = []
        for g in generators:
            g = g if isinstance(g, GroupElement) else GroupElement(g)
            if g.degree != self.degree:
                raise ValueError(f"generator {g!r} has degree {g.degree}, expected {self.degree}")
            gens.append(g)
        self.generators = tuple(gens)
        self.name = name
        self.order_cap = default_order_cap() if order_cap is None else int(order_cap)
        self.family = None
        self._lock = threading.RLock()
        self._arr = None
        self._cache = {}

    def __repr__(self):
        return f"PermGroup({self.name or '?'}, degree={self.degree})"

    # -- enumeration ------------------------------------------------------

    def _ensure(self):
        if self._arr is not None:
            return
        with self._lock:
            if self._arr is None:
                self._enumerate()

    def _enumerate(self):
        d = self.degree
        ident = np.arange(d, dtype=np.int32)
        gens = [np.array(g.images, dtype=np.int32) for g in self.generators if not g.is_identity()]
        seen = {ident.tobytes(): 0}
        rows = [ident]
        frontier = ident[None, :]
        width = 4 * d
        while len(frontier):
            fresh = []
            for g in gens:
                prod_ = np.ascontiguousarray(g[frontier])
                raw = prod_.tobytes()
                for i in range(len(prod_)):
                    key = raw[i * width:(i + 1) * width]
                    if key not in seen:
                        seen[key] = len(rows)
                        rows.append(prod_[i])
                        fresh.append(prod_[i])
                if len(rows) > self.order_cap:
                    raise OrderCapExceeded(
                        f"{self.name or 'group'} has more than {self.order_cap} elements"
                    )
            frontier = np.array(fresh, dtype=np.int32).reshape(-1, d)
        arr = np.array(rows, dtype=np.int32).reshape(-1, d)
        if d:
            arr = arr[np.lexsort(arr.T[::-1])]
        arr = np.ascontiguousarray(arr)
        raw = arr.tobytes()
        self._bindex = {raw[i * width:(i + 1) * width]: i for i in range(len(arr))}
        self._elements = [GroupElement._trusted(tuple(int(v) for v in row)) for row in arr]
        self._arr = arr

    @property
    def order(self):
        self._ensure()
        return len(self._arr)

    @property
    def array(self):
        """Images of every element, one row per element index."""
        self._ensure()
        return self._arr

    @property
    def elements(self):
        self._ensure()
        return self._elements

    def element(self, i):
        self._ensure()
        return self._elements[i]

    def index(self, g):
        self._ensure()
        images = g.images if isinstance(g, GroupElement) else tuple(g)
        key = np.array(images, dtype=np.int32).tobytes()
        try:
            return self._bindex[key]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of {self.name}") from None

    def __contains__(self, g):
        try:
            self.index(g)
        except ValueError:
            return False
        return True

    def lookup_rows(self, rows):
        """Element indices of a 2-d array of images."""
        self._ensure()
        rows = np.ascontiguousarray(rows, dtype=np.int32)
        width = 4 * self.degree
        raw = rows.tobytes()
        bindex = self._bindex
        try:
            return np.fromiter(
                (bindex[raw[i * width:(i + 1) * width]] for i in range(len(rows))),
                dtype=np.int64,
                count=len(rows),
            )
        except KeyError:
            raise ValueError("permutation outside the group") from None

    def _cached(self, key, fn):
        val = self._cache.get(key)
        if val is None:
            self._ensure()
            with self._lock:
                val = self._cache.get(key)
                if val is None:
                    val = fn()
                    self._cache[key] = val
        return val

    @property
    def orders(self):
        return self._cached("orders", self._compute_orders)

    def _compute_orders(self):
        arr = self._arr
        n, d = arr.shape
        out = np.zeros(n, dtype=np.int64)
        ident = np.arange(d, dtype=np.int32)
        active = np.arange(n)
        power = arr.copy()
        t = 1
        while len(active):
            done = (power == ident).all(axis=1)
            out[active[done]] = t
            active = active[~done]
            power = np.take_along_axis(power[~done], arr[active], axis=1)
            t += 1
        return out

    @property
    def exponent(self):
        return int(lcm(*(int(o) for o in set(self.orders.tolist()))))

    @property
    def inverses(self):
        return self._cached("inverses", lambda: self.lookup_rows(np.argsort(self._arr, axis=1)))

    def multiply(self, i, j):
        return self.index(self._elements[i] * self._elements[j])

    def power(self, i, k):
        return self.index(self._elements[i] ** k)

    def is_abelian(self):
        return all(a * b == b * a for a in self.generators for b in self.generators)

    # -- conjugacy --------------------------------------------------------

    def conjugacy_classes(self):
        return self._cached("classes", self._compute_classes)

    def _compute_classes(self):
        arr = self._arr
        n = len(arr)
        uf = UnionFind(n)
        for g in self.generators:
            g = np.array(g.images, dtype=np.int32)
            ginv = np.argsort(g)
            conj = self.lookup_rows(g[arr[:, ginv]])
            for i, j in enumerate(conj.tolist()):
                uf.union(i, j)
        orders = self.orders
        blocks = uf.blocks()
        blocks.sort(key=lambda b: (int(orders[b[0]]), len(b), b[0]))
        names = class_names([int(orders[b[0]]) for b in blocks])
        classes = []
        class_of = np.empty(n, dtype=np.int64)
        for idx, (b, name) in enumerate(zip(blocks, names)):
            classes.append(
                ConjClass(
                    index=idx,
                    representative=self._elements[b[0]],
                    size=len(b),
                    order=int(orders[b[0]]),
                    name=name,
                    members=frozenset(b),
                )
            )
            class_of[b] = idx
        self._cache["class_of"] = class_of
        return tuple(classes)

    @property
    def class_of(self):
        self.conjugacy_classes()
        return self._cache["class_of"]

    def class_index(self, g):
        return int(self.class_of[self.index(g)])

    def class_power(self, j, s):
        """Index of the class containing rep_j ** s."""
        rep = self.conjugacy_classes()[j].representative
        return self.class_index(rep ** s)

    def centralizer_indices(self, g):
        self._ensure()
        g = np.array(g.images if isinstance(g, GroupElement) else g, dtype=np.int32)
        arr = self._arr
        return np.nonzero((arr[:, g] == g[arr]).all(axis=1))[0]


def conjugacy_classes(G):
    return list(G.conjugacy_classes())


def centralizer(G, g):
    return {G.element(int(i)) for i in G.centralizer_indices(g)}


def p_parts(g, p):
    """(g_s, g_u): the p-regular and p-power parts of g, both powers of g."""
    o = g.order()
    a, q = split_prime_power(o, p)
    pa = p ** a
    t = pow(pa, -1, q) if q > 1 else 0
    g_s = g ** (pa * t)
    g_u = g * g_s.inverse()
    return g_s, g_u


# -- Gamma ----------------------------------------------------------------


def gamma_context_for_order(order, p):
    if not is_prime(p):
        raise UnsupportedParameter(f"{p} is not prime")
    e, r = split_prime_power(order, p)
    gamma = tuple(s for s in range(1, order + 1) if gcd(s, order) == 1 and (s - 1) % r == 0)
    return GammaContext(p=p, e=e, r=r, order=order, gamma=gamma)


def gamma_context(G, p):
    return gamma_context_for_order(G.order, p)


def gamma_generators(ctx):
    """A small generating set of Gamma, chosen greedily in residue order."""
    n = ctx.order
    gens = []
    if n == 1:
        return gens
    span = {1}
    for s in ctx.gamma:
        if s in span:
            continue
        gens.append(s)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for t in gens:
                    y = (x * t) % n
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


def gamma_classes(G, p):
    """Gamma-conjugacy classes as unions of conjugacy-class indices."""
    ctx = gamma_context(G, p)
    classes = G.conjugacy_classes()
    uf = UnionFind(len(classes))
    gens = gamma_generators(ctx)
    for j in range(len(classes)):
        for s in gens:
            uf.union(j, G.class_power(j, s))
    out = []
    for block in uf.blocks():
        rep = min(block, key=lambda j: classes[j].representative.images)
        out.append(GammaClass(classes=tuple(block), representative=rep))
    return out


# -- builders -------------------------------------------------------------


def symmetric(n, order_cap=None):
    if n < 1:
        raise UnsupportedParameter("symmetric(n) needs n >= 1")
    cap = default_order_cap() if order_cap is None else order_cap
    if factorial(n) > cap:
        raise OrderCapExceeded(f"S{n} has {factorial(n)} elements, cap is {cap}")
    gens = []
    if n >= 2:
        gens.append(GroupElement.from_cycles(n, [(0, 1)]))
    if n >= 3:
        gens.append(GroupElement.from_cycles(n, [tuple(range(n))]))
    G = PermGroup(n, gens, name=f"sym:{n}", order_cap=cap)
    G.family = ("sym", n)
    return G


def cyclic(n, order_cap=None):
    if n < 1:
        raise UnsupportedParameter("cyclic(n) needs n >= 1")
    gen = GroupElement([(i + 1) % n for i in range(n)])
    G = PermGroup(n, [gen], name=f"cyc:{n}", order_cap=order_cap)
    G.family = ("cyc", n)
    return G


def dihedral(n, order_cap=None):
    """Symmetries of the regular n-gon, order 2n, acting on its vertices."""
    if n < 3:
        raise UnsupportedParameter("dihedral(n) needs n >= 3")
    rot = GroupElement([(i + 1) % n for i in range(n)])
    ref = GroupElement([(-i) % n for i in range(n)])
    G = PermGroup(n, [rot, ref], name=f"dih:{n}", order_cap=order_cap)
    G.family = ("dih", n)
    return G


def elementary_abelian(p, n, order_cap=None):
    """(Z/p)^n acting on n disjoint blocks of p points."""
    if not is_prime(p):
        raise UnsupportedParameter(f"{p} is not prime")
    if n < 1:
        raise UnsupportedParameter("elementary_abelian needs n >= 1")
    gens = []
    for b in range(n):
        img = list(range(p * n))
        for i in range(p):
            img[b * p + i] = b * p + (i + 1) % p
        gens.append(GroupElement(img))
    G = PermGroup(p * n, gens, name=f"elem:{p},{n}", order_cap=order_cap)
    G.family = ("elem", p, n)
    return G


def _regular(elements, mul, gens, name, order_cap):
    index = {x: i for i, x in enumerate(elements)}
    perms = [GroupElement([index[mul(g, x)] for x in elements]) for g in gens]
    return PermGroup(len(elements), perms, name=name, order_cap=order_cap)


def heisenberg(p, n, order_cap=None):
    """F_p^n x F_p^n x F_p with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+<a,b'>).

    Realized by its left-regular action on p^(2n+1) points.
    """
    if not is_prime(p):
        raise UnsupportedParameter(f"{p} is not prime")
    if p == 2:
        raise UnsupportedParameter("heisenberg(p, n) needs p odd")
    if n < 1:
        raise UnsupportedParameter("heisenberg(p, n) needs n >= 1")
    cap = default_order_cap() if order_cap is None else order_cap
    size = p ** (2 * n + 1)
    if size > cap:
        raise OrderCapExceeded(f"heis:{p},{n} has {size} elements, cap is {cap}")
    vecs = list(product(range(p), repeat=n))
    elements = [(a, b, c) for a in vecs for b in vecs for c in range(p)]

    def mul(x, y):
        a, b, c = x
        a2, b2, c2 = y
        dot = sum(u * v for u, v in zip(a, b2))
        return (
            tuple((u + v) % p for u, v in zip(a, a2)),
            tuple((u + v) % p for u, v in zip(b, b2)),
            (c + c2 + dot) % p,
        )

    zero = (0,) * n
    gens = []
    for i in range(n):
        unit = tuple(int(j == i) for j in range(n))
        gens.append((unit, zero, 0))
        gens.append((zero, unit, 0))
    G = _regular(elements, mul, gens, f"heis:{p},{n}", cap)
    G.family = ("heis", p, n)
    return G


_QUAT_UNIT = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion8(order_cap=None):
    """The unit quaternions {+-1, +-i, +-j, +-k} acting on themselves by left multiplication."""
    elements = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(x, y):
        s, u = _QUAT_UNIT[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    G = _regular(elements, mul, [(1, "i"), (1, "j")], "q8", order_cap)
    G.family = ("q8",)
    return G


def direct_product(G, H, order_cap=None):
    dg, dh = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(GroupElement(list(g.images) + [dg + i for i in range(dh)]))
    for h in H.generators:
        gens.append(GroupElement(list(range(dg)) + [dg + i for i in h.images]))
    cap = order_cap if order_cap is not None else max(G.order_cap, H.order_cap)
    return PermGroup(dg + dh, gens, name=f"prod:{G.name},{H.name}", order_cap=cap)


def from_file(path, order_cap=None):
    """Load ``{"name", "degree", "generators": [[images...], ...]}`` (0-based)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read group file {path}: {exc}") from None
    if not isinstance(data, dict) or not {"degree", "generators"} <= set(data):
        raise SchemaError("group file needs 'degree' and 'generators'")
    degree = data["degree"]
    if not isinstance(degree, int) or degree < 1:
        raise SchemaError("'degree' must be a positive integer")
    gens = data["generators"]
    if not isinstance(gens, list):
        raise SchemaError("'generators' must be a list")
    elems = []
    for g in gens:
        if not isinstance(g, list) or len(g) != degree or sorted(g) != list(range(degree)):
            raise SchemaError(f"generator {g!r} is not a permutation of 0..{degree - 1}")
        elems.append(GroupElement(g))
    name = data.get("name") or f"file:{path}"
    return PermGroup(degree, elems, name=str(name), order_cap=order_cap)
