"""
Exact complex character tables.

Two engines: Burnside-Dixon over a prime field for arbitrary permutation
groups, and Murnaghan-Nakayama for symmetric groups.  Every table is
checked against both orthogonality relations in exact cyclotomic
arithmetic before it is returned.
"""

import json
from functools import lru_cache
from math import factorial, isqrt, lcm

import numpy as np

from . import modlinalg
from .arith import is_prime, primitive_root
from .cyclotomic import CycNumber, _power_rows, euler_phi, from_exponents, galois_apply, lift
from .errors import (
    BoundExceeded,
    InternalInconsistency,
    OrbitActionUndefined,
    SchemaError,
    UnsupportedParameter,
)
from .groups import ConjClass, GroupElement, class_names

MN_BOUND = 20

__all__ = [
    "CharacterTable",
    "dixon_prime",
    "dixon_table",
    "mn_table",
    "mn_character",
    "partitions",
    "class_mult_coefficient",
    "class_mult_tensor",
    "character_table",
    "check_orthogonality",
    "same_up_to_permutation",
    "save_table",
    "load_table",
]


class CharacterTable:
    """Irreducible characters (rows) on conjugacy classes (columns).

    Column 0 is the identity class, so ``degrees`` reads off column 0.
    """

    def __init__(self, classes, characters, order, exponent, group=None, group_name=""):
        self.classes = tuple(classes)
        self.characters = tuple(tuple(row) for row in characters)
        self.order = int(order)
        self.exponent = int(exponent)
        self.group = group
        self.group_name = group_name or (group.name if group is not None else "")
        self._galois_cols = {}
        self._galois_rows = {}

    def __len__(self):
        return len(self.classes)

    def __repr__(self):
        return f"CharacterTable({self.group_name}, {len(self)} classes)"

    @property
    def degrees(self):
        return [int(row[0].to_fraction()) for row in self.characters]

    @property
    def class_sizes(self):
        return [c.size for c in self.classes]

    def column(self, j):
        return tuple(row[j] for row in self.characters)

    def _unit(self, s):
        return s % self.exponent if self.exponent > 1 else 1

    def galois_class_map(self, s):
        """j -> index of the class of g_j**s, read off the Galois action on columns."""
        key = self._unit(s)
        if key not in self._galois_cols:
            cols = {self.column(j): j for j in range(len(self))}
            out = []
            for j in range(len(self)):
                image = tuple(galois_apply(v, s) for v in self.column(j))
                if image not in cols:
                    raise OrbitActionUndefined(f"no column equals the image of column {j} under s={s}")
                out.append(cols[image])
            self._galois_cols[key] = out
        return self._galois_cols[key]

    def galois_row_map(self, s):
        """i -> index of the character chi_i^s with chi^s(g) = chi(g^s)."""
        key = self._unit(s)
        if key not in self._galois_rows:
            rows = {row: i for i, row in enumerate(self.characters)}
            out = []
            for i, row in enumerate(self.characters):
                image = tuple(galois_apply(v, s) for v in row)
                if image not in rows:
                    raise OrbitActionUndefined(f"chi_{i}^{s} is not a row of the table")
                out.append(rows[image])
            self._galois_rows[key] = out
        return self._galois_rows[key]

    def to_json(self):
        return {
            "group": self.group_name,
            "order": self.order,
            "exponent": self.exponent,
            "classes": [
                {"rep": list(c.representative.images), "size": c.size, "order": c.order}
                for c in self.classes
            ],
            "characters": [[v.to_json() for v in row] for row in self.characters],
        }

    @classmethod
    def from_json(cls, data, validate=False):
        if not isinstance(data, dict):
            raise SchemaError("table must be a JSON object")
        missing = {"group", "order", "exponent", "classes", "characters"} - set(data)
        if missing:
            raise SchemaError(f"table is missing {sorted(missing)}")
        order, exponent = data["order"], data["exponent"]
        if not all(isinstance(v, int) and v >= 1 for v in (order, exponent)):
            raise SchemaError("'order' and 'exponent' must be positive integers")
        raw_classes, raw_chars = data["classes"], data["characters"]
        if not isinstance(raw_classes, list) or not isinstance(raw_chars, list):
            raise SchemaError("'classes' and 'characters' must be lists")
        k = len(raw_classes)
        if k == 0 or len(raw_chars) != k or any(not isinstance(r, list) or len(r) != k for r in raw_chars):
            raise SchemaError("character matrix must be square with one column per class")
        reps, sizes, orders = [], [], []
        for c in raw_classes:
            if not isinstance(c, dict) or {"rep", "size", "order"} - set(c):
                raise SchemaError(f"bad class record {c!r}")
            try:
                rep = GroupElement(c["rep"])
            except (TypeError, ValueError):
                raise SchemaError(f"class representative {c['rep']!r} is not a permutation") from None
            if not isinstance(c["size"], int) or not isinstance(c["order"], int):
                raise SchemaError(f"bad class record {c!r}")
            if rep.order() != c["order"]:
                raise SchemaError(f"class order {c['order']} does not match its representative")
            reps.append(rep)
            sizes.append(c["size"])
            orders.append(c["order"])
        if orders[0] != 1 or sizes[0] != 1:
            raise SchemaError("the first class must be the identity")
        if sum(sizes) != order:
            raise SchemaError("class sizes do not add up to the group order")
        names = class_names(orders)
        classes = [
            ConjClass(index=i, representative=reps[i], size=sizes[i], order=orders[i], name=names[i])
            for i in range(k)
        ]
        chars = [[CycNumber.from_json(v) for v in row] for row in raw_chars]
        table = cls(classes, chars, order, exponent, group_name=str(data["group"]))
        if validate:
            check_orthogonality(table)
        return table

    def __eq__(self, other):
        if not isinstance(other, CharacterTable):
            return NotImplemented
        return (
            self.order == other.order
            and self.characters == other.characters
            and [(c.representative, c.size, c.order) for c in self.classes]
            == [(c.representative, c.size, c.order) for c in other.classes]
        )

    __hash__ = None


def save_table(table, path):
    with open(path, "w") as fh:
        json.dump(table.to_json(), fh)
        fh.write("\n")


def load_table(path, validate=False):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read table {path}: {exc}") from None
    return CharacterTable.from_json(data, validate=validate)


# -- orthogonality ----------------------------------------------------------


def _sparse_forms(table):
    """Integer power-basis coordinates of every entry at one common conductor."""
    cond = lcm(*(v.conductor for row in table.characters for v in row))
    forms = []
    for row in table.characters:
        out = []
        for v in row:
            w = lift(v, cond)
            if not w.is_integral():
                raise InternalInconsistency(f"character value {v} is not an algebraic integer")
            out.append([(i, c) for i, c in enumerate(w.numerators) if c])
        forms.append(out)
    return cond, forms


def _gram(vectors, weights, cond):
    """Hermitian Gram matrix sum_j w_j x_j conj(y_j) of sparse group-ring vectors.

    ``vectors[a][j]`` is a list of (exponent, coefficient) pairs meaning
    sum c * zeta^t.  Returns reduced coordinates, shape (n, n, phi(cond)).
    """
    n = len(vectors)
    cols = len(weights)
    per_col = []
    for j in range(cols):
        ts, cs, owners = [], [], []
        for a in range(n):
            for t, c in vectors[a][j]:
                ts.append(t)
                cs.append(c)
                owners.append(a)
        per_col.append((np.array(ts, dtype=np.int64), np.array(cs, dtype=np.int64), np.array(owners, dtype=np.int64)))
    reduce = np.zeros((cond, euler_phi(cond)), dtype=np.int64)
    for t, row in enumerate(_power_rows(cond)):
        for i, c in row:
            reduce[t, i] = c
    out = np.zeros((n, n, euler_phi(cond)), dtype=np.int64)
    for a in range(n):
        acc = np.zeros((n, cond), dtype=np.int64)
        for j in range(cols):
            entries = vectors[a][j]
            if not entries:
                continue
            ts, cs, owners = per_col[j]
            if not len(ts):
                continue
            ta = np.array([t for t, _ in entries], dtype=np.int64)
            ca = np.array([c for _, c in entries], dtype=np.int64) * weights[j]
            diff = (ta[:, None] - ts[None, :]) % cond
            w = ca[:, None] * cs[None, :]
            own = np.broadcast_to(owners[None, :], diff.shape)
            np.add.at(acc, (own.ravel(), diff.ravel()), w.ravel())
        out[a] = acc @ reduce
    return out


def check_orthogonality(table, forms=None):
    """Raise InternalInconsistency unless both orthogonality relations hold exactly."""
    k = len(table)
    if forms is None:
        cond, forms = _sparse_forms(table)
    else:
        cond = table.exponent
    sizes = table.class_sizes
    gram = _gram(forms, sizes, cond)
    expected = np.zeros_like(gram)
    for i in range(k):
        expected[i, i, 0] = table.order
    if not np.array_equal(gram, expected):
        bad = np.argwhere((gram != expected).any(axis=2))[0]
        raise InternalInconsistency(f"row orthogonality fails for characters {tuple(int(b) for b in bad)}")
    transposed = [[forms[i][j] for i in range(k)] for j in range(k)]
    gram = _gram(transposed, [1] * k, cond)
    expected = np.zeros_like(gram)
    for j in range(k):
        expected[j, j, 0] = table.order // sizes[j]
    if not np.array_equal(gram, expected):
        bad = np.argwhere((gram != expected).any(axis=2))[0]
        raise InternalInconsistency(f"column orthogonality fails for classes {tuple(int(b) for b in bad)}")


# -- Burnside-Dixon ---------------------------------------------------------


def dixon_prime(order, exponent):
    """Smallest prime ell = 1 mod exponent with ell > 2 sqrt(order)."""
    ell = exponent + 1
    while not (is_prime(ell) and ell * ell > 4 * order):
        ell += exponent
    return ell


def class_mult_tensor(G):
    """a[i, j, k] = #{(x, y) in C_i x C_j : x y = z} for a fixed z in C_k."""
    classes = G.conjugacy_classes()
    k = len(classes)
    cls = G.class_of
    inv_rows = G.array[G.inverses]
    a = np.zeros((k, k, k), dtype=np.int64)
    for kk, c in enumerate(classes):
        z = np.array(c.representative.images, dtype=np.int64)
        y = G.lookup_rows(inv_rows[:, z])
        counts = np.zeros((k, k), dtype=np.int64)
        np.add.at(counts, (cls, cls[y]), 1)
        a[:, :, kk] = counts
    return a


def class_mult_coefficient(G, i, j, k):
    classes = G.conjugacy_classes()
    z = classes[k].representative
    members_j = classes[j].members
    count = 0
    for x in classes[i].members:
        y = G.element(x).inverse() * z
        if G.index(y) in members_j:
            count += 1
    return count


def _split(spaces, mat, ell):
    """Refine each invariant subspace into eigenspaces of ``mat``."""
    out = []
    for basis, pivots in spaces:
        d = basis.shape[1]
        if d == 1:
            out.append((basis, pivots))
            continue
        restricted = modlinalg.matmul(mat, basis, ell)[pivots]
        eigen = modlinalg.roots(modlinalg.charpoly(restricted, ell), ell)
        total = 0
        for lam in eigen:
            shifted = (restricted - lam * np.eye(d, dtype=np.int64)) % ell
            null = modlinalg.nullspace(shifted, ell)
            sub = modlinalg.matmul(basis, null, ell)
            sub, piv = modlinalg.column_echelon(sub, ell)
            out.append((sub, piv))
            total += sub.shape[1]
        if total != d:
            raise InternalInconsistency("class matrix is not diagonalizable over the Dixon prime")
    return out


def _class_power_map(G, max_power):
    """pm[j, u] = class index of rep_j ** u for 0 <= u < max_power."""
    classes = G.conjugacy_classes()
    reps = np.array([c.representative.images for c in classes], dtype=np.int64).reshape(len(classes), G.degree)
    power = np.tile(np.arange(G.degree, dtype=np.int64), (len(classes), 1))
    pm = np.zeros((len(classes), max_power), dtype=np.int64)
    cls = G.class_of
    for u in range(max_power):
        pm[:, u] = cls[G.lookup_rows(power)]
        power = np.take_along_axis(power, reps, axis=1)
    return pm


def _simplify(v):
    return CycNumber.rational(v.to_fraction()) if v.is_rational() else v


def dixon_table(G):
    """Irreducible characters of G by simultaneous diagonalization over F_ell."""
    classes = G.conjugacy_classes()
    k = len(classes)
    order = G.order
    exponent = G.exponent
    sizes = [c.size for c in classes]
    ell = dixon_prime(order, exponent)
    if not modlinalg.fits_int64(ell, max(k, exponent)):
        raise InternalInconsistency(f"Dixon prime {ell} too large for int64 arithmetic")
    a = class_mult_tensor(G)
    if not np.array_equal(a.sum(axis=(0, 1)), np.full(k, order)):
        raise InternalInconsistency("class multiplication coefficients do not count all pairs")
    mats = [a[i] % ell for i in range(k)]

    spaces = [(np.eye(k, dtype=np.int64), list(range(k)))]
    combo = np.zeros((k, k), dtype=np.int64)
    for i in range(1, k):
        combo = (combo + pow(3, i, ell) * mats[i]) % ell
    for mat in [combo] + mats[1:]:
        if all(b.shape[1] == 1 for b, _ in spaces):
            break
        spaces = _split(spaces, mat, ell)
    if len(spaces) != k or any(b.shape[1] != 1 for b, _ in spaces):
        raise InternalInconsistency("class matrices did not split into one-dimensional eigenspaces")

    inv_class = [G.class_index(c.representative.inverse()) for c in classes]
    size_inv = [pow(s, -1, ell) for s in sizes]
    chi_mod = np.zeros((k, k), dtype=np.int64)
    degrees = []
    for row, (basis, _) in enumerate(spaces):
        v = basis[:, 0] % ell
        if v[0] == 0:
            raise InternalInconsistency("eigenvector vanishes on the identity class")
        v = (v * pow(int(v[0]), -1, ell)) % ell
        s = 0
        for j in range(k):
            s = (s + int(v[j]) * int(v[inv_class[j]]) * size_inv[j]) % ell
        target = (order * pow(s, -1, ell)) % ell
        cands = [d for d in range(1, isqrt(order) + 1) if (d * d - target) % ell == 0 and order % d == 0]
        if len(cands) != 1:
            raise InternalInconsistency(f"cannot recover a character degree (candidates {cands})")
        deg = cands[0]
        degrees.append(deg)
        chi_mod[row] = [(int(v[j]) * deg * size_inv[j]) % ell for j in range(k)]

    z = pow(primitive_root(ell), (ell - 1) // exponent, ell)
    max_order = max(c.order for c in classes)
    pm = _class_power_map(G, max_order)
    forms = [[None] * k for _ in range(k)]
    for j, c in enumerate(classes):
        o = c.order
        step = exponent // o
        zo = pow(z, step, ell)
        dft = np.array([[pow(zo, (-t * u) % o, ell) for t in range(o)] for u in range(o)], dtype=np.int64)
        vals = chi_mod[:, pm[j, :o]]
        mult = (modlinalg.matmul(vals, dft, ell) * pow(o, -1, ell)) % ell
        for i in range(k):
            m = mult[i]
            if m.max() > degrees[i] or int(m.sum()) != degrees[i]:
                raise InternalInconsistency("eigenvalue multiplicities out of range")
            forms[i][j] = [(t * step, int(m[t])) for t in range(o) if m[t]]

    rows = [[_simplify(from_exponents(exponent, forms[i][j])) for j in range(k)] for i in range(k)]
    trivial = [[(0, 1)]] * k

    def key(i):
        return (degrees[i], forms[i] != trivial, tuple(v.sort_key() for v in rows[i]))

    perm = sorted(range(k), key=key)
    table = CharacterTable(classes, [rows[i] for i in perm], order, exponent, group=G)
    check_orthogonality(table, forms=[forms[i] for i in perm])
    return table


# -- Murnaghan-Nakayama -----------------------------------------------------


def partitions(n):
    """Partitions of n in reverse lexicographic order, starting with (n,)."""
    if n == 0:
        yield ()
        return
    a = [n]
    while True:
        yield tuple(a)
        i = len(a) - 1
        while i >= 0 and a[i] == 1:
            i -= 1
        if i < 0:
            return
        rest = a[i] + len(a) - i - 1
        k = a[i] - 1
        a = a[:i]
        while rest >= k:
            a.append(k)
            rest -= k
        if rest:
            a.append(rest)


@lru_cache(maxsize=None)
def mn_character(shape, cycles):
    """chi^shape at cycle type ``cycles`` (weakly decreasing), by border-strip removal."""
    if not cycles:
        return 1 if not shape else 0
    r, rest = cycles[0], cycles[1:]
    length = len(shape)
    beta = [shape[i] + length - 1 - i for i in range(length)]
    occupied = set(beta)
    total = 0
    for idx, b in enumerate(beta):
        nb = b - r
        if nb < 0 or nb in occupied:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new_beta = sorted(beta[:idx] + [nb] + beta[idx + 1:], reverse=True)
        new_shape = tuple(x - (length - 1 - i) for i, x in enumerate(new_beta))
        new_shape = tuple(x for x in new_shape if x)
        val = mn_character(new_shape, rest)
        total += -val if height % 2 else val
    return total


def _partition_label(part):
    out = []
    i = 0
    while i < len(part):
        j = i
        while j < len(part) and part[j] == part[i]:
            j += 1
        out.append(f"{part[i]}^{j - i}" if j - i > 1 else str(part[i]))
        i = j
    return ".".join(out)


def _centralizer_order(part):
    z = 1
    counts = {}
    for k in part:
        counts[k] = counts.get(k, 0) + 1
    for k, m in counts.items():
        z *= k**m * factorial(m)
    return z


def _cycle_type_element(part):
    n = sum(part)
    cycles = []
    start = 0
    for k in part:
        cycles.append(tuple(range(start, start + k)))
        start += k
    return GroupElement.from_cycles(n, cycles)


def mn_table(n, bound=MN_BOUND):
    """Character table of S_n with rows and columns indexed by partitions in reverse lex order."""
    if n < 1:
        raise BoundExceeded("mn_table needs n >= 1")
    if n > bound:
        raise BoundExceeded(f"mn_table({n}) exceeds the bound {bound}")
    parts = list(partitions(n))
    classes = []
    for idx, mu in enumerate(parts):
        classes.append(
            ConjClass(
                index=idx,
                representative=_cycle_type_element(mu),
                size=factorial(n) // _centralizer_order(mu),
                order=lcm(*mu),
                name=_partition_label(mu),
            )
        )
    # the identity class (1^n) is last in reverse lex order; move it to the front
    col_order = [len(parts) - 1] + list(range(len(parts) - 1))
    classes = [classes[j] for j in col_order]
    classes = [
        ConjClass(index=i, representative=c.representative, size=c.size, order=c.order, name=c.name)
        for i, c in enumerate(classes)
    ]
    chars = []
    for lam in parts:
        chars.append([CycNumber.rational(mn_character(lam, parts[j])) for j in col_order])
    exponent = lcm(*range(1, n + 1))
    table = CharacterTable(classes, chars, factorial(n), exponent, group_name=f"sym:{n}")
    table.row_partitions = parts
    table.column_partitions = [parts[j] for j in col_order]
    check_orthogonality(table)
    return table


def _cycle_type(g):
    return tuple(sorted((len(c) for c in g.cycles()), reverse=True))


def character_table(G, engine="auto"):
    """Cached character table of G whose columns follow G.conjugacy_classes()."""
    key = ("chartab", engine)
    cached = G._cache.get(key)
    if cached is not None:
        return cached
    is_sym = G.family is not None and G.family[0] == "sym"
    if engine == "mn" and not is_sym:
        raise UnsupportedParameter("the Murnaghan-Nakayama engine needs a symmetric group")
    use_mn = is_sym and engine in ("mn", "auto")
    if use_mn:
        n = G.degree
        t = mn_table(n)
        where = {mu: j for j, mu in enumerate(t.column_partitions)}
        classes = G.conjugacy_classes()
        cols = [where[_cycle_type(c.representative)] for c in classes]
        chars = [[row[j] for j in cols] for row in t.characters]
        table = CharacterTable(classes, chars, G.order, G.exponent, group=G)
        table.row_partitions = t.row_partitions
    else:
        table = dixon_table(G)
    G._cache[key] = table
    return table


def same_up_to_permutation(t1, t2, column_key=None):
    """True when the tables agree after matching columns by ``column_key`` and rows as a set."""
    if column_key is None:
        column_key = lambda c: _cycle_type(c.representative)  # noqa: E731
    if len(t1) != len(t2):
        return False
    k1 = [column_key(c) for c in t1.classes]
    k2 = [column_key(c) for c in t2.classes]
    if len(set(k1)) != len(k1) or sorted(k1) != sorted(k2):
        return False
    where = {key: j for j, key in enumerate(k2)}
    perm = [where[key] for key in k1]
    cond = lcm(t1.exponent, t2.exponent)
    rows1 = sorted(tuple(lift(v, cond).sort_key() for v in row) for row in t1.characters)
    rows2 = sorted(tuple(lift(row[j], cond).sort_key() for j in perm) for row in t2.characters)
    return rows1 == rows2
