"""
Unramified character tables: sums of Gamma-orbits of irreducible characters
evaluated on Gamma-conjugacy classes.

Everything here works from a CharacterTable alone.  The Gamma action on
classes is read off the Galois action on columns (sigma_s chi(g) = chi(g^s)),
so tables loaded from disk need no group.
"""

import csv
import io
from dataclasses import dataclass

from .arith import split_prime_power
from .cyclotomic import CycNumber, descend, lift
from .errors import InternalInconsistency, OrbitActionUndefined
from .groups import GammaClass, gamma_context_for_order, gamma_generators
from .unionfind import UnionFind

__all__ = [
    "OrbitRow",
    "UnramifiedTable",
    "unramified_table",
    "is_constant_on_gamma_classes",
    "gamma_classes_from_table",
]


@dataclass(frozen=True)
class OrbitRow:
    orbit: tuple
    values: tuple


class UnramifiedTable:
    """Orbit-sum rows over Gamma-class columns, values stored at conductor r."""

    def __init__(self, table, p, e, r, gamma_classes, rows, class_values):
        self.table = table
        self.group = table.group
        self.p = p
        self.e = e
        self.r = r
        self.gamma_classes = tuple(gamma_classes)
        self.rows = tuple(rows)
        # orbit sums on every conjugacy class, kept for constancy checks
        self.class_values = tuple(tuple(v) for v in class_values)

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return f"UnramifiedTable({self.table.group_name}, p={self.p}, {len(self.rows)} rows)"

    @property
    def values(self):
        return [list(row.values) for row in self.rows]

    def column(self, c):
        return [row.values[c] for row in self.rows]

    def column_names(self):
        classes = self.table.classes
        return ["+".join(classes[j].name for j in gc.classes) for gc in self.gamma_classes]

    def gamma_class_of(self, class_index):
        for c, gc in enumerate(self.gamma_classes):
            if class_index in gc.classes:
                return c
        raise IndexError(class_index)

    def to_json(self):
        base = self.table.to_json()
        return {
            "group": base["group"],
            "order": base["order"],
            "exponent": base["exponent"],
            "p": self.p,
            "e": self.e,
            "r": self.r,
            "classes": base["classes"],
            "gamma_classes": [list(gc.classes) for gc in self.gamma_classes],
            "gamma_class_representatives": [gc.representative for gc in self.gamma_classes],
            "rows": [
                {"orbit": list(row.orbit), "values": [v.to_json() for v in row.values]}
                for row in self.rows
            ],
        }

    def to_csv(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["orbit"] + self.column_names())
        for row in self.rows:
            writer.writerow([" ".join(map(str, row.orbit))] + [v.format() for v in row.values])
        return out.getvalue()


def is_constant_on_gamma_classes(row, gamma_classes):
    """True iff ``row`` (indexed by conjugacy class) agrees within each Gamma-class."""
    for gc in gamma_classes:
        members = gc.classes if isinstance(gc, GammaClass) else tuple(gc)
        first = row[members[0]]
        if any(row[j] != first for j in members[1:]):
            return False
    return True


def _gamma_setup(table, p):
    ctx = gamma_context_for_order(table.order, p)
    gens = gamma_generators(ctx)
    col_maps = [table.galois_class_map(s) for s in gens]
    return ctx, gens, col_maps


def gamma_classes_from_table(table, p):
    """Gamma-conjugacy classes of the group of ``table``, from its columns."""
    _, _, col_maps = _gamma_setup(table, p)
    return _gamma_blocks(table, col_maps)


def _gamma_blocks(table, col_maps):
    k = len(table)
    uf = UnionFind(k)
    for cmap in col_maps:
        for j in range(k):
            uf.union(j, cmap[j])
    out = []
    for block in uf.blocks():
        rep = min(block, key=lambda j: table.classes[j].representative.images)
        out.append(GammaClass(classes=tuple(block), representative=rep))
    return out


def unramified_table(table, p):
    ctx, gens, col_maps = _gamma_setup(table, p)
    k = len(table)
    gclasses = _gamma_blocks(table, col_maps)

    rows_index = {row: i for i, row in enumerate(table.characters)}
    uf = UnionFind(k)
    for cmap in col_maps:
        for i, row in enumerate(table.characters):
            image = tuple(row[cmap[j]] for j in range(k))
            target = rows_index.get(image)
            if target is None:
                raise OrbitActionUndefined(f"chi_{i}^s is not a row of the table")
            uf.union(i, target)
    trivial = tuple(CycNumber.rational(1) for _ in range(k))
    orbits = sorted(uf.blocks(), key=lambda b: (table.characters[b[0]] != trivial, b[0]))

    _, r_exp = split_prime_power(table.exponent, p)
    class_values = []
    rows = []
    for orbit in orbits:
        sums = [sum((table.characters[i][j] for i in orbit), CycNumber(table.exponent)) for j in range(k)]
        if not is_constant_on_gamma_classes(sums, gclasses):
            raise InternalInconsistency(f"orbit sum over {orbit} is not constant on Gamma-classes")
        descended = [lift(descend(v, r_exp), ctx.r) for v in sums]
        class_values.append(descended)
        rows.append(OrbitRow(orbit=tuple(orbit), values=tuple(descended[gc.representative] for gc in gclasses)))
    if len(rows) != len(gclasses):
        raise InternalInconsistency(
            f"{len(rows)} orbit sums but {len(gclasses)} Gamma-classes; the input table is not a full table"
        )
    return UnramifiedTable(table, p, ctx.e, ctx.r, gclasses, rows, class_values)
