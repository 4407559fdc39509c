import json
from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unram_lab import groups as g
from unram_lab.chartab import (
    CharacterTable,
    character_table,
    check_orthogonality,
    class_mult_coefficient,
    class_mult_tensor,
    dixon_prime,
    dixon_table,
    load_table,
    mn_character,
    mn_table,
    partitions,
    same_up_to_permutation,
    save_table,
)
from unram_lab.cyclotomic import CycNumber, root_of_unity
from unram_lab.errors import BoundExceeded, InternalInconsistency, SchemaError, UnsupportedParameter

GROUPS = [
    g.cyclic(1),
    g.cyclic(7),
    g.symmetric(3),
    g.symmetric(4),
    g.dihedral(5),
    g.dihedral(8),
    g.quaternion8(),
    g.heisenberg(3, 1),
    g.elementary_abelian(2, 3),
    g.direct_product(g.quaternion8(), g.cyclic(3)),
]


def hook_length_degree(shape):
    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    hooks = prod(shape[i] - j + conj[j] - i - 1 for i in range(len(shape)) for j in range(shape[i]))
    return factorial(n) // hooks


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_dixon_table_basic_properties(G):
    T = dixon_table(G)
    assert len(T) == len(G.conjugacy_classes())
    degrees = T.degrees
    assert all(G.order % d == 0 for d in degrees)
    assert sum(d * d for d in degrees) == G.order
    assert all(v == 1 for v in T.characters[0])
    assert degrees == sorted(degrees)
    assert all(v.is_integral() for row in T.characters for v in row)
    check_orthogonality(T)


def test_cyclic_p4_characters():
    for p in (2, 3):
        n = p**4
        G = g.cyclic(n)
        T = dixon_table(G)
        gen = g.GroupElement([(i + 1) % n for i in range(n)])
        col = G.class_index(gen)
        values = {T.characters[i][col] for i in range(n)}
        assert values == {root_of_unity(n, k) for k in range(n)}
        # every row is a homomorphism chi(g^a) = chi(g)^a
        for row in T.characters:
            z = row[col]
            for a in (2, 5):
                assert row[G.class_index(gen**a)] == prod([z] * a, start=CycNumber.rational(1))


def test_q8_degree_two_row():
    T = dixon_table(g.quaternion8())
    assert T.degrees == [1, 1, 1, 1, 2]
    assert list(T.characters[4]) == [2, -2, 0, 0, 0]


def test_heisenberg_degrees():
    assert dixon_table(g.heisenberg(3, 1)).degrees == [1] * 9 + [3, 3]


def test_dixon_prime():
    assert dixon_prime(24, 12) == 13
    ell = dixon_prime(81, 81)
    assert ell % 81 == 1 and ell * ell > 4 * 81


def test_class_mult_coefficients():
    G = g.symmetric(3)
    a = class_mult_tensor(G)
    classes = G.conjugacy_classes()
    k = len(classes)
    trans = next(c.index for c in classes if c.order == 2)
    assert a[trans, trans, 0] == 3
    assert class_mult_coefficient(G, trans, trans, 0) == 3
    for j in range(k):
        for kk in range(k):
            assert a[0, j, kk] == (1 if j == kk else 0)
    sizes = [c.size for c in classes]
    for i in range(k):
        for j in range(k):
            assert sum(a[i, j, kk] * sizes[kk] for kk in range(k)) == sizes[i] * sizes[j]
    A = class_mult_tensor(g.cyclic(6))
    assert set(A.flatten().tolist()) <= {0, 1}


def test_class_mult_tensor_matches_brute_force():
    G = g.dihedral(4)
    a = class_mult_tensor(G)
    k = len(G.conjugacy_classes())
    for i in range(k):
        for j in range(k):
            for kk in range(k):
                assert a[i, j, kk] == class_mult_coefficient(G, i, j, kk)


def test_partitions_order():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [len(list(partitions(n))) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_mn_table_4():
    T = mn_table(4)
    assert T.row_partitions == list(partitions(4))
    ident = [int(v.to_fraction()) for v in T.column(0)]
    col22 = T.column_partitions.index((2, 2))
    pairs = sorted(zip(ident, [int(v.to_fraction()) for v in T.column(col22)]))
    # identity column (1,1,2,3,3) against the 2^2 column (1,1,2,-1,-1)
    assert pairs == [(1, 1), (1, 1), (2, 2), (3, -1), (3, -1)]
    assert T.characters[T.row_partitions.index((2, 2))][0] == 2


@pytest.mark.parametrize("n", range(1, 9))
def test_mn_degrees_are_hook_lengths(n):
    T = mn_table(n)
    for shape, row in zip(T.row_partitions, T.characters):
        assert row[0] == hook_length_degree(shape)


def test_mn_known_values():
    assert mn_character((2, 2), (2, 2)) == 2
    assert mn_character((3, 1), (4,)) == -1
    assert mn_character((1, 1, 1), (3,)) == 1
    assert mn_character((2, 1), (3,)) == -1


@pytest.mark.parametrize("n", range(1, 7))
def test_dixon_equals_mn(n):
    G = g.symmetric(n)
    assert same_up_to_permutation(dixon_table(G), mn_table(n))


def test_mn_bound():
    with pytest.raises(BoundExceeded):
        mn_table(21)


def test_character_table_dispatch():
    G = g.symmetric(5)
    T = character_table(G)
    assert T is character_table(G)
    assert same_up_to_permutation(T, dixon_table(g.symmetric(5)))
    assert [c.index for c in T.classes] == list(range(7))
    with pytest.raises(UnsupportedParameter):
        character_table(g.cyclic(4), engine="mn")


def test_galois_maps_on_columns():
    G = g.cyclic(9)
    T = character_table(G)
    cmap = T.galois_class_map(2)
    for j, c in enumerate(G.conjugacy_classes()):
        assert cmap[j] == G.class_index(c.representative**2)


def test_save_load_round_trip(tmp_path):
    T = dixon_table(g.quaternion8())
    path = tmp_path / "q8.json"
    save_table(T, path)
    U = load_table(path, validate=True)
    assert U == T
    T2 = dixon_table(g.cyclic(9))
    save_table(T2, path)
    assert load_table(path) == T2


def test_load_rejects_non_square(tmp_path):
    data = dixon_table(g.symmetric(3)).to_json()
    data["characters"][0].pop()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(SchemaError):
        load_table(path)


def test_load_validate_catches_perturbation(tmp_path):
    data = dixon_table(g.symmetric(3)).to_json()
    data["characters"][1][1] = 5
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    load_table(path)
    with pytest.raises(InternalInconsistency):
        load_table(path, validate=True)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.json"
    for payload in ["[]", "{}", '{"group": "x", "order": 1, "exponent": 1, "classes": [], "characters": []}']:
        path.write_text(payload)
        with pytest.raises(SchemaError):
            load_table(path)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 14))
def test_dihedral_tables_orthogonal(n):
    T = dixon_table(g.dihedral(n))
    assert sum(d * d for d in T.degrees) == 2 * n
    assert max(T.degrees) <= 2
    check_orthogonality(T)


def test_table_is_immutable_tuple_rows():
    T = dixon_table(g.cyclic(3))
    assert isinstance(T, CharacterTable)
    assert isinstance(T.characters[0], tuple)
    assert sum(T.column(1), CycNumber.rational(0)) == 0
    assert T.characters[1][1] * T.characters[1][1].conjugate() == Fraction(1)
