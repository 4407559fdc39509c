import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from unram_lab.cyclotomic import (
    INFINITY,
    CycNumber,
    congruence_valuation,
    cyclotomic_poly,
    descend,
    euler_phi,
    from_exponents,
    galois_apply,
    lift,
    p_valuation,
    root_of_unity,
)
from unram_lab.errors import NotCoprime, NotInSubfield, SchemaError


def to_complex(x):
    z = cmath.exp(2j * math.pi / x.conductor)
    return sum(float(c) * z**i for i, c in enumerate(x.coeffs))


def close(a, b):
    return abs(a - b) < 1e-8


@st.composite
def cyc(draw, conductors=(1, 2, 3, 4, 5, 6, 8, 9, 12, 15)):
    n = draw(st.sampled_from(conductors))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(-5, 5)), max_size=6))
    return from_exponents(n, pairs)


def test_cyclotomic_poly_matches_sympy():
    x = sympy.Symbol("x")
    for n in range(1, 40):
        expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_poly(n)) == [int(c) for c in expected]
        assert euler_phi(n) == sympy.totient(n)


def test_root_of_unity_reduction():
    assert root_of_unity(3, 2).format() == "-z3-1"
    assert root_of_unity(3, 1) + root_of_unity(3, 2) == -1
    assert root_of_unity(8, 2) == root_of_unity(4, 1)
    assert root_of_unity(5, 5) == 1


def test_equality_across_conductors_and_hash():
    a = root_of_unity(6, 2)
    b = root_of_unity(3, 1)
    assert a == b
    assert hash(a) == hash(b)
    assert hash(CycNumber.rational(3, 7)) == hash(3)


def test_galois_apply():
    x = root_of_unity(8, 1) + root_of_unity(8, 7)
    y = galois_apply(x, 3)
    assert y == root_of_unity(8, 3) + root_of_unity(8, 5)
    assert y.format() == "z8^3-z8"
    with pytest.raises(NotCoprime):
        galois_apply(root_of_unity(6), 3)


def test_descend_examples():
    assert descend(root_of_unity(6), 3).format() == "z3+1"
    assert descend(root_of_unity(4) + root_of_unity(4, 3), 1) == 0
    with pytest.raises(NotInSubfield):
        descend(root_of_unity(8), 4)


def test_congruence_valuation_examples():
    assert congruence_valuation(CycNumber.rational(5), CycNumber.rational(1), 2) == 2
    assert congruence_valuation(2, -1, 3) == 1
    x = root_of_unity(9, 2)
    assert congruence_valuation(x, x, 3) is INFINITY
    # zeta_3 - zeta_3^2 is sqrt(-3) and not divisible by 3 in Z[zeta_3]; over r = 3 coefficients are 1, 2
    assert congruence_valuation(root_of_unity(3), root_of_unity(3, 2), 2) == 0


def test_p_valuation():
    assert p_valuation(48, 2) == 4
    assert p_valuation(-27, 3) == 3
    assert p_valuation(0, 5) is INFINITY


def test_infinity_ordering():
    assert INFINITY > 10**9
    assert not INFINITY < 3
    assert 3 < INFINITY
    assert min(INFINITY, 4) == 4


def test_json_round_trip_and_errors():
    x = from_exponents(12, [(1, 2), (5, -1)]) / 3
    assert CycNumber.from_json(x.to_json()) == x
    assert CycNumber.from_json(7) == 7
    for bad in [True, "1", {"conductor": 3}, {"conductor": 3, "coeffs": [1]}, {"conductor": 0, "coeffs": []}]:
        with pytest.raises(SchemaError):
            CycNumber.from_json(bad)


@settings(max_examples=150, deadline=None)
@given(cyc(), cyc())
def test_ring_operations_match_complex_evaluation(x, y):
    assert close(to_complex(x + y), to_complex(x) + to_complex(y))
    assert close(to_complex(x * y), to_complex(x) * to_complex(y))
    assert close(to_complex(x - y), to_complex(x) - to_complex(y))
    assert close(to_complex(x.conjugate()), to_complex(x).conjugate())


@settings(max_examples=100, deadline=None)
@given(cyc(conductors=(4, 8, 9, 12, 15, 16)), st.integers(1, 60))
def test_galois_apply_is_a_ring_map(x, s):
    n = x.conductor
    if math.gcd(s, n) != 1:
        return
    y = x * x + 1
    assert galois_apply(y, s) == galois_apply(x, s) * galois_apply(x, s) + 1
    z = cmath.exp(2j * math.pi * s / n)
    assert close(to_complex(galois_apply(x, s)), sum(float(c) * z**i for i, c in enumerate(x.coeffs)))


@settings(max_examples=100, deadline=None)
@given(cyc(conductors=(1, 2, 3, 4, 6)), st.sampled_from([2, 3, 5]))
def test_lift_then_descend_round_trip(x, k):
    n = x.conductor * k
    up = lift(x, n)
    assert up == x
    assert hash(up) == hash(x)
    assert descend(up, x.conductor) == x
    assert descend(up, x.conductor).conductor == x.conductor


@settings(max_examples=100, deadline=None)
@given(cyc(conductors=(1, 3, 5, 15)), st.integers(0, 4), st.sampled_from([2]))
def test_valuation_of_multiples(x, m, p):
    if x.is_zero():
        return
    base = congruence_valuation(x, 0, p)
    assert congruence_valuation(x * p**m, 0, p) == base + m


@settings(max_examples=100, deadline=None)
@given(cyc(conductors=(3, 5)), cyc(conductors=(3, 5)), cyc(conductors=(3, 5)))
def test_valuation_is_ultrametric(x, y, z):
    p = 2
    a = congruence_valuation(x, y, p)
    b = congruence_valuation(y, z, p)
    assert congruence_valuation(x, z, p) >= min(a, b)


def test_rational_helpers():
    x = CycNumber.rational(Fraction(3, 4), 5)
    assert x.is_rational() and not x.is_integral()
    assert x.to_fraction() == Fraction(3, 4)
    with pytest.raises(ValueError):
        root_of_unity(5).to_fraction()
