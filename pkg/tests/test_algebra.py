import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isotrivial.algebra import (
    GF,
    INFINITY,
    FpElt,
    MultiPoly,
    PowerSeries,
    TruncatedAlgebra,
    partial_derivative,
    poly_arith,
    prime_power,
    series_invert,
    series_valuation,
    trunc_arith,
    trunc_invert,
    upoly_gcd,
)
from isotrivial.errors import ModulusMismatch, NotAUnit, UnknownVariable

PRIMES = [2, 3, 5, 7, 11]


# -- fields -------------------------------------------------------------------


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 1)])
def test_field_axioms_exhaustive(p, k):
    F = GF(p, k)
    for a in F.elements():
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, F.q - 1) == 1


def test_extension_generator_is_primitive():
    F = GF(5, 2)
    g = F.generator()
    powers = {F.pow(g, i) for i in range(F.q - 1)}
    assert powers == set(range(1, F.q))


def test_prime_subfield_is_raw_residues():
    F = GF(3, 2)
    for a, b in itertools.product(range(3), repeat=2):
        assert F.add(a, b) == (a + b) % 3
        assert F.mul(a, b) == (a * b) % 3


def test_fields_are_cached():
    assert GF(5) is GF(5)
    assert GF(2, 3) is GF(2, 3)


def test_prime_power():
    assert prime_power(125) == (5, 3)
    assert prime_power(12) is None


def test_fp_elements_reject_mixed_characteristic():
    with pytest.raises(ModulusMismatch):
        FpElt(1, 5) + FpElt(1, 7)


@given(st.sampled_from(PRIMES), st.integers(), st.integers())
def test_fp_ring_ops_match_integers(p, a, b):
    x, y = FpElt(a, p), FpElt(b, p)
    assert (x + y).value == (a + b) % p
    assert (x * y).value == (a * b) % p
    assert (x - y).value == (a - b) % p


# -- polynomials ----------------------------------------------------------------


def test_partial_derivative_example():
    F = GF(5)
    x, y, z = MultiPoly.gens(F, "xyz")
    g = 4 * x**3 + x * z**2 + y**5
    assert str(g.partial("x")) == "2*x^2 + z^2"
    assert partial_derivative(y**5, "y").is_zero()


def test_partial_unknown_variable():
    x, y = MultiPoly.gens(GF(3), "xy")
    with pytest.raises(UnknownVariable):
        (x * y).partial("w")


def test_poly_arith_modulus_mismatch():
    (x,) = MultiPoly.gens(GF(3), "x")
    (y,) = MultiPoly.gens(GF(5), "x")
    with pytest.raises(ModulusMismatch):
        poly_arith(x, y, "add")


def test_frobenius_is_additive():
    F = GF(7)
    x, y = MultiPoly.gens(F, "xy")
    assert (x + y) ** 7 == x**7 + y**7


def coeffs(p):
    return st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(0, p - 1), max_size=5
    )


@settings(max_examples=60)
@given(st.data())
def test_evaluation_is_a_ring_homomorphism(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    F = GF(p)
    f = MultiPoly(F, "xy", data.draw(coeffs(p)))
    g = MultiPoly(F, "xy", data.draw(coeffs(p)))
    pt = data.draw(st.tuples(st.integers(0, p - 1), st.integers(0, p - 1)))
    assert (f * g).evaluate(pt) == F.mul(f.evaluate(pt), g.evaluate(pt))
    assert (f + g).evaluate(pt) == F.add(f.evaluate(pt), g.evaluate(pt))


@settings(max_examples=60)
@given(st.data())
def test_leibniz_rule(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    F = GF(p)
    f = MultiPoly(F, "xy", data.draw(coeffs(p)))
    g = MultiPoly(F, "xy", data.draw(coeffs(p)))
    assert (f * g).partial("x") == f.partial("x") * g + f * g.partial("x")


def test_upoly_gcd():
    F = GF(5)
    # (x-1)(x-2) and (x-1)(x-3)
    a = [2, 2, 1]
    b = [3, 1, 1]
    assert upoly_gcd(F, a, b) == [4, 1]


def test_evaluate_over_extension_only_when_contained():
    x, y = MultiPoly.gens(GF(5, 2), "xy")
    with pytest.raises(ModulusMismatch):
        (x + y).evaluate((1, 1), GF(5))


# -- truncated algebras ---------------------------------------------------------


def test_truncated_reduction():
    A = TruncatedAlgebra(GF(2), ("t", "s"), (4, 4))
    t, s = A.gens()
    assert (t**4).is_zero()
    assert (t**3 * s**2) * t == A.zero()


def test_inverse_of_one_plus_t2s():
    A = TruncatedAlgebra(GF(2), ("t", "s"), (4, 4))
    t, s = A.gens()
    u = 1 + t * t * s
    inv = trunc_invert(u)
    assert inv * u == A.one()
    # Neumann series: (t^2 s)^2 = t^4 s^2 = 0
    assert inv == 1 + t * t * s


def test_non_unit_raises():
    A = TruncatedAlgebra(GF(3), ("u",), (5,))
    (u,) = A.gens()
    with pytest.raises(NotAUnit):
        u.inverse()


def test_geometric_series_inverse():
    A = TruncatedAlgebra(GF(3), ("u",), (5,))
    (u,) = A.gens()
    assert trunc_invert(1 + u) == 1 + 2 * u + u**2 + 2 * u**3 + u**4


def test_trunc_arith_modulus_mismatch():
    A = TruncatedAlgebra(GF(2), ("t",), (4,))
    B = TruncatedAlgebra(GF(3), ("t",), (4,))
    with pytest.raises(ModulusMismatch):
        trunc_arith(A.gens()[0], B.gens()[0], "add")


@settings(max_examples=80)
@given(st.data())
def test_units_invert(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    A = TruncatedAlgebra(GF(p), ("a", "b"), (3, 2))
    terms = data.draw(
        st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 1)), st.integers(0, p - 1))
    )
    terms[(0, 0)] = data.draw(st.integers(1, p - 1))
    x = A(MultiPoly(GF(p), ("a", "b"), terms))
    assert x * x.inverse() == A.one()


# -- power series -----------------------------------------------------------------


def test_series_inverse_one_plus_u():
    s = PowerSeries(GF(3), [1, 1], 5, "u")
    assert series_invert(s).coeffs == (1, 2, 1, 2, 1)


def test_valuation_of_zero_is_infinite():
    assert series_valuation(PowerSeries(GF(5), [0, 0, 0])) == INFINITY
    assert series_valuation(PowerSeries(GF(5), [0, 0, 3])) == 2


def test_compose_translation():
    F = GF(5)
    u = PowerSeries.gen(F, 8)
    g = u * PowerSeries(F, [1, 1], 8).inverse()
    # applying u -> u/(1+u) five times is the identity in characteristic 5
    s = u
    for _ in range(5):
        s = g.compose(s)
    assert s == u


@settings(max_examples=50)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 100), min_size=1, max_size=10), st.integers(1, 6))
def test_series_inverse_property(p, cs, c0):
    F = GF(p)
    if c0 % p == 0:
        c0 = 1
    s = PowerSeries(F, [c0] + cs, len(cs) + 1)
    one = PowerSeries(F, [1], s.precision)
    assert s * s.inverse() == one
