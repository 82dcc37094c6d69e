import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isotrivial.algebra import GF, PowerSeries
from isotrivial.errors import InconsistentData, PrecisionExhausted
from isotrivial.groupscheme import GroupSchemeDesc, Mu
from isotrivial.invariants import deg_dualizing, surface_from_monodromy
from isotrivial.ramification import (
    LocalAction,
    artin_a,
    hurwitz_wild,
    i_x,
    is_tame,
    rotation,
    translation_at_infinity,
)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_translation_at_infinity(p):
    act = translation_at_infinity(p)
    act.check()
    assert [i_x(act, k) for k in range(p - 1)] == [2] * (p - 1)
    assert artin_a(act) == 2 * (p - 1)
    assert not is_tame(act)
    assert hurwitz_wild(p, 0, [artin_a(act)]) == -2


def test_translation_series_is_geometric():
    act = translation_at_infinity(5)
    # 1.u = u - u^2 + u^3 - ...
    assert act.series(0, 6).coeffs == (0, 1, 4, 1, 4, 1)


@pytest.mark.parametrize("p,n", [(3, 2), (5, 4), (7, 3), (7, 6), (11, 5), (13, 12)])
def test_rotation_is_tame_and_matches_diagonal_formula(p, n):
    act = rotation(p, n)
    assert is_tame(act)
    a = artin_a(act)
    assert a == n - 1
    d = surface_from_monodromy(p, GroupSchemeDesc(p, [Mu(n)]), 0, [[1], [-1]])
    assert hurwitz_wild(n, 0, [a, a]) == deg_dualizing(d) == -2


def test_rotation_needs_roots_of_unity():
    with pytest.raises(InconsistentData):
        rotation(5, 3)


def test_cubic_perturbation():
    act = LocalAction.from_coefficients(3, 6, 2, [[0, 1, 0, 1]])
    assert i_x(act, 0) == 3


def test_generator_powers():
    F = GF(3)
    gen = lambda n: PowerSeries(F, [0, 1, 1], n)  # noqa: E731
    act = LocalAction.from_generator(3, 3, 3, gen)
    assert i_x(act, 0) == 2
    assert act.series(1, 4).coeffs == (PowerSeries(F, [0, 1, 1], 4).compose(PowerSeries(F, [0, 1, 1], 4))).coeffs


def test_precision_exhausted_for_short_input():
    act = LocalAction.from_coefficients(5, 10, 2, [[0, 1, 0, 0]])
    with pytest.raises(PrecisionExhausted):
        i_x(act, 0)


def test_identity_exhausts_precision():
    F = GF(5)
    act = LocalAction(5, 2, 2, [lambda n: PowerSeries.gen(F, n)])
    with pytest.raises(PrecisionExhausted):
        i_x(act, 0)


def test_element_count_checked():
    with pytest.raises(InconsistentData):
        LocalAction(5, 5, 5, [])


def test_free_point_and_index():
    # trivial stabilizer: empty sum
    act = LocalAction(5, 10, 1, [])
    assert artin_a(act) == 0
    rot = rotation(5, 2)
    big = LocalAction(5, 4, 2, rot.elements)
    assert artin_a(big) == 2 * artin_a(rot)


def test_hurwitz_unramified_elliptic():
    assert hurwitz_wild(7, 1, []) == 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.data())
def test_inverse_has_same_valuation(p, data):
    act = translation_at_infinity(p)
    k = data.draw(st.integers(0, p - 2))
    # the element g has index g-1; its inverse -g has index p-g-1
    assert i_x(act, k) == i_x(act, p - 2 - k)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(3, 2), (5, 2), (5, 4), (7, 3), (7, 6)]))
def test_artin_lower_bound(pn):
    p, n = pn
    act = rotation(p, n)
    assert artin_a(act) >= act.stab_order - 1
