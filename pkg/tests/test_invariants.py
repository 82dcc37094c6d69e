import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isotrivial.acceptance import random_diagonalizable
from isotrivial.errors import InconsistentData, InvalidWeight, NotSupported, UseWildModule
from isotrivial.groupscheme import AlphaPr, ConstantCyclic, GroupSchemeDesc, Mu, SupersingularE2
from isotrivial.invariants import (
    NEG_INF,
    ROW_ABELIAN,
    ROW_HYPER,
    ROW_HYPER_OR_QUASI,
    ROW_PROPER,
    ROW_QUASI,
    ROW_RULED,
    OrbitDatum,
    SurfaceData,
    arithmetic_genus,
    betti,
    chi_and_irregularity,
    classify,
    compute_report,
    deg_dualizing,
    deg_omega,
    euler_number,
    kappa_one_criteria,
    kodaira,
    nfibers_bound,
    orbit_from_monodromy,
    picard_rank,
    surface_from_monodromy,
    validate,
    weight_space_dim,
    weight_space_fraction,
    weight_spaces,
)


def mu(p, n, gY, gammas, **kw):
    return surface_from_monodromy(p, GroupSchemeDesc(p, [Mu(n)]), gY, gammas, **kw)


def test_mu_p_multiplication_degree():
    for p in (2, 3, 5, 7):
        assert deg_dualizing(mu(p, p, 0, [[1], [-1]])) == -2


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)])
def test_plane_family_degree_grid(p, r):
    N = p**r
    d = mu(p, N, 0, [[1]] * N)
    assert deg_dualizing(d) == N * (N - 3)


def test_arithmetic_genus():
    assert arithmetic_genus(0) == 1
    assert arithmetic_genus(-2) == 0
    with pytest.raises(InconsistentData):
        arithmetic_genus(3)
    with pytest.raises(InconsistentData):
        arithmetic_genus(-4)


def test_betti_and_euler():
    for g in range(5):
        b = betti(g)
        assert b == (1, 2 + 2 * g, 2 + 4 * g, 2 + 2 * g, 1)
        assert euler_number(b) == 0


def test_non_diagonalizable_is_routed_to_wild_module():
    d = SurfaceData(3, GroupSchemeDesc(3, [ConstantCyclic(3)]), 0, (OrbitDatum(3), OrbitDatum(3)))
    with pytest.raises(UseWildModule):
        deg_dualizing(d)
    with pytest.raises(NotSupported):
        chi_and_irregularity(d)
    d_art = SurfaceData(3, d.G, 0, (OrbitDatum(3, artin=4),))
    assert deg_omega(d_art) == -2


def test_supersingular_groups_need_supersingular_curve():
    G = GroupSchemeDesc(2, [SupersingularE2()])
    bad = SurfaceData(2, G, 1, (), "ordinary")
    with pytest.raises(InconsistentData):
        validate(bad)
    with pytest.raises(InconsistentData):
        validate(SurfaceData(5, GroupSchemeDesc(5, [Mu(5)]), 1, (), "supersingular"))
    validate(SurfaceData(3, GroupSchemeDesc(3, [AlphaPr(1)]), 1, (), "supersingular"))


def test_infinitesimal_over_p1_needs_two_fibers():
    d = SurfaceData(5, GroupSchemeDesc(5, [Mu(5)]), 0, (OrbitDatum(5, GroupSchemeDesc(5, [Mu(5)]).character([1])),))
    with pytest.raises(InconsistentData, match="two multiple fibers"):
        validate(d)


def test_weight_must_generate():
    G = GroupSchemeDesc(3, [Mu(9)])
    d = SurfaceData(3, G, 1, (OrbitDatum(9, G.character([3])), OrbitDatum(9, G.character([6]))))
    with pytest.raises(InvalidWeight):
        validate(d)


def test_stabilizer_order_must_divide():
    G = GroupSchemeDesc(5, [Mu(5)])
    d = SurfaceData(5, G, 1, (OrbitDatum(3, G.character([1])),))
    with pytest.raises(InconsistentData):
        validate(d)


def test_inconsistent_weights_give_fractional_dimension():
    G = GroupSchemeDesc(5, [Mu(5)])
    w = G.character([1])
    d = SurfaceData(5, G, 0, (OrbitDatum(5, w), OrbitDatum(5, w), OrbitDatum(5, w)))
    assert weight_space_fraction(G.character([1]), d) == Fraction(-1) + 3 * Fraction(4, 5)
    with pytest.raises(InconsistentData):
        weight_space_dim(G.character([1]), d)


def test_weight_spaces_of_plane_quintic():
    d = mu(5, 5, 0, [[1]] * 5)
    spaces = weight_spaces(d)
    assert sum(spaces.values()) == deg_dualizing(d) // 2 + 1
    assert spaces[d.G.zero_character()] == 0


def test_orbit_from_monodromy_in_product():
    G = GroupSchemeDesc(5, [Mu(2), Mu(3)])
    o = orbit_from_monodromy(G, (1, 1))
    assert o.n == 6 and o.stab == (3, 2)
    assert o.weight.restrict(6, o.stab) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_weight_space_sum_property(seed):
    d = random_diagonalizable(random.Random(seed))
    spaces = weight_spaces(d)
    assert all(v >= 0 for v in spaces.values())
    assert 2 * sum(spaces.values()) == deg_dualizing(d) + 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_chi_and_b1(seed):
    d = random_diagonalizable(random.Random(seed))
    chi, q, h0, reduced = chi_and_irregularity(d)
    assert (chi, q, h0, reduced) == (0, d.gY + 1, d.gY, True)
    assert betti(d.gY)[1] == 2 * q
    assert picard_rank(d) == 2 + d.hom_rank


# -- classification ---------------------------------------------------------------


def test_rows():
    assert classify(mu(5, 5, 0, [[1], [-1]]))[0] == ROW_RULED
    assert classify(mu(3, 3, 0, [[1]] * 3, x_hint="rational_cuspidal"))[0] == ROW_QUASI
    assert classify(mu(3, 3, 0, [[1]] * 3))[0] == ROW_HYPER_OR_QUASI
    assert classify(mu(5, 2, 0, [[1]] * 4))[0] == ROW_HYPER
    assert classify(SurfaceData(5, GroupSchemeDesc(5, [Mu(5)]), 1))[0] == ROW_ABELIAN
    assert classify(mu(5, 5, 0, [[1]] * 5))[0] == ROW_PROPER


def test_quasi_hyperelliptic_only_small_p():
    with pytest.raises(InconsistentData):
        classify(mu(5, 2, 0, [[1]] * 4, x_hint="rational_cuspidal"))


def test_hint_contradictions():
    with pytest.raises(InconsistentData):
        classify(mu(5, 5, 0, [[1]] * 5, x_hint="rational_smooth"))
    with pytest.raises(InconsistentData):
        classify(SurfaceData(5, GroupSchemeDesc(5, [Mu(5)]), 1, (), x_hint="higher"))
    with pytest.raises(InconsistentData):
        validate(mu(5, 5, 0, [[1], [-1]], x_hint="rational_smooth", hom_rank=1))


def test_report_for_abelian_surface():
    r = compute_report(SurfaceData(5, GroupSchemeDesc(5, [Mu(5)]), 1))
    assert (r.kappa, r.betti, r.q, r.aut0) == (0, (1, 4, 6, 4, 1), 2, "Abelian surface")


def test_report_for_wild_group_has_unknowns():
    d = SurfaceData(3, GroupSchemeDesc(3, [ConstantCyclic(3)]), 2, ())
    r = compute_report(d)
    assert r.kappa == 1 and r.q is None and r.rho is None


def test_kodaira_sign():
    assert kodaira(mu(2, 2, 0, [[1], [1]])) == NEG_INF
    assert kodaira(mu(2, 2, 0, [[1]] * 4)) == 0
    assert kodaira(mu(2, 2, 0, [[1]] * 6)) == 1


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_nfibers_bound_matches_p1_branch(p):
    for N in range(10):
        assert (nfibers_bound(N, p) > 0) == kappa_one_criteria(0, N, p)


def test_nfibers_bound_is_a_lower_bound():
    # N fibers each with n >= p over P^1 (mu_{p^r}): deg >= the bound
    for p, r in [(2, 2), (3, 1), (3, 2), (5, 1)]:
        q = p**r
        for N in range(2, 8):
            gammas = [[p ** (r - 1)]] * (N - 1)
            gammas.append([-(N - 1) * p ** (r - 1)])
            if gammas[-1][0] % q == 0:
                continue
            d = mu(p, q, 0, gammas)
            assert deg_dualizing(d) >= nfibers_bound(N, p, r)
