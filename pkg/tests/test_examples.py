import random

import pytest

from isotrivial import examples as ex
from isotrivial.algebra import GF, MultiPoly
from isotrivial.errors import InvalidFamily, ModulusMismatch
from isotrivial.invariants import compute_report, deg_dualizing, kappa_one_criteria, kodaira


# -- plane curves -----------------------------------------------------------------


@pytest.mark.parametrize("p,r,want", [(3, 1, 0), (5, 1, 10), (2, 2, 4), (7, 1, 28)])
def test_plane_family_degree(p, r, want):
    N = p**r
    F = GF(p, r)
    roots = list(range(N - 1)) + ["inf"]
    fam = ex.plane_family(p, r, roots, field=F)
    d = ex.plane_family_to_surface(fam)
    assert deg_dualizing(d) == want == N * (N - 3)


def test_char2_quartic_has_kappa_zero():
    fam = ex.plane_family(2, 2, [0, 1, 2, "inf"], group_order=2, field=GF(2, 2))
    d = ex.plane_family_to_surface(fam)
    assert [o.n for o in d.orbits] == [2] * 4
    assert deg_dualizing(d) == 0


def test_repeated_roots_rejected():
    F = GF(5)
    x, y = MultiPoly.gens(F, "xy")
    with pytest.raises(InvalidFamily):
        ex.PlaneCurveFamily(5, 1, x**5 - y**5)  # (x - y)^5
    with pytest.raises(InvalidFamily):
        ex.plane_family(5, 1, [0, 1, 2, 3, 3])
    with pytest.raises(InvalidFamily):
        ex.PlaneCurveFamily(5, 1, x**4 * y)


def test_distinct_roots_check():
    F = GF(5)
    x, y = MultiPoly.gens(F, "xy")
    assert ex.binary_form_has_distinct_roots(x**5 - x * y**4)
    assert ex.binary_form_has_distinct_roots(x * y * (x - y) * (x - 2 * y) * (x - 3 * y))
    assert not ex.binary_form_has_distinct_roots(x**2 * y**3)


def test_plane_equation_is_homogeneous():
    fam = ex.plane_family(3, 1, [0, 1, 2])
    eq = fam.equation()
    assert eq.is_homogeneous() and eq.degree() == 3


# -- space curves -----------------------------------------------------------------


@pytest.mark.parametrize("p", [5, 7, 11])
def test_calcoli_on_random_families(p):
    rng = random.Random(p)
    for _ in range(100):
        fam = ex.random_space_family(p, rng)
        assert fam.a_sum() == 0
        assert ex.verify_calcoli(fam)


def test_calcoli_without_sum_condition():
    # Euler's relation makes both identities hold for any a_i;
    # the sum condition only shows up in h_x(0, 1)
    F = GF(5, 2)
    fam = ex.SpaceCurveFamily(5, 1, (2, 3, 5, 6), F, check_sum=False)
    assert fam.a_sum() != 0
    v = ex.calcoli_values(fam)
    assert v.holds
    assert v.hx_origin == fam.a_sum() != 0


def test_family_validation():
    F = GF(5, 2)
    with pytest.raises(InvalidFamily):
        ex.SpaceCurveFamily(5, 1, (2, 3, 5, 6), F)  # sum != 0
    with pytest.raises(InvalidFamily):
        ex.SpaceCurveFamily(5, 1, (1, 2, 3, 4), F)
    with pytest.raises(InvalidFamily):
        ex.SpaceCurveFamily(5, 1, (2, 3), F)
    with pytest.raises(InvalidFamily):
        ex.SpaceCurveFamily(3, 1, (2, 5), GF(3, 2))


def test_prime_field_is_too_small():
    # p^n - 1 distinct values outside {0, 1, -1} do not exist in F_p
    F = GF(5)
    allowed = [v for v in F.elements() if v not in (0, 1, 4)]
    assert len(allowed) < 4


def test_space_family_surface():
    fam = ex.random_space_family(5, random.Random(1))
    d = ex.space_family_to_surface(fam)
    assert deg_dualizing(d) == 20
    assert kodaira(d) == 1
    assert kappa_one_criteria(d.gY, len(d.orbits), d.p)
    r = compute_report(d)
    assert len(r.fibers) == 5 and all(f.tame for f in r.fibers)


# -- singular points ------------------------------------------------------------


@pytest.mark.parametrize("p,q_max", [(5, 125), (7, 49), (11, 11)])
def test_base_cubic_is_smooth(p, q_max):
    g = ex.base_cubic(GF(p), ("x", "y", "z"))
    assert ex.singular_scan([g], q_max) == []


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cuspidal_cubic(p):
    x, y, z = MultiPoly.gens(GF(p), "xyz")
    pts = ex.singular_scan([y**2 * z - x**3], p)
    assert [pt.coords for pt in pts] == [(0, 0, 1)]


def test_projective_points_of_a_line():
    x, y, z = MultiPoly.gens(GF(3), "xyz")
    pts = ex.projective_points([x + y + z], GF(3))
    assert len(pts) == 4


@pytest.fixture(scope="module")
def concrete():
    fam = ex.random_space_family(5, random.Random(0))
    eqs = fam.equations()
    return fam, eqs, ex.singular_scan(eqs, 125)


def test_candidate_points_lie_on_curve(concrete):
    fam, eqs, _ = concrete
    for pt in ex.candidate_points(fam).values():
        assert all(eq.evaluate(pt) == 0 for eq in eqs)


def test_scan_finds_the_expected_singular_points(concrete):
    fam, eqs, found = concrete
    coords = {pt.coords for pt in found}
    cand = ex.candidate_points(fam)
    for key in ("x0", "x'", "x''"):
        assert cand[key] in coords
        assert ex.is_singular_at(eqs, cand[key], fam.field)
    assert all(pt.q == 25 for pt in found)


def test_point_x_is_singular_when_sum_vanishes(concrete):
    # both partials of the second equation vanish at (0:0:1:1):
    # -z h_x = -sum a_i = 0 and -(h + z h_z) = -p^n = 0
    fam, eqs, found = concrete
    assert (0, 0, 1, 1) in {pt.coords for pt in found}


def test_remaining_singular_points_are_zeros_of_h_x(concrete):
    fam, eqs, found = concrete
    F = fam.field
    hx = fam.h(("x", "z")).partial("x")
    named = set(ex.candidate_points(fam).values())
    for pt in found:
        if pt.coords in named:
            continue
        x, y, z, w = pt.coords
        assert hx.evaluate((x, z)) == 0
        # free: zh does not vanish there
        assert F.mul(z, fam.h(("x", "z")).evaluate((x, z))) != 0


def test_mixed_fields_rejected():
    (a,) = MultiPoly.gens(GF(5), "x")
    (b,) = MultiPoly.gens(GF(7), "x")
    with pytest.raises(ModulusMismatch):
        ex.singular_scan([a, b], 25)
