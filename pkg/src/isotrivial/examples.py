"""Explicit mu_{p^r}-curves and the surfaces they produce.

Two families are covered:

* plane curves ``z^d = f(x, y)`` with mu_n acting on z (n | d), whose
  non-free points are the d roots of f;
* space curves ``w^{p^n} = z h(x, z) + y^{p^n}`` over the elliptic curve
  ``y^2 z = x (x + z)(x - z)``, with ``h = prod (a_i x + z)``.

Both are turned into :class:`~isotrivial.invariants.SurfaceData`.  For the
space curves the local polynomial identities at the candidate singular
points are checked exactly, and :func:`singular_scan` finds singular points
over small finite fields by exhaustive search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .algebra import GF, FiniteField, MultiPoly, upoly_derivative, upoly_gcd
from .errors import InvalidFamily, ModulusMismatch
from .groupscheme import GroupSchemeDesc, Mu
from .invariants import OrbitDatum, SurfaceData
from .pgl2 import _pk, field_sizes

PLANE_VARS = ("x", "y", "z")
SPACE_VARS = ("x", "y", "z", "w")


# ---------------------------------------------------------------------------
# plane curves


@dataclass(frozen=True)
class PlaneCurveFamily:
    """``X = {z^(p^r) = f(x, y)}`` in P^2, with mu_n acting on z.

    ``group_order`` defaults to ``p^r``; any divisor of ``p^r`` is allowed
    (the characteristic-2 quartic uses mu_2 with a degree-4 form).
    """

    p: int
    r: int
    f: MultiPoly
    group_order: int | None = None

    def __post_init__(self):
        d = self.p**self.r
        if self.group_order is None:
            object.__setattr__(self, "group_order", d)
        if d % self.group_order:
            raise InvalidFamily(f"group order {self.group_order} must divide the degree {d}")
        f = self.f
        if f.field.p != self.p:
            raise ModulusMismatch(f"f is defined over {f.field}, not characteristic {self.p}")
        if f.variables != ("x", "y"):
            raise InvalidFamily("f must be a binary form in x, y")
        if not f.is_homogeneous() or f.degree() != d:
            raise InvalidFamily(f"f must be homogeneous of degree {d}")
        if not binary_form_has_distinct_roots(f):
            raise InvalidFamily(f"f = {f} has a repeated root")

    @property
    def degree(self) -> int:
        return self.p**self.r

    def equation(self) -> MultiPoly:
        z = MultiPoly.gens(self.f.field, PLANE_VARS)[2]
        return z**self.degree - _embed(self.f, PLANE_VARS)


def _embed(f: MultiPoly, names: Sequence[str]) -> MultiPoly:
    """Rewrite f in a larger variable list (missing variables get exponent 0)."""
    idx = [names.index(v) for v in f.variables]
    terms = {}
    for e, c in f.terms.items():
        ne = [0] * len(names)
        for i, k in zip(idx, e):
            ne[i] = k
        terms[tuple(ne)] = f.field.element(c)
    return MultiPoly(f.field, names, terms)


def binary_form_has_distinct_roots(f: MultiPoly) -> bool:
    """Distinct roots in P^1 for a binary form ``f(x, y)``.

    Dehomogenize at ``y = 1``: the roots are distinct iff ``f(x, 1)`` is
    squarefree (``gcd(F, F') = 1``; a p-th power has F' = 0 and fails) and
    the point at infinity is at most a simple root.
    """
    d = f.degree()
    F = f.field
    coeffs = [0] * (d + 1)
    for (ex, ey), c in f.terms.items():
        coeffs[ex] = F.add(coeffs[ex], c)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) - 1 < d - 1:
        return False
    if len(coeffs) <= 1:
        return d <= 1
    g = upoly_gcd(F, coeffs, upoly_derivative(F, coeffs))
    return len(g) == 1


def binary_form_from_roots(field: FiniteField, roots: Sequence) -> MultiPoly:
    """``prod (x - r y)`` for raw roots r; ``"inf"`` stands for the factor ``y``."""
    x, y = MultiPoly.gens(field, ("x", "y"))
    f = MultiPoly.constant(field, ("x", "y"), 1)
    for r in roots:
        if r == "inf":
            f = f * y
        else:
            c = field.element(r) if isinstance(r, int) else r
            f = f * (x - y * c)
    return f


def plane_family(p: int, r: int, roots: Sequence, group_order: int | None = None, field: FiniteField | None = None) -> PlaneCurveFamily:
    field = field or GF(p)
    if len(roots) != p**r:
        raise InvalidFamily(f"need {p ** r} roots, got {len(roots)}")
    if len(set(map(str, roots))) != len(roots):
        raise InvalidFamily("roots must be pairwise distinct")
    return PlaneCurveFamily(p, r, binary_form_from_roots(field, roots), group_order)


def plane_family_to_surface(fam: PlaneCurveFamily, e_type: str = "ordinary", hom_rank: int = 0) -> SurfaceData:
    """mu_n over P^1 with one fully fixed orbit per root of f; z has weight 1."""
    n = fam.group_order
    G = GroupSchemeDesc(fam.p, (Mu(n),))
    w = G.character([1])
    orbits = tuple(OrbitDatum(n, w, None, f"root {i}") for i in range(fam.degree))
    return SurfaceData(fam.p, G, 0, orbits, e_type, "unknown", hom_rank)


# ---------------------------------------------------------------------------
# space curves over y^2 z = x (x + z)(x - z)


def base_cubic(field: FiniteField, names: Sequence[str] = SPACE_VARS) -> MultiPoly:
    gens = dict(zip(names, MultiPoly.gens(field, names)))
    x, y, z = gens["x"], gens["y"], gens["z"]
    return y**2 * z - x * (x + z) * (x - z)


@dataclass(frozen=True)
class SpaceCurveFamily:
    """``w^(p^n) = z h(x, z) + y^(p^n)`` on ``y^2 z = x(x+z)(x-z)``.

    ``a`` holds raw elements of ``field`` (usually F_{p^2}: F_p itself has
    too few admissible values).
    """

    p: int
    n: int
    a: tuple
    field: FiniteField
    check_sum: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        F = self.field
        if F.p != self.p:
            raise ModulusMismatch(f"{F} has characteristic {F.p}, not {self.p}")
        if self.p < 5:
            raise InvalidFamily("the space-curve family needs p >= 5")
        N = self.p**self.n
        if len(self.a) != N - 1:
            raise InvalidFamily(f"need {N - 1} parameters a_i, got {len(self.a)}")
        if len(set(self.a)) != len(self.a):
            raise InvalidFamily("the a_i must be pairwise distinct")
        forbidden = {0, 1, F.neg(1)}
        if any(v in forbidden or not 0 <= v < F.q for v in self.a):
            raise InvalidFamily("the a_i must avoid 0, 1 and -1")
        if self.check_sum and self.a_sum() != 0:
            raise InvalidFamily("the a_i must sum to zero")

    @property
    def degree(self) -> int:
        return self.p**self.n

    def a_sum(self) -> int:
        s = 0
        for v in self.a:
            s = self.field.add(s, v)
        return s

    def h(self, names: Sequence[str] = SPACE_VARS) -> MultiPoly:
        gens = dict(zip(names, MultiPoly.gens(self.field, names)))
        x, z = gens["x"], gens["z"]
        out = MultiPoly.constant(self.field, names, 1)
        for v in self.a:
            out = out * (x * self.field.element(v) + z)
        return out

    def equations(self) -> list[MultiPoly]:
        F = self.field
        x, y, z, w = MultiPoly.gens(F, SPACE_VARS)
        N = self.degree
        return [base_cubic(F), w**N - z * self.h() - y**N]


def random_space_family(p: int, rng: random.Random, n: int = 1, k: int | None = None) -> SpaceCurveFamily:
    """Uniform-ish valid family over F_{p^k} (k defaults to the least that fits)."""
    N = p**n
    if k is None:
        k = 1
        while p**k - 3 < N:
            k += 1
    F = GF(p, k)
    allowed = [v for v in F.elements() if v not in (0, 1, F.neg(1))]
    for _ in range(10_000):
        head = rng.sample(allowed, N - 2)
        s = 0
        for v in head:
            s = F.add(s, v)
        last = F.neg(s)
        if last in allowed and last not in head:
            return SpaceCurveFamily(p, n, tuple(head) + (last,), F)
    raise InvalidFamily(f"could not sample a family over {F}")  # pragma: no cover


class CalcoliValues(NamedTuple):
    plus: int
    minus: int
    hx_origin: int

    @property
    def holds(self) -> bool:
        return self.plus == 0 and self.minus == 0


def calcoli_values(fam: SpaceCurveFamily) -> CalcoliValues:
    """``h_x + h + h_z`` at (1, 1), ``h_x + h - h_z`` at (1, -1), and ``h_x(0, 1)``."""
    F = fam.field
    names = ("x", "z")
    h = fam.h(names)
    hx, hz = h.partial("x"), h.partial("z")
    one, m1 = 1, F.neg(1)
    at = lambda poly, x, z: poly.evaluate((x, z))  # noqa: E731
    plus = F.add(F.add(at(hx, one, one), at(h, one, one)), at(hz, one, one))
    minus = F.sub(F.add(at(hx, one, m1), at(h, one, m1)), at(hz, one, m1))
    return CalcoliValues(plus, minus, at(hx, 0, 1))


def verify_calcoli(fam: SpaceCurveFamily) -> bool:
    return calcoli_values(fam).holds


def space_family_to_surface(fam: SpaceCurveFamily, e_type: str = "ordinary", hom_rank: int = 0) -> SurfaceData:
    N = fam.degree
    G = GroupSchemeDesc(fam.p, (Mu(N),))
    w = G.character([1])
    orbits = tuple(OrbitDatum(N, w, None, f"branch {i}") for i in range(N))
    return SurfaceData(fam.p, G, 1, orbits, e_type, "higher", hom_rank)


# ---------------------------------------------------------------------------
# exhaustive singular-point search


class ProjPoint(NamedTuple):
    q: int
    coords: tuple

    def render(self) -> str:
        F = GF(*_pk(self.q))
        return "(" + ":".join(F.render(c) for c in self.coords) + f") over F_{self.q}"


def _rank(F: FiniteField, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(v, inv) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def projective_points(equations: Sequence[MultiPoly], F: FiniteField) -> list[tuple[int, ...]]:
    """All points of the projective zero set over F, normalized (first nonzero = 1).

    Points are grown one coordinate at a time; an equation is tested as soon
    as all of its variables have been assigned.
    """
    nvars = len(equations[0].variables)
    levels: list[list[MultiPoly]] = [[] for _ in range(nvars)]
    for eq in equations:
        used = [i for i in range(nvars) if any(e[i] for e in eq.terms)]
        levels[max(used, default=0)].append(eq)

    def ok(pt: tuple[int, ...]) -> bool:
        full = pt + (0,) * (nvars - len(pt))
        return all(eq.evaluate(full, F) == 0 for eq in levels[len(pt) - 1])

    frontier = [(1,)] if ok((1,)) else []
    for j in range(1, nvars):
        nxt = []
        for pt in frontier:
            for c in F.elements():
                cand = pt + (c,)
                if ok(cand):
                    nxt.append(cand)
        unit = (0,) * j + (1,)
        if ok(unit):
            nxt.append(unit)
        frontier = nxt
    return frontier


def singular_scan(equations: Sequence[MultiPoly], q_max: int) -> list[ProjPoint]:
    """Singular points of a complete intersection over F_q for q <= q_max.

    A point on all equations is singular when the Jacobian has rank below
    the number of equations.  Only fields containing the coefficient field
    are scanned.
    """
    equations = list(equations)
    if not equations:
        raise ValueError("need at least one equation")
    base = equations[0].field
    names = equations[0].variables
    for eq in equations:
        if eq.field is not base or eq.variables != names:
            raise ModulusMismatch("equations must share field and variables")
        if not eq.is_homogeneous():
            raise ValueError(f"{eq} is not homogeneous")
    jac = [[eq.partial(v) for v in names] for eq in equations]
    out: list[ProjPoint] = []
    for q in field_sizes(base.p, q_max):
        F = GF(*_pk(q))
        if not F.contains(base):
            continue
        for pt in projective_points(equations, F):
            rows = [[d.evaluate(pt, F) for d in row] for row in jac]
            if _rank(F, rows) < len(equations):
                out.append(ProjPoint(q, pt))
    return out


def normalize_point(F: FiniteField, coords: Sequence[int]) -> tuple[int, ...]:
    lead = next(c for c in coords if c)
    inv = F.inv(lead)
    return tuple(F.mul(c, inv) for c in coords)


def candidate_points(fam: SpaceCurveFamily) -> dict[str, tuple[int, ...]]:
    """The four points singled out in the local analysis of the family.

    ``alpha`` and ``beta`` are the unique p^n-th roots of ``h(1, 1)`` and
    ``-h(1, -1)`` (Frobenius is bijective on a finite field).
    """
    F = fam.field
    N = fam.degree
    h = fam.h(("x", "z"))
    m1 = F.neg(1)

    def root(v: int) -> int:
        return next(w for w in F.elements() if F.pow(w, N) == v)

    alpha = root(h.evaluate((1, 1)))
    beta = root(F.neg(h.evaluate((1, m1))))
    return {
        "x0": (0, 1, 0, 1),
        "x": (0, 0, 1, 1),
        "x'": (1, 0, 1, alpha),
        "x''": (1, 0, m1, beta),
    }


def is_singular_at(equations: Sequence[MultiPoly], pt: Sequence[int], F: FiniteField | None = None) -> bool:
    F = F or equations[0].field
    if any(eq.evaluate(pt, F) for eq in equations):
        raise ValueError(f"{pt} is not on the curve")
    rows = [[eq.partial(v).evaluate(pt, F) for v in eq.variables] for eq in equations]
    return _rank(F, rows) < len(equations)
