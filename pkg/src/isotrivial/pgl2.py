"""2x2 projective matrices over truncated algebras and the two E[2] -> PGL_2
embeddings in characteristic 2.

A matrix is only ever compared up to a unit scalar.  Over a local algebra
with nilpotent generators some entry of an invertible matrix is a unit, and
that entry fixes the candidate scalar.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from .algebra import GF, FiniteField, TruncatedAlgebra, TruncElt
from .errors import InvalidGroupPoint, ModulusMismatch, NotInPGL2
from .groupscheme import e2_group_law


class ProjMat2:
    """``[[a, b], [c, d]]`` with unit determinant, up to unit scalars."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, algebra: TruncatedAlgebra | None = None):
        entries = [a, b, c, d]
        if algebra is None:
            algebra = next((e.algebra for e in entries if isinstance(e, TruncElt)), None)
        if algebra is None:
            raise ValueError("cannot infer the algebra of an all-scalar matrix; pass algebra=")
        a, b, c, d = (algebra(e) for e in entries)
        det = a * d - b * c
        if not det.is_unit():
            raise NotInPGL2(f"determinant {det} is not a unit")
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, algebra: TruncatedAlgebra) -> ProjMat2:
        return cls(1, 0, 0, 1, algebra=algebra)

    @property
    def algebra(self) -> TruncatedAlgebra:
        return self.a.algebra

    def entries(self) -> tuple[TruncElt, TruncElt, TruncElt, TruncElt]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> TruncElt:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: ProjMat2) -> ProjMat2:
        if other.algebra != self.algebra:
            raise ModulusMismatch(f"{self.algebra!r} vs {other.algebra!r}")
        return ProjMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def scale(self, u) -> ProjMat2:
        u = self.algebra(u)
        return ProjMat2(u * self.a, u * self.b, u * self.c, u * self.d)

    def normalized(self) -> ProjMat2:
        """Scale so that the first unit entry (in a, b, c, d order) equals 1."""
        for e in self.entries():
            if e.is_unit():
                return self.scale(e.inverse())
        raise NotInPGL2("no unit entry")  # pragma: no cover - excluded by the det check

    def exactly_equal(self, other: ProjMat2) -> bool:
        return self.entries() == other.entries()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjMat2):
            return NotImplemented
        return proj_equal(self, other)

    __hash__ = None

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def __repr__(self) -> str:
        return f"ProjMat2({self})"


def proj_mul(M: ProjMat2, N: ProjMat2) -> ProjMat2:
    return M * N


def proj_equal(M: ProjMat2, N: ProjMat2) -> bool:
    """True iff ``M == u N`` for some unit ``u`` of the algebra."""
    if M.algebra != N.algebra:
        raise ModulusMismatch(f"{M.algebra!r} vs {N.algebra!r}")
    for m, n in zip(M.entries(), N.entries()):
        if n.is_unit():
            u = m * n.inverse()
            if not u.is_unit():
                return False
            return all(x == u * y for x, y in zip(M.entries(), N.entries()))
    raise NotInPGL2("no unit entry")  # pragma: no cover


def mu2_algebra(names: Sequence[str] = ("e",)) -> TruncatedAlgebra:
    """Coordinate ring of mu_2^n in characteristic 2: ``F_2[e_i]/(e_i^2)``.

    The generic point of the i-th factor is ``1 + e_i`` (``t^2 = 1`` there).
    """
    return TruncatedAlgebra(GF(2), names, [2] * len(names))


def embed_ordinary(eps: int, t: TruncElt) -> ProjMat2:
    """Image of ``(eps, t)`` in ``Z/2 x mu_2``: ``diag(t, 1) * swap^eps``."""
    if eps not in (0, 1):
        raise InvalidGroupPoint(f"eps must be 0 or 1, got {eps}")
    if t * t != 1:
        raise InvalidGroupPoint(f"{t} does not satisfy t^2 = 1")
    if eps == 0:
        return ProjMat2(t, 0, 0, 1)
    return ProjMat2(0, t, 1, 0)


def ordinary_group_mul(g: tuple[int, TruncElt], h: tuple[int, TruncElt]) -> tuple[int, TruncElt]:
    return ((g[0] + h[0]) % 2, g[1] * h[1])


def embed_supersingular(t: TruncElt) -> ProjMat2:
    """``t -> [[1, t^2], [t, 1 + t^3]]``."""
    if t.field.p != 2:
        raise InvalidGroupPoint("the supersingular embedding lives in characteristic 2")
    if t.is_unit() or not (t**4).is_zero():
        raise InvalidGroupPoint(f"{t} does not satisfy t^4 = 0")
    return ProjMat2(1, t * t, t, 1 + t**3)


def supersingular_homomorphism_witness(t: TruncElt, s: TruncElt) -> dict:
    """Both sides of the homomorphism identity, with the product rescaled.

    The raw product has top-left entry ``1 + t^2 s``; multiplying by that
    same element (its own inverse, since ``t^4 = 0``) brings the entry to 1.
    """
    product = embed_supersingular(t) * embed_supersingular(s)
    scaled = product.scale(1 + t * t * s)
    image = embed_supersingular(e2_group_law(t, s))
    return {
        "product": product,
        "scaled_product": scaled,
        "image_of_sum": image,
        "equal": scaled.exactly_equal(image),
    }


class FixedPoint(NamedTuple):
    q: int
    a: int
    b: int

    def render(self) -> str:
        F = GF(*_pk(self.q))
        return f"[{F.render(self.a)}:{F.render(self.b)}] over F_{self.q}"


def _pk(q: int) -> tuple[int, int]:
    p = 2
    while q % p:
        p += 1
    k = 0
    while q > 1:
        q //= p
        k += 1
    return p, k


def _projective_line(F: FiniteField):
    yield (1, 0)
    for b in F.elements():
        yield (b, 1)


def _cross_forms(M: ProjMat2) -> list[tuple[int, int, int]]:
    """Coefficient triples of ``(M v) x v = -c a^2 + (a - d) ab + b b^2``.

    One triple ``(coef a^2, coef ab, coef b^2)`` per algebra monomial.
    """
    A = -M.c
    B = M.a - M.d
    C = M.b
    monos = set(A.terms) | set(B.terms) | set(C.terms)
    return [(A.terms.get(m, 0), B.terms.get(m, 0), C.terms.get(m, 0)) for m in sorted(monos)]


def field_sizes(p: int, q_max: int) -> list[int]:
    out, q = [], p
    while q <= q_max:
        out.append(q)
        q *= p
    return out


def scan_fixed_points(matrices: Iterable[ProjMat2], q_max: int, p: int | None = None) -> list[FixedPoint]:
    """Points of P^1(F_q), q <= q_max, fixed by every matrix over the full algebra.

    A point ``[a:b]`` is fixed when ``M (a, b)`` is proportional to ``(a, b)``,
    i.e. the cross product vanishes as an element of the algebra.  That
    cross product is a quadratic form in ``(a, b)`` for each algebra monomial.
    """
    matrices = list(matrices)
    if matrices:
        fields = {M.algebra.field for M in matrices}
        if len({F.p for F in fields}) != 1:
            raise ModulusMismatch("matrices over different characteristics")
        p = matrices[0].algebra.field.p
    elif p is None:
        raise ValueError("an empty matrix list needs an explicit p")
    else:
        fields = set()
    forms = [f for M in matrices for f in _cross_forms(M)]
    found: list[FixedPoint] = []
    for q in field_sizes(p, q_max):
        F = GF(*_pk(q))
        if not all(F.contains(B) for B in fields):
            continue
        for a, b in _projective_line(F):
            aa, ab, bb = F.mul(a, a), F.mul(a, b), F.mul(b, b)
            if all(
                F.add(F.add(F.mul(x, aa), F.mul(y, ab)), F.mul(z, bb)) == 0 for x, y, z in forms
            ):
                found.append(FixedPoint(q, a, b))
    return found
