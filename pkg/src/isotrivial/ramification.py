"""Wild ramification for actions of constant groups on curves.

A :class:`LocalAction` describes how the stabilizer H of a point acts on a
local uniformizer ``t``: for every non-identity element a power series
``g.t``.  From it we get the valuations ``i_x(g) = v(g.t - t)``, the Artin
term ``a(x)`` and, summing over orbits, the degree of omega_X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import DEFAULT_PRECISION, GF, INFINITY, PowerSeries
from .errors import InconsistentData, PrecisionExhausted

MAX_PRECISION = 1024

SeriesBuilder = Callable[[int], PowerSeries]


def _identity(field, n: int) -> PowerSeries:
    return PowerSeries.gen(field, n)


@dataclass(frozen=True)
class LocalAction:
    """Action of the stabilizer H on the completed local ring at a fixed point.

    ``elements[k]`` builds the series of the (k+1)-th non-identity element
    at a requested precision.  ``exact_precision`` caps that precision when
    the series were only supplied to finitely many terms.
    """

    p: int
    group_order: int
    stab_order: int
    elements: tuple
    exact_precision: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.stab_order < 1 or self.group_order % self.stab_order:
            raise InconsistentData("stabilizer order must divide the group order")
        if len(self.elements) != self.stab_order - 1:
            raise InconsistentData(
                f"need {self.stab_order - 1} non-identity elements, got {len(self.elements)}"
            )

    @property
    def field(self):
        return GF(self.p)

    def series(self, k: int, precision: int = DEFAULT_PRECISION) -> PowerSeries:
        if self.exact_precision is not None:
            precision = min(precision, self.exact_precision)
        return self.elements[k](precision)

    def check(self, precision: int = DEFAULT_PRECISION) -> None:
        """Every element fixes the point and acts by a unit on the cotangent line."""
        for k in range(len(self.elements)):
            s = self.series(k, precision)
            if s.coeffs[0] != 0 or (s.precision > 1 and s.coeffs[1] == 0):
                raise InconsistentData(f"element {k + 1} does not fix the point with unit derivative")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_generator(
        cls,
        p: int,
        group_order: int,
        stab_order: int,
        generator: SeriesBuilder,
        exact_precision: int | None = None,
    ) -> LocalAction:
        """Cyclic stabilizer: element k is the k-fold composite of the generator."""

        def power(k: int) -> SeriesBuilder:
            def build(n: int) -> PowerSeries:
                g = generator(n)
                s = _identity(g.field, n)
                for _ in range(k):
                    s = g.compose(s)
                return s

            return build

        return cls(p, group_order, stab_order, [power(k) for k in range(1, stab_order)], exact_precision)

    @classmethod
    def from_coefficients(
        cls, p: int, group_order: int, stab_order: int, series: Sequence[Sequence[int]]
    ) -> LocalAction:
        """Series known to ``len(coeffs)`` terms.

        One coefficient list means a generator of a cyclic stabilizer;
        otherwise one list per non-identity element.
        """
        F = GF(p)
        series = [list(c) for c in series]
        prec = min(len(c) for c in series)

        def fixed(coeffs):
            return lambda n: PowerSeries(F, coeffs, len(coeffs)).with_precision(min(n, len(coeffs)))

        if len(series) == 1 and stab_order > 2:
            return cls.from_generator(p, group_order, stab_order, fixed(series[0]), prec)
        return cls(p, group_order, stab_order, [fixed(c) for c in series], prec)


def translation_at_infinity(p: int) -> LocalAction:
    """``Z/p`` acting on P^1 by ``t -> t + g``, seen at infinity via ``u = 1/t``.

    ``g . u = u / (1 + g u)``.
    """
    F = GF(p)

    def element(g: int) -> SeriesBuilder:
        def build(n: int) -> PowerSeries:
            u = PowerSeries.gen(F, n, "u")
            return u * (PowerSeries(F, [1, g], n, "u")).inverse()

        return build

    return LocalAction(p, p, p, [element(g) for g in range(1, p)])


def rotation(p: int, n: int, zeta: int | None = None) -> LocalAction:
    """Tame ``Z/n`` action ``t -> zeta^k t`` with zeta of order n in F_p^*."""
    if (p - 1) % n:
        raise InconsistentData(f"F_{p} has no primitive {n}-th root of unity")
    F = GF(p)
    if zeta is None:
        zeta = F.pow(F.generator(), (p - 1) // n)

    def element(k: int) -> SeriesBuilder:
        return lambda prec: PowerSeries(F, [0, F.pow(zeta, k)], prec)

    return LocalAction(p, n, n, [element(k) for k in range(1, n)])


def i_x(act: LocalAction, k: int, precision: int = DEFAULT_PRECISION) -> int:
    """``v(g.t - t)`` for the (k+1)-th non-identity element, index ``k``.

    The precision is doubled until the valuation is seen below it twice in a
    row (at N and 2N); series given to finitely many terms cannot be extended.
    """
    n = precision
    previous = None
    while True:
        s = act.series(k, n)
        v = (s - PowerSeries.gen(s.field, s.precision, s.var)).valuation()
        if v != INFINITY and v < s.precision:
            if previous == v or (act.exact_precision is not None and s.precision >= act.exact_precision):
                return int(v)
            previous = v
        elif act.exact_precision is not None and s.precision >= act.exact_precision:
            raise PrecisionExhausted(
                f"v(g.t - t) >= {s.precision}: supply more coefficients for element {k + 1}"
            )
        n *= 2
        if n > MAX_PRECISION:
            raise PrecisionExhausted(f"v(g.t - t) exceeds {MAX_PRECISION} (is g the identity?)")


def artin_a(act: LocalAction, precision: int = DEFAULT_PRECISION) -> int:
    index = act.group_order // act.stab_order
    return index * sum(i_x(act, k, precision) for k in range(act.stab_order - 1))


def is_tame(act: LocalAction, precision: int = DEFAULT_PRECISION) -> bool:
    return all(i_x(act, k, precision) == 1 for k in range(act.stab_order - 1))


def hurwitz_wild(group_order: int, gY: int, artin_terms: Sequence[int]) -> int:
    """``|G| (2 gY - 2) + sum a(x)``, one Artin term per branch orbit."""
    return group_order * (2 * gY - 2) + sum(artin_terms)
