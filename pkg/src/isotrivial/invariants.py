"""Numerical invariants of S = E x^G X computed from orbit data on X.

Input is a :class:`SurfaceData`: the group G, the genus of Y = X/G and one
:class:`OrbitDatum` per non-free G-orbit.  Everything else (degree of the
dualizing sheaf of X, Kodaira dimension, Betti numbers, irregularity, weight
spaces, multiple fibers, Picard rank, the classification row) is derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InconsistentData, InvalidWeight, NotSupported, UseWildModule
from .groupscheme import (
    AlphaPr,
    Character,
    ConstantCyclic,
    GroupSchemeDesc,
    Mu,
    SupersingularE2,
    m_of,
)

NEG_INF = -math.inf

E_TYPES = ("ordinary", "supersingular")
X_HINTS = (
    "unknown",
    "rational_smooth",
    "rational_cuspidal",
    "elliptic_translations",
    "elliptic_other",
    "higher",
)

ROW_RULED = "(Elliptic) ruled surface"
ROW_QUASI = "Quasi-hyperelliptic"
ROW_HYPER = "Hyperelliptic"
ROW_HYPER_OR_QUASI = "Hyperelliptic or Quasi-hyperelliptic"
ROW_ABELIAN = "Abelian surface"
ROW_PROPER = "Properly elliptic surface"

AUT0_ELLIPTIC = "Elliptic curve"
AUT0_ABELIAN = "Abelian surface"

X_COLUMN = {
    ROW_RULED: "P^1",
    ROW_QUASI: "Rational with a cusp",
    ROW_HYPER: "Elliptic curve",
    ROW_HYPER_OR_QUASI: "Elliptic curve or rational with a cusp",
    ROW_ABELIAN: "Elliptic curve",
    ROW_PROPER: "Any other G-normal",
}


@dataclass(frozen=True)
class OrbitDatum:
    """A non-free orbit: stabilizer order ``n`` and weight ``weight``.

    ``stab`` gives the stabilizer as the image of ``zeta -> (zeta^u_i)_i``;
    it may be omitted when G has a unique subgroup of order n.  ``artin`` is
    the local Artin term of the orbit, used only for constant wild groups.
    """

    n: int
    weight: Character | None = None
    stab: tuple | None = None
    label: str | None = None
    artin: int | None = None


@dataclass(frozen=True)
class SurfaceData:
    p: int
    G: GroupSchemeDesc
    gY: int
    orbits: tuple = ()
    e_type: str = "ordinary"
    x_hint: str = "unknown"
    hom_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))

    @property
    def order(self) -> int:
        return self.G.order()

    def stabilizer(self, orbit: OrbitDatum) -> tuple[int, ...]:
        if orbit.stab is not None:
            return self.G.check_embedding(orbit.n, orbit.stab)
        return self.G.default_embedding(orbit.n)


def validate(d: SurfaceData) -> SurfaceData:
    """Check the structural constraints on a SurfaceData; return it unchanged."""
    G = d.G
    if G.p != d.p:
        raise InconsistentData(f"group characteristic {G.p} differs from p = {d.p}")
    if d.gY < 0:
        raise InconsistentData("gY must be >= 0")
    if d.e_type not in E_TYPES:
        raise InconsistentData(f"e_type must be one of {E_TYPES}")
    if d.x_hint not in X_HINTS:
        raise InconsistentData(f"x_hint must be one of {X_HINTS}")
    if d.hom_rank < 0:
        raise InconsistentData("hom_rank must be >= 0")
    if d.x_hint.startswith("rational") and d.hom_rank != 0:
        raise InconsistentData("hom_rank must be 0 when X is rational (Alb(X) is trivial)")
    for atom in G.factors:
        if isinstance(atom, (Mu, ConstantCyclic)) and atom.n % d.p == 0 and d.e_type != "ordinary":
            raise InconsistentData(f"{G.describe()} is not a subgroup of a supersingular curve")
        if isinstance(atom, (AlphaPr, SupersingularE2)) and d.e_type != "supersingular":
            raise InconsistentData("unipotent infinitesimal factors need a supersingular E")
    order = G.order()
    diag = G.is_diagonalizable()
    for i, orb in enumerate(d.orbits):
        where = f"orbit {i}" + (f" ({orb.label})" if orb.label else "")
        if orb.n < 2:
            raise InconsistentData(f"{where}: stabilizer order must be >= 2 (free orbits are not listed)")
        if order % orb.n:
            raise InconsistentData(f"{where}: stabilizer order {orb.n} does not divide |G| = {order}")
        if diag:
            if orb.weight is None:
                raise InvalidWeight(f"{where}: a weight is required for diagonalizable G")
            if orb.weight.moduli != G.character_moduli():
                raise InvalidWeight(f"{where}: weight has the wrong number of residues")
            m_of(orb.weight, orb.weight, orb.n, d.stabilizer(orb))
    if G.is_infinitesimal() and order > 1 and d.gY == 0 and len(d.orbits) < 2:
        raise InconsistentData(
            "an infinitesimal group acting over P^1 needs at least two multiple fibers"
        )
    return d


# ---------------------------------------------------------------------------


def deg_dualizing(d: SurfaceData) -> int:
    """Hurwitz-type degree of the dualizing sheaf of X (diagonalizable G)."""
    if not d.G.is_diagonalizable():
        raise UseWildModule(f"{d.G.describe()} is not diagonalizable; use ramification.hurwitz_wild")
    N = d.order
    return (2 * d.gY - 2) * N + sum(N - N // o.n for o in d.orbits)


def deg_omega(d: SurfaceData) -> int:
    """Degree of omega_X for any group the package can handle.

    Constant wild groups go through the Artin-term formula and need an
    ``artin`` term on every orbit.
    """
    if d.G.is_diagonalizable():
        return deg_dualizing(d)
    if d.G.is_constant() and all(o.artin is not None for o in d.orbits):
        from .ramification import hurwitz_wild

        return hurwitz_wild(d.order, d.gY, [o.artin for o in d.orbits])
    raise UseWildModule(
        f"{d.G.describe()}: degree of omega_X needs Artin terms on every orbit of a constant group"
    )


def arithmetic_genus(deg_omega_x: int) -> int:
    if deg_omega_x % 2:
        raise InconsistentData(f"deg omega_X = {deg_omega_x} is odd")
    p_a = deg_omega_x // 2 + 1
    if p_a < 0:
        raise InconsistentData(f"deg omega_X = {deg_omega_x} gives negative arithmetic genus")
    return p_a


def kappa_from_degree(deg: int):
    if deg < 0:
        return NEG_INF
    return 0 if deg == 0 else 1


def kodaira(d: SurfaceData):
    """Kodaira dimension of S: -inf, 0 or 1 by the sign of deg omega_X."""
    return kappa_from_degree(deg_omega(d))


def betti(gY: int) -> tuple[int, int, int, int, int]:
    if gY < 0:
        raise ValueError("gY must be >= 0")
    b1 = 2 + 2 * gY
    return (1, b1, 2 + 4 * gY, b1, 1)


def euler_number(b: Sequence[int]) -> int:
    return sum((-1) ** i * x for i, x in enumerate(b))


def chi_and_irregularity(d: SurfaceData) -> tuple[int, int, int, bool]:
    """``(chi(O_S), q(S), h^0(omega_S), Pic_S reduced)``."""
    if not d.G.is_diagonalizable():
        raise NotSupported(f"chi and q are only known for diagonalizable G, not {d.G.describe()}")
    return (0, d.gY + 1, d.gY, True)


def weight_space_fraction(lam: Character, d: SurfaceData) -> Fraction:
    """Unvalidated right-hand side of the weight-space formula."""
    if lam.is_zero():
        return Fraction(d.gY)
    total = Fraction(d.gY - 1)
    for orb in d.orbits:
        if orb.weight is None:
            raise InvalidWeight("every orbit needs a weight")
        m = m_of(lam, orb.weight, orb.n, d.stabilizer(orb))
        total += 1 - Fraction(m, orb.n)
    return total


def weight_space_dim(lam: Character, d: SurfaceData) -> int:
    """``dim H^0(X, omega_X)_lam``."""
    if not d.G.is_diagonalizable():
        raise NotSupported("weight spaces need a diagonalizable group")
    value = weight_space_fraction(lam, d)
    if value.denominator != 1:
        raise InconsistentData(
            f"h^0(omega_X)_{lam} = {value} is not an integer; the weights cannot come from a G-normal curve"
        )
    if value < 0:
        raise InconsistentData(f"h^0(omega_X)_{lam} = {value} is negative")
    return int(value)


def weight_spaces(d: SurfaceData) -> dict[Character, int]:
    return {lam: weight_space_dim(lam, d) for lam in d.G.iter_characters()}


def has_trivial_restrictions(d: SurfaceData) -> bool:
    """True if some nonzero character restricts trivially to some stabilizer."""
    for orb in d.orbits:
        if d.order != orb.n:
            return True
    return False


@dataclass(frozen=True)
class FiberInfo:
    multiplicity: int
    tame: bool
    pic0: str = "E"
    label: str | None = None

    def to_json(self) -> dict:
        out = {"multiplicity": self.multiplicity, "tame": self.tame, "pic0": self.pic0}
        if self.label:
            out["label"] = self.label
        return out


def fiber_multiplicities(d: SurfaceData) -> list[FiberInfo]:
    if not d.G.is_diagonalizable():
        raise NotSupported("fiber structure is only known for diagonalizable G")
    return [FiberInfo(o.n, True, "E", o.label) for o in d.orbits]


def picard_rank(d: SurfaceData) -> int:
    return 2 + d.hom_rank


def nfibers_bound(N: int, p: int, r: int = 1) -> int:
    """Lower bound ``p^(r-1) (p (N-2) - N)`` for deg omega_X over P^1."""
    return p ** (r - 1) * (p * (N - 2) - N)


def kappa_one_criteria(gY: int, N: int, p: int, r: int = 1) -> bool:
    """Sufficient condition for kappa(S) = 1 when G = mu_{p^r}."""
    if gY >= 2:
        return True
    if gY == 1:
        return N >= 1
    return N >= 5 or (N >= 4 and p >= 3) or (N >= 3 and p >= 5)


def _check_hint(d: SurfaceData, kappa, p_a: int) -> None:
    hint = d.x_hint
    torsor_over_elliptic = d.gY == 1 and not d.orbits

    def bad(msg: str) -> InconsistentData:
        return InconsistentData(f"x_hint={hint!r} is inconsistent with p_a(X) = {p_a}: {msg}")

    if torsor_over_elliptic and hint not in ("unknown", "elliptic_translations"):
        raise bad("with gY = 1 and no multiple fibers, X is an elliptic curve with G acting by translations")
    if hint == "rational_smooth" and p_a != 0:
        raise bad("a smooth rational curve has arithmetic genus 0")
    if hint == "rational_cuspidal":
        if p_a < 1:
            raise bad("a cuspidal curve has positive arithmetic genus")
        if kappa == 0 and d.p not in (2, 3):
            raise bad("quasi-hyperelliptic surfaces only exist for p = 2, 3")
    if hint == "elliptic_translations" and not (torsor_over_elliptic and p_a == 1):
        raise bad("translations on an elliptic curve need gY = 1 and no multiple fibers")
    if hint == "elliptic_other" and p_a != 1:
        raise bad("an elliptic curve has arithmetic genus 1")
    if hint == "higher" and p_a < 2:
        raise bad("'higher' needs p_a >= 2")


def classify(d: SurfaceData) -> tuple[str, str, list[str]]:
    """``(class_row, aut0, flags)``."""
    deg = deg_omega(d)
    p_a = arithmetic_genus(deg)
    kappa = kappa_from_degree(deg)
    _check_hint(d, kappa, p_a)
    flags: list[str] = []
    if kappa == NEG_INF:
        return ROW_RULED, AUT0_ELLIPTIC, flags
    if kappa == 1:
        return ROW_PROPER, AUT0_ELLIPTIC, flags
    flags.append("omega_X assumed trivial (deg 0, p_a = 1)")
    if d.gY == 1 and not d.orbits:
        return ROW_ABELIAN, AUT0_ABELIAN, flags
    if d.gY != 0:  # pragma: no cover - deg 0 forces gY <= 1
        raise InconsistentData("kappa = 0 needs gY in {0, 1}")
    if d.x_hint == "rational_cuspidal":
        return ROW_QUASI, AUT0_ELLIPTIC, flags
    if d.x_hint == "elliptic_other":
        return ROW_HYPER, AUT0_ELLIPTIC, flags
    if d.p in (2, 3):
        flags.append("kappa = 0 over P^1 in characteristic 2 or 3: X may be elliptic or cuspidal")
        return ROW_HYPER_OR_QUASI, AUT0_ELLIPTIC, flags
    return ROW_HYPER, AUT0_ELLIPTIC, flags


@dataclass
class InvariantReport:
    deg_omega_X: int
    p_a_X: int
    kappa: float
    betti: tuple
    euler: int
    q: int | None
    chi: int | None
    h0_omega: int | None
    pic_reduced: bool | None
    rho: int | None
    fibers: list | None
    class_row: str
    aut0: str
    gY: int
    tame: bool | None
    flags: list = field(default_factory=list)

    @property
    def x_column(self) -> str:
        return X_COLUMN[self.class_row]

    def to_json(self) -> dict:
        return {
            "deg_omega_X": self.deg_omega_X,
            "p_a_X": self.p_a_X,
            "kappa": kappa_str(self.kappa),
            "betti": list(self.betti),
            "euler": self.euler,
            "q": self.q,
            "chi": self.chi,
            "h0_omega": self.h0_omega,
            "pic_reduced": self.pic_reduced,
            "rho": self.rho,
            "fibers": None if self.fibers is None else [f.to_json() for f in self.fibers],
            "tame": self.tame,
            "class_row": self.class_row,
            "X": self.x_column,
            "gY": self.gY,
            "aut0": self.aut0,
            "flags": list(self.flags),
        }


def kappa_str(kappa) -> str | int:
    return "-inf" if kappa == NEG_INF else int(kappa)


def compute_report(d: SurfaceData) -> InvariantReport:
    validate(d)
    deg = deg_omega(d)
    p_a = arithmetic_genus(deg)
    kappa = kappa_from_degree(deg)
    row, aut0, flags = classify(d)
    b = betti(d.gY)
    diag = d.G.is_diagonalizable()
    if diag:
        chi, q, h0, reduced = chi_and_irregularity(d)
        fibers = fiber_multiplicities(d)
        rho = picard_rank(d)
        spaces = weight_spaces(d)
        total = sum(spaces.values())
        if total != p_a:  # pragma: no cover - an identity for consistent data
            raise InconsistentData(f"weight spaces sum to {total}, expected p_a(X) = {p_a}")
        if spaces[d.G.zero_character()] != h0:  # pragma: no cover
            raise InconsistentData("invariant weight space differs from h^0(omega_S)")
        if has_trivial_restrictions(d):
            flags.append("some characters restrict trivially to a stabilizer (contribution 0)")
        tame = True
    else:
        chi = q = h0 = reduced = rho = None
        fibers = None
        tame = None
        flags.append(f"{d.G.describe()} is not diagonalizable: chi, q, rho and fibers not computed")
    return InvariantReport(
        deg_omega_X=deg,
        p_a_X=p_a,
        kappa=kappa,
        betti=b,
        euler=euler_number(b),
        q=q,
        chi=chi,
        h0_omega=h0,
        pic_reduced=reduced,
        rho=rho,
        fibers=fibers,
        class_row=row,
        aut0=aut0,
        gY=d.gY,
        tame=tame,
        flags=flags,
    )


TABLE_COLUMNS = ("kappa", "S", "X", "g(Y)", "b1", "b2")


def report_row(r: InvariantReport) -> tuple[str, ...]:
    return (
        str(kappa_str(r.kappa)),
        r.class_row,
        r.x_column,
        str(r.gY),
        str(r.betti[1]),
        str(r.betti[2]),
    )


def format_table(reports: Iterable[InvariantReport]) -> str:
    rows = [TABLE_COLUMNS] + [report_row(r) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    lines = []
    for k, row in enumerate(rows):
        lines.append(" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def format_details(r: InvariantReport) -> str:
    def show(v):
        return "unknown" if v is None else str(v)

    fibers = "unknown" if r.fibers is None else (
        ", ".join(f"m={f.multiplicity}{' tame' if f.tame else ' wild'} Pic0={f.pic0}" for f in r.fibers) or "none"
    )
    lines = [
        f"deg omega_X   {r.deg_omega_X}",
        f"p_a(X)        {r.p_a_X}",
        f"betti         {' '.join(map(str, r.betti))}  (e = {r.euler})",
        f"q             {show(r.q)}",
        f"chi(O_S)      {show(r.chi)}",
        f"h0(omega_S)   {show(r.h0_omega)}",
        f"Pic reduced   {show(r.pic_reduced)}",
        f"rho           {show(r.rho)}",
        f"fibers        {fibers}",
        f"Aut0(S)       {r.aut0}",
    ]
    lines += [f"flag          {f}" for f in r.flags]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# building consistent orbit data


def dual_order(gamma: Sequence[int], moduli: Sequence[int]) -> int:
    return math.lcm(*(n // math.gcd(g, n) for g, n in zip(gamma, moduli)))


def orbit_from_monodromy(G: GroupSchemeDesc, gamma: Sequence[int], label: str | None = None) -> OrbitDatum:
    """Orbit whose characters pair with ``gamma`` in ``prod Z/n_i``.

    The stabilizer has order ``n = ord(gamma)`` and is embedded with exponents
    ``gamma_i n / n_i``; the weight is the first character that restricts to
    the generator 1, so that ``m(y, lam) / n == sum lam_i gamma_i / n_i mod 1``.
    """
    moduli = G.character_moduli()
    gamma = tuple(g % m for g, m in zip(gamma, moduli))
    n = dual_order(gamma, moduli)
    if n < 2:
        raise InvalidWeight("the zero element gives a free orbit")
    stab = tuple(g * n // m % n for g, m in zip(gamma, moduli))
    for nu in G.iter_characters():
        if nu.restrict(n, stab) == 1:
            return OrbitDatum(n, nu, stab, label)
    raise InvalidWeight(f"no weight restricts to a generator for {gamma}")  # pragma: no cover


def surface_from_monodromy(
    p: int,
    G: GroupSchemeDesc,
    gY: int,
    gammas: Iterable[Sequence[int]],
    e_type: str = "ordinary",
    x_hint: str = "unknown",
    hom_rank: int = 0,
) -> SurfaceData:
    orbits = tuple(orbit_from_monodromy(G, g) for g in gammas)
    return SurfaceData(p, G, gY, orbits, e_type, x_hint, hom_rank)
