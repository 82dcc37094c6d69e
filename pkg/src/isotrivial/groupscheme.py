"""Finite group scheme descriptors.

A descriptor is an ordered product of atoms:

* ``ConstantCyclic(n)``  the constant group Z/nZ,
* ``Mu(n)``              the multiplicative group scheme of n-th roots of unity,
* ``AlphaPr(r)``         alpha_{p^r}, order p^r,
* ``SupersingularE2()``  the 2-torsion of a supersingular elliptic curve (p = 2).

Characters are only defined for diagonalizable descriptors.  A constant cyclic
atom of order prime to p is identified with ``Mu(n)`` (the base field is
algebraically closed), so every diagonalizable descriptor has character group
``prod Z/n_i`` with one residue per atom.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .algebra import TruncElt, is_prime
from .errors import InvalidDescriptor, InvalidGroupPoint, InvalidWeight, NotDiagonalizable

MAX_ATOM_ORDER = 2**16


@dataclass(frozen=True)
class ConstantCyclic:
    n: int
    kind = "constant"

    def order(self, p: int) -> int:
        return self.n

    def to_json(self) -> dict:
        return {"kind": "constant", "n": self.n}


@dataclass(frozen=True)
class Mu:
    n: int
    kind = "mu"

    def order(self, p: int) -> int:
        return self.n

    def to_json(self) -> dict:
        return {"kind": "mu", "n": self.n}


@dataclass(frozen=True)
class AlphaPr:
    r: int
    kind = "alpha"

    def order(self, p: int) -> int:
        return p**self.r

    def to_json(self) -> dict:
        return {"kind": "alpha", "r": self.r}


@dataclass(frozen=True)
class SupersingularE2:
    kind = "ss_e2"

    def order(self, p: int) -> int:
        return 4

    def to_json(self) -> dict:
        return {"kind": "ss_e2"}


Atom = Union[ConstantCyclic, Mu, AlphaPr, SupersingularE2]


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def atom_is_diagonalizable(atom: Atom, p: int) -> bool:
    if isinstance(atom, Mu):
        return True
    if isinstance(atom, ConstantCyclic):
        return math.gcd(atom.n, p) == 1
    return False


@dataclass(frozen=True)
class GroupSchemeDesc:
    p: int
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not is_prime(self.p):
            raise InvalidDescriptor(f"p={self.p} is not prime")
        for a in self.factors:
            if isinstance(a, (ConstantCyclic, Mu)):
                if a.n < 1:
                    raise InvalidDescriptor(f"{a} has non-positive order")
            elif isinstance(a, AlphaPr):
                if a.r < 1:
                    raise InvalidDescriptor(f"{a} needs r >= 1")
            elif isinstance(a, SupersingularE2):
                if self.p != 2:
                    raise InvalidDescriptor("the supersingular E[2] atom only exists for p = 2")
            else:
                raise InvalidDescriptor(f"unknown atom {a!r}")
            if a.order(self.p) > MAX_ATOM_ORDER:
                raise InvalidDescriptor(f"atom order {a.order(self.p)} exceeds {MAX_ATOM_ORDER}")

    # -- numerical invariants -----------------------------------------------

    def order(self) -> int:
        return math.prod(a.order(self.p) for a in self.factors)

    def connected_etale_split(self) -> tuple[int, int]:
        """``(|G^0|, |pi_0(G)|)``."""
        conn = etale = 1
        for a in self.factors:
            if isinstance(a, Mu):
                pp = _p_part(a.n, self.p)
                conn *= pp
                etale *= a.n // pp
            elif isinstance(a, ConstantCyclic):
                etale *= a.n
            else:
                conn *= a.order(self.p)
        return conn, etale

    def is_infinitesimal(self) -> bool:
        return self.connected_etale_split()[1] == 1

    def is_constant(self) -> bool:
        return all(isinstance(a, ConstantCyclic) for a in self.factors)

    def is_diagonalizable(self) -> bool:
        return all(atom_is_diagonalizable(a, self.p) for a in self.factors)

    def character_moduli(self) -> tuple[int, ...]:
        if not self.is_diagonalizable():
            raise NotDiagonalizable(f"{self.describe()} has a non-diagonalizable factor")
        return tuple(a.n for a in self.factors)

    # -- characters ---------------------------------------------------------

    def characters(self) -> list[Character]:
        return list(self.iter_characters())

    def iter_characters(self) -> Iterator[Character]:
        moduli = self.character_moduli()
        for res in itertools.product(*(range(n) for n in moduli)):
            yield Character(res, moduli)

    def character(self, residues: Sequence[int]) -> Character:
        moduli = self.character_moduli()
        if len(residues) != len(moduli):
            raise InvalidWeight(f"expected {len(moduli)} residues, got {len(residues)}")
        return Character(tuple(r % n for r, n in zip(residues, moduli)), moduli)

    def zero_character(self) -> Character:
        return self.character([0] * len(self.factors))

    # -- cyclic subgroups ---------------------------------------------------

    def default_embedding(self, n: int) -> tuple[int, ...]:
        """Exponents ``u`` of the unique order-n subgroup ``zeta -> (zeta^u_i)``.

        Only defined when the n-torsion of G is cyclic; otherwise the caller
        has to say which subgroup is meant.
        """
        moduli = self.character_moduli()
        if self.order() % n:
            raise InvalidWeight(f"stabilizer order {n} does not divide |G| = {self.order()}")
        parts = [1] * len(moduli)
        for ell in _primes_of(n):
            holders = [i for i, m in enumerate(moduli) if m % ell == 0]
            if len(holders) != 1:
                raise InvalidWeight(
                    f"the subgroup of order {n} is not unique in {self.describe()}; give 'stab'"
                )
            i = holders[0]
            e = _p_part(n, ell)
            if moduli[i] % e:
                raise InvalidWeight(f"no cyclic subgroup of order {n} in {self.describe()}")
            parts[i] *= e
        return tuple(n // d for d in parts)

    def check_embedding(self, n: int, stab: Sequence[int]) -> tuple[int, ...]:
        moduli = self.character_moduli()
        stab = tuple(int(u) for u in stab)
        if len(stab) != len(moduli):
            raise InvalidWeight(f"stab needs {len(moduli)} exponents, got {len(stab)}")
        for u, m in zip(stab, moduli):
            if (u * m) % n:
                raise InvalidWeight(f"stab exponent {u} does not map mu_{n} into mu_{m}")
        if math.gcd(n, *stab) != 1:
            raise InvalidWeight(f"stab {stab} is not injective on mu_{n}")
        return stab

    def describe(self) -> str:
        names = []
        for a in self.factors:
            if isinstance(a, Mu):
                names.append(f"mu_{a.n}")
            elif isinstance(a, ConstantCyclic):
                names.append(f"Z/{a.n}")
            elif isinstance(a, AlphaPr):
                names.append(f"alpha_{self.p}^{a.r}" if a.r > 1 else f"alpha_{self.p}")
            else:
                names.append("E[2]ss")
        return " x ".join(names) if names else "trivial"

    def to_json(self) -> list[dict]:
        return [a.to_json() for a in self.factors]


def _primes_of(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def atom_from_json(obj: dict) -> Atom:
    kind = obj.get("kind")
    try:
        if kind == "mu":
            return Mu(int(obj["n"]))
        if kind == "constant":
            return ConstantCyclic(int(obj["n"]))
        if kind == "alpha":
            return AlphaPr(int(obj["r"]))
        if kind == "ss_e2":
            return SupersingularE2()
    except KeyError as exc:
        raise InvalidDescriptor(f"atom {obj} is missing {exc}") from None
    raise InvalidDescriptor(f"unknown atom kind {kind!r}")


def group_from_json(p: int, atoms: Sequence[dict]) -> GroupSchemeDesc:
    return GroupSchemeDesc(p, tuple(atom_from_json(a) for a in atoms))


def order(G: GroupSchemeDesc) -> int:
    return G.order()


def connected_etale_split(G: GroupSchemeDesc) -> tuple[int, int]:
    return G.connected_etale_split()


def characters(G: GroupSchemeDesc) -> list[Character]:
    return G.characters()


@dataclass(frozen=True)
class Character:
    residues: tuple
    moduli: tuple

    def __post_init__(self):
        object.__setattr__(self, "residues", tuple(self.residues))
        object.__setattr__(self, "moduli", tuple(self.moduli))

    def _check(self, other: Character) -> None:
        if other.moduli != self.moduli:
            raise InvalidWeight(f"characters of different groups: {self.moduli} vs {other.moduli}")

    def __add__(self, other: Character) -> Character:
        self._check(other)
        return Character(tuple((a + b) % n for a, b, n in zip(self.residues, other.residues, self.moduli)), self.moduli)

    def __neg__(self) -> Character:
        return Character(tuple(-a % n for a, n in zip(self.residues, self.moduli)), self.moduli)

    def __sub__(self, other: Character) -> Character:
        return self + (-other)

    def __mul__(self, k: int) -> Character:
        return Character(tuple(a * k % n for a, n in zip(self.residues, self.moduli)), self.moduli)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.residues)

    def restrict(self, n: int, stab: Sequence[int] | None = None) -> int:
        """Restriction to the cyclic subgroup ``mu_n -> G`` given by ``stab``.

        Without ``stab`` the group must be a single atom and the subgroup is
        the obvious ``mu_n`` inside it.
        """
        if stab is None:
            if len(self.moduli) != 1:
                raise InvalidWeight("restriction to a subgroup of a product needs stab exponents")
            if self.moduli[0] % n:
                raise InvalidWeight(f"{n} does not divide {self.moduli[0]}")
            stab = (1,)
        return sum(a * u for a, u in zip(self.residues, stab)) % n

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.residues) + ")"


def m_of(lam: Character, nu: Character, n: int, stab: Sequence[int] | None = None) -> int:
    """The unique ``m`` in ``[1, n]`` with ``lam == m * nu`` on the stabilizer.

    ``m == n`` exactly when ``lam`` restricts trivially, which makes the
    weight-space contribution ``1 - m/n`` vanish.
    """
    nu_r = nu.restrict(n, stab)
    if math.gcd(nu_r, n) != 1:
        raise InvalidWeight(f"weight {nu} restricts to {nu_r}, not a generator of Z/{n}")
    lam_r = lam.restrict(n, stab)
    m = lam_r * pow(nu_r, -1, n) % n if n > 1 else 0
    return m or n


# ---------------------------------------------------------------------------
# the supersingular E[2] group law over F_2[t]/(t^4)


def _check_e2_point(t: TruncElt) -> None:
    if t.field.p != 2:
        raise InvalidGroupPoint("the supersingular E[2] law lives in characteristic 2")
    if t.is_unit():
        raise InvalidGroupPoint(f"{t} is not nilpotent")
    if not (t**4).is_zero():
        raise InvalidGroupPoint(f"{t} does not satisfy t^4 = 0")


def e2_group_law(t: TruncElt, s: TruncElt) -> TruncElt:
    _check_e2_point(t)
    _check_e2_point(s)
    return t + s + t * t * s * s


def e2_negation(t: TruncElt) -> TruncElt:
    """Every point is 2-torsion, so negation is the identity."""
    _check_e2_point(t)
    return t
