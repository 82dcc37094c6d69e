"""Exact arithmetic: finite fields, sparse multivariate polynomials,
truncated (nilpotent) polynomial algebras and truncated power series.

Field elements are stored as plain integers in ``range(q)``.  For a prime
field this is the residue itself; for ``GF(p, k)`` the integer is the base-p
digit vector of a polynomial in the generator ``g`` reduced modulo a fixed
primitive polynomial.  The residues ``0..p-1`` are therefore the prime
subfield in every field of characteristic ``p``.

All objects are immutable after construction.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterable, Mapping, Sequence

from .errors import ModulusMismatch, NotAUnit, UnknownVariable

INFINITY = math.inf

# add tables are only precomputed below this size
_ADD_TABLE_LIMIT = 1024
MAX_FIELD_SIZE = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


class FiniteField:
    """The finite field with ``p**k`` elements.

    Use :func:`GF` rather than the constructor; fields are cached so that
    identity comparison works.
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        q = p**k
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds {MAX_FIELD_SIZE}")
        self.p = p
        self.k = k
        self.q = q
        self.modulus: tuple[int, ...] = ()
        if k > 1:
            self._build_tables()

    # -- construction of GF(p^k) -------------------------------------------

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        self._digits = [self._to_digits(v) for v in range(q)]
        for tail in itertools.product(range(p), repeat=k):
            if tail[0] == 0:
                continue
            modulus = tail + (1,)
            exp = self._powers_of_generator(modulus)
            if exp is not None:
                break
        else:  # pragma: no cover - a primitive polynomial always exists
            raise RuntimeError("no primitive polynomial found")
        self.modulus = modulus
        self._exp = exp + exp
        self._log = [0] * q
        for i, v in enumerate(exp):
            self._log[v] = i
        if q <= _ADD_TABLE_LIMIT:
            self._add_table = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_table = None

    def _to_digits(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            v, d = divmod(v, self.p)
            out.append(d)
        return tuple(out)

    def _from_digits(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def _powers_of_generator(self, modulus: tuple[int, ...]) -> list[int] | None:
        """Powers of x modulo ``modulus`` if x is primitive, else None."""
        p, k = self.p, self.k
        cur = [1] + [0] * (k - 1)
        seen = []
        for i in range(self.q - 1):
            v = self._from_digits(cur)
            if i > 0 and v == 1:
                return None
            seen.append(v)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m) % p for c, m in zip(cur, modulus)]
        if self._from_digits(cur) != 1:
            return None
        return seen

    def _add_digits(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    # -- arithmetic on raw values -------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self._from_digits([-d % self.p for d in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def scalar(self, n: int, a: int) -> int:
        """``n * a`` for an integer ``n``."""
        return self.mul(self.from_int(n), a)

    def elements(self) -> range:
        return range(self.q)

    def generator(self) -> int:
        """A primitive element (``g`` for extensions, a primitive root otherwise)."""
        if self.k > 1:
            return self.p
        for g in range(1, self.p):
            if all(pow(g, (self.p - 1) // f, self.p) != 1 for f in _prime_factors(self.p - 1)):
                return g
        raise AssertionError  # pragma: no cover

    def contains(self, other: FiniteField) -> bool:
        """True when ``other`` embeds compatibly with our integer encoding."""
        return other is self or (other.p == self.p and other.k == 1)

    def render(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        parts = []
        for i, d in reversed(list(enumerate(self._digits[a]))):
            if d == 0:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                parts.append(str(d))
            else:
                parts.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(parts) if parts else "0"

    def __call__(self, value: int) -> FpElt:
        return FpElt(value, self)

    def element(self, raw: int) -> FpElt:
        """Wrap a raw encoded value (for extension fields, not an integer image)."""
        if not 0 <= raw < self.q:
            raise ValueError(f"raw value {raw} outside GF({self.q})")
        return FpElt._raw(raw, self)

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (GF, (self.p, self.k))


def _prime_factors(n: int) -> list[int]:
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


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


def GFq(q: int) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    return GF(*pk)


class FpElt:
    """An element of a finite field, with operator overloading.

    Integers are coerced through the prime subfield, so ``F(3) + 4`` works.
    """

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: FiniteField | int):
        if isinstance(field, int):
            field = GF(field)
        self.field = field
        self.value = field.from_int(value)

    @classmethod
    def _raw(cls, raw: int, field: FiniteField) -> FpElt:
        obj = cls.__new__(cls)
        obj.field = field
        obj.value = raw
        return obj

    @property
    def p(self) -> int:
        return self.field.p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElt):
            if other.field is not self.field:
                raise ModulusMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, raw: int) -> FpElt:
        return FpElt._raw(raw, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> FpElt:
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FpElt):
            return other.field is self.field and other.value == self.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FpElt({self.field.render(self.value)}, {self.field!r})"

    def __str__(self) -> str:
        return self.field.render(self.value)


# ---------------------------------------------------------------------------
# sparse term dictionaries: {exponent tuple: raw coefficient}

Terms = dict


def _add_terms(F: FiniteField, a: Mapping, b: Mapping, sign: int = 1) -> Terms:
    out = dict(a)
    for e, c in b.items():
        if sign < 0:
            c = F.neg(c)
        v = F.add(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul_terms(F: FiniteField, a: Mapping, b: Mapping, bounds: Sequence[int] | None = None) -> Terms:
    out: Terms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if bounds is not None and any(x >= d for x, d in zip(e, bounds)):
                continue
            v = F.add(out.get(e, 0), F.mul(ca, cb))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _scale_terms(F: FiniteField, a: Mapping, c: int) -> Terms:
    if c == 0:
        return {}
    return {e: F.mul(v, c) for e, v in a.items()}


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


def _render_terms(F: FiniteField, names: Sequence[str], terms: Mapping) -> str:
    if not terms:
        return "0"
    pieces = []
    for e in sorted(terms, key=_grlex_key, reverse=True):
        c = terms[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        coef = F.render(c)
        if F.k > 1 and "+" in coef:
            coef = f"({coef})"
        if not mono:
            pieces.append(coef)
        elif c == 1:
            pieces.append(mono)
        else:
            pieces.append(f"{coef}*{mono}")
    return " + ".join(pieces)


def _coerce_scalar(F: FiniteField, c) -> int:
    if isinstance(c, FpElt):
        if not F.contains(c.field):
            raise ModulusMismatch(f"{c.field} is not a subfield of {F}")
        return c.value
    if isinstance(c, int):
        return F.from_int(c)
    raise TypeError(f"cannot use {type(c).__name__} as a scalar")


# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse multivariate polynomial over a finite field.

    >>> F = GF(5)
    >>> x, y = MultiPoly.gens(F, "xy")
    >>> str((x + y) * (x - y))
    'x^2 + 4*y^2'
    """

    __slots__ = ("field", "variables", "terms")

    def __init__(self, field: FiniteField, variables: Sequence[str], terms: Mapping | None = None):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        clean: Terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.variables):
                raise ValueError(f"exponent {e} does not match variables {self.variables}")
            v = _coerce_scalar(field, c)
            if v:
                clean[e] = v
        self.terms = clean

    @classmethod
    def _raw(cls, field, variables, terms) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.field = field
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def gens(cls, field: FiniteField, variables: Iterable[str]) -> tuple[MultiPoly, ...]:
        names = tuple(variables)
        n = len(names)
        return tuple(
            cls._raw(field, names, {tuple(int(i == j) for j in range(n)): 1}) for i in range(n)
        )

    @classmethod
    def constant(cls, field: FiniteField, variables: Iterable[str], c) -> MultiPoly:
        names = tuple(variables)
        v = _coerce_scalar(field, c)
        return cls._raw(field, names, {(0,) * len(names): v} if v else {})

    # -- helpers ------------------------------------------------------------

    def _check(self, other: MultiPoly) -> None:
        if other.field is not self.field:
            raise ModulusMismatch(f"{self.field} vs {other.field}")
        if other.variables != self.variables:
            raise ValueError(f"variable sets differ: {self.variables} vs {other.variables}")

    def _lift(self, other) -> MultiPoly | None:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, FpElt)):
            return MultiPoly.constant(self.field, self.variables, other)
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly._raw(self.field, self.variables, _add_terms(self.field, self.terms, o.terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly._raw(self.field, self.variables, _add_terms(self.field, self.terms, o.terms, -1))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        F = self.field
        return MultiPoly._raw(F, self.variables, {e: F.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FpElt)):
            c = _coerce_scalar(self.field, other)
            return MultiPoly._raw(self.field, self.variables, _scale_terms(self.field, self.terms, c))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly._raw(self.field, self.variables, _mul_terms(self.field, self.terms, o.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return (
                other.field is self.field
                and other.variables == self.variables
                and other.terms == self.terms
            )
        if isinstance(other, (int, FpElt)):
            return self == MultiPoly.constant(self.field, self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.variables, frozenset(self.terms.items())))

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exponent: Sequence[int]) -> FpElt:
        return self.field.element(self.terms.get(tuple(exponent), 0))

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(f"{var!r} not in {self.variables}") from None

    def partial(self, var: str) -> MultiPoly:
        """Formal partial derivative; exponent multipliers are reduced mod p."""
        i = self._index(var)
        F = self.field
        out: Terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            v = F.scalar(e[i], c)
            if v:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ne] = v
        return MultiPoly._raw(F, self.variables, out)

    def evaluate(self, point: Sequence[int] | Mapping[str, int], field: FiniteField | None = None) -> int:
        """Evaluate at raw values of ``field`` (default: the coefficient field).

        ``field`` must contain the coefficient field.
        """
        K = field or self.field
        if not K.contains(self.field):
            raise ModulusMismatch(f"cannot evaluate {self.field} polynomial over {K}")
        if isinstance(point, Mapping):
            point = [point[v] for v in self.variables]
        if len(point) != len(self.variables):
            raise ValueError("point has wrong length")
        powers: list[dict[int, int]] = [{0: 1} for _ in point]
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                cache = powers[i]
                pk = cache.get(k)
                if pk is None:
                    pk = cache[k] = K.pow(point[i], k)
                term = K.mul(term, pk)
                if term == 0:
                    break
            total = K.add(total, term)
        return total

    def substitute(self, values: Mapping[str, MultiPoly | int | FpElt]) -> MultiPoly:
        """Replace variables by polynomials over the same variable set."""
        result = MultiPoly.constant(self.field, self.variables, 0)
        gens = dict(zip(self.variables, MultiPoly.gens(self.field, self.variables)))
        images = [
            values[v] if v in values else gens[v] for v in self.variables
        ]
        images = [self._lift(im) for im in images]
        for e, c in self.terms.items():
            term = MultiPoly._raw(self.field, self.variables, {(0,) * len(e): c})
            for im, k in zip(images, e):
                if k:
                    term = term * im**k
            result = result + term
        return result

    def __str__(self) -> str:
        return _render_terms(self.field, self.variables, self.terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self}; {self.field!r}[{','.join(self.variables)}])"


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if a.field.p != b.field.p or a.field is not b.field:
        raise ModulusMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(f: MultiPoly, var: str) -> MultiPoly:
    return f.partial(var)


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, lowest degree first)


def _utrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _umod(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    a = _utrim(list(a))
    b = _utrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bc))
        _utrim(a)
    return a


def upoly_gcd(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Monic gcd of two univariate polynomials given as raw coefficient lists."""
    a = _utrim(list(a))
    b = _utrim(list(b))
    while b:
        a, b = b, _umod(F, a, b)
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def upoly_derivative(F: FiniteField, a: Sequence[int]) -> list[int]:
    return _utrim([F.scalar(i, c) for i, c in enumerate(a)][1:])


# ---------------------------------------------------------------------------


class TruncatedAlgebra:
    """``F[u_1..u_n] / (u_1^{d_1}, ..., u_n^{d_n})``."""

    def __init__(self, field: FiniteField | int, variables: Sequence[str], degrees: Sequence[int]):
        if isinstance(field, int):
            field = GF(field)
        if len(variables) != len(degrees):
            raise ValueError("one nilpotency degree per variable")
        if any(d < 1 for d in degrees):
            raise ValueError("nilpotency degrees must be >= 1")
        self.field = field
        self.variables = tuple(variables)
        self.degrees = tuple(degrees)

    @property
    def p(self) -> int:
        return self.field.p

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedAlgebra)
            and other.field is self.field
            and other.variables == self.variables
            and other.degrees == self.degrees
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.variables, self.degrees))

    def __repr__(self) -> str:
        rel = ", ".join(f"{v}^{d}" for v, d in zip(self.variables, self.degrees))
        return f"{self.field!r}[{','.join(self.variables)}]/({rel})"

    def reduce(self, e: MultiPoly) -> TruncElt:
        if e.field is not self.field:
            raise ModulusMismatch(f"{e.field} vs {self.field}")
        if e.variables != self.variables:
            raise ValueError(f"variables {e.variables} do not match {self.variables}")
        terms = {
            k: c for k, c in e.terms.items() if all(x < d for x, d in zip(k, self.degrees))
        }
        return TruncElt._raw(self, terms)

    def __call__(self, value) -> TruncElt:
        if isinstance(value, TruncElt):
            if value.algebra != self:
                raise ValueError("element of a different algebra")
            return value
        if isinstance(value, MultiPoly):
            return self.reduce(value)
        c = _coerce_scalar(self.field, value)
        return TruncElt._raw(self, {(0,) * len(self.variables): c} if c else {})

    def gens(self) -> tuple[TruncElt, ...]:
        return tuple(self.reduce(g) for g in MultiPoly.gens(self.field, self.variables))

    def zero(self) -> TruncElt:
        return TruncElt._raw(self, {})

    def one(self) -> TruncElt:
        return self(1)

    def nilpotency_bound(self) -> int:
        """Every element of the maximal ideal vanishes at this power."""
        return sum(d - 1 for d in self.degrees) + 1


def trunc_reduce(e: MultiPoly, degrees: Sequence[int]) -> TruncElt:
    return TruncatedAlgebra(e.field, e.variables, degrees).reduce(e)


class TruncElt:
    """Element of a :class:`TruncatedAlgebra`."""

    __slots__ = ("algebra", "terms")

    @classmethod
    def _raw(cls, algebra: TruncatedAlgebra, terms: Terms) -> TruncElt:
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        return obj

    @property
    def field(self) -> FiniteField:
        return self.algebra.field

    def _lift(self, other) -> TruncElt | None:
        if isinstance(other, TruncElt):
            if other.algebra != self.algebra:
                raise ModulusMismatch(f"{self.algebra!r} vs {other.algebra!r}")
            return other
        if isinstance(other, (int, FpElt)):
            return self.algebra(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TruncElt._raw(self.algebra, _add_terms(self.field, self.terms, o.terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TruncElt._raw(self.algebra, _add_terms(self.field, self.terms, o.terms, -1))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        F = self.field
        return TruncElt._raw(self.algebra, {e: F.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TruncElt._raw(
            self.algebra, _mul_terms(self.field, self.terms, o.terms, self.algebra.degrees)
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.algebra.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._lift(other) if isinstance(other, (TruncElt, int, FpElt)) else None
        if o is None:
            return NotImplemented
        return o.terms == self.terms

    def __hash__(self) -> int:
        return hash((self.algebra, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> FpElt:
        return self.field.element(self.terms.get((0,) * len(self.algebra.variables), 0))

    def is_unit(self) -> bool:
        return bool(self.constant_term())

    def is_nilpotent(self) -> bool:
        return not self.is_unit()

    def inverse(self) -> TruncElt:
        """Exact inverse via the terminating geometric series."""
        c0 = self.constant_term()
        if not c0:
            raise NotAUnit(f"{self} has zero constant term")
        F = self.field
        inv_c0 = F.inv(c0.value)
        # self = c0 (1 - n)  with n nilpotent
        n = -(self * self.algebra.field.element(inv_c0)) + 1
        acc = self.algebra.one()
        power = self.algebra.one()
        for _ in range(self.algebra.nilpotency_bound()):
            power = power * n
            if power.is_zero():
                break
            acc = acc + power
        return acc * F.element(inv_c0)

    def to_poly(self) -> MultiPoly:
        return MultiPoly._raw(self.field, self.algebra.variables, dict(self.terms))

    def __str__(self) -> str:
        return _render_terms(self.field, self.algebra.variables, self.terms)

    def __repr__(self) -> str:
        return f"TruncElt({self}; {self.algebra!r})"


def trunc_arith(a: TruncElt, b: TruncElt, op: str) -> TruncElt:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def trunc_invert(a: TruncElt) -> TruncElt:
    return a.inverse()


# ---------------------------------------------------------------------------

DEFAULT_PRECISION = 16


class PowerSeries:
    """Power series ``c_0 + c_1 t + ... + c_{N-1} t^{N-1} + O(t^N)``."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: FiniteField | int, coeffs: Iterable, precision: int | None = None, var: str = "t"):
        if isinstance(field, int):
            field = GF(field)
        cs = [_coerce_scalar(field, c) for c in coeffs]
        if precision is None:
            precision = len(cs)
        if precision < 1:
            raise ValueError("precision must be >= 1")
        cs = (cs + [0] * precision)[:precision]
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def _raw(cls, field, coeffs, var) -> PowerSeries:
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        obj.var = var
        return obj

    @classmethod
    def gen(cls, field: FiniteField | int, precision: int = DEFAULT_PRECISION, var: str = "t") -> PowerSeries:
        return cls(field, [0, 1], precision, var)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def with_precision(self, n: int) -> PowerSeries:
        """Truncate, or pad with zeros (only exact for polynomial inputs)."""
        return PowerSeries._raw(self.field, (self.coeffs + (0,) * n)[:n], self.var)

    def _lift(self, other) -> PowerSeries | None:
        if isinstance(other, PowerSeries):
            if other.field is not self.field:
                raise ModulusMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, FpElt)):
            return PowerSeries(self.field, [other], self.precision, self.var)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = min(self.precision, o.precision)
        F = self.field
        return PowerSeries._raw(F, [F.add(a, b) for a, b in zip(self.coeffs[:n], o.coeffs[:n])], self.var)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return PowerSeries._raw(F, [F.neg(a) for a in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        F = self.field
        n = min(self.precision, o.precision)
        out = [0] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a == 0:
                continue
            for j in range(n - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return PowerSeries._raw(F, out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = PowerSeries(self.field, [1], self.precision, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, PowerSeries):
            return other.field is self.field and other.coeffs == self.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.coeffs))

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INFINITY

    def inverse(self) -> PowerSeries:
        F = self.field
        c0 = self.coeffs[0]
        if c0 == 0:
            raise NotAUnit("series with zero constant term is not invertible")
        n = self.precision
        inv0 = F.inv(c0)
        out = [inv0] + [0] * (n - 1)
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    acc = F.add(acc, F.mul(self.coeffs[j], out[k - j]))
            out[k] = F.neg(F.mul(acc, inv0))
        return PowerSeries._raw(F, out, self.var)

    def compose(self, inner: PowerSeries) -> PowerSeries:
        """``self(inner)``; ``inner`` must have positive valuation."""
        if inner.field is not self.field:
            raise ModulusMismatch(f"{self.field} vs {inner.field}")
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.precision, inner.precision)
        inner = inner.with_precision(n)
        result = PowerSeries(self.field, [0], n, self.var)
        for c in reversed(self.coeffs[:n]):
            result = result * inner + self.field.element(c)
        return result

    def __getitem__(self, i: int) -> FpElt:
        return self.field.element(self.coeffs[i])

    def __str__(self) -> str:
        F = self.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            coef = F.render(c)
            if not mono:
                parts.append(coef)
            else:
                parts.append(mono if c == 1 else f"{coef}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.precision})"

    def __repr__(self) -> str:
        return f"PowerSeries({self})"


def series_invert(s: PowerSeries) -> PowerSeries:
    return s.inverse()


def series_valuation(s: PowerSeries):
    return s.valuation()
