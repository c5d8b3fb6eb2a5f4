"""Base fields K = Q or Q(sqrt d), their elements, ideals and places.

Elements are stored as ``x + y*sqrt(d)`` with rational ``x, y``.  Ideals
are Z-lattices in the integral basis ``(1, w)`` where ``w = sqrt(d)`` or
``(1 + sqrt(d))/2``, kept in Hermite normal form with a minimal integer
denominator, so equality and hashing are structural.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy import sqrt_mod

from . import arith
from .arith import hnf, hnf_contains, kronecker_symbol
from .errors import FieldMismatch, InputError, ResourceRefusal

DEFAULT_DISC_BOUND = 10**6


@lru_cache(maxsize=None)
def ring_data(d: int):
    """(degree, trace of w, norm of w) for the maximal order of Q(sqrt d)."""
    if d == 1:
        return 1, 0, 0
    if d % 4 == 1:
        return 2, 1, (1 - d) // 4
    return 2, 0, -d


@dataclass(frozen=True)
class FieldElem:
    d: int
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y) if self.d != 1 else Fraction(0))

    def _lift(self, other):
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise FieldMismatch("elements of different fields")
            return other
        return FieldElem(self.d, Fraction(other))

    def __add__(self, other):
        o = self._lift(other)
        return FieldElem(self.d, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.d, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return FieldElem(self.d, self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        return self * o.conj() * (1 / n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        result = FieldElem(self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def conj(self):
        return FieldElem(self.d, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_rational(self) -> bool:
        return self.y == 0

    def coords(self):
        """Coordinates (a, b) with self = a + b*w."""
        if self.d == 1:
            return (self.x,)
        if self.d % 4 == 1:
            return (self.x - self.y, 2 * self.y)
        return (self.x, self.y)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())

    def sign(self, index: int) -> int:
        """Sign under the real embedding sqrt(d) -> (+/-)sqrt(d) for index 0/1."""
        x, y = self.x, (self.y if index == 0 else -self.y)
        if y == 0:
            return (x > 0) - (x < 0)
        if x == 0 or (x > 0) == (y > 0):
            return 1 if (y > 0 if x == 0 else x > 0) else -1
        # opposite signs: compare x^2 with d*y^2
        if x * x > self.d * y * y:
            return 1 if x > 0 else -1
        return 1 if y > 0 else -1

    def __repr__(self):
        if self.d == 1 or self.y == 0:
            return str(self.x)
        return f"{self.x}{'+' if self.y >= 0 else '-'}{abs(self.y)}r{self.d}"


def from_coords(d: int, coords) -> FieldElem:
    if d == 1:
        return FieldElem(1, coords[0])
    a, b = (Fraction(c) for c in coords)
    if d % 4 == 1:
        return FieldElem(d, a + b / 2, b / 2)
    return FieldElem(d, a, b)


def coord_mul(d: int, u, v):
    """Product of two coordinate vectors in the basis (1, w)."""
    n, t, nw = ring_data(d)
    if n == 1:
        return (u[0] * v[0],)
    a0, a1 = u
    b0, b1 = v
    c = a1 * b1
    return (a0 * b0 - nw * c, a0 * b1 + a1 * b0 + t * c)


@dataclass(frozen=True)
class Ideal:
    """Fractional ideal (1/den) * M with M an integral HNF lattice."""

    d: int
    den: int
    basis: tuple

    @staticmethod
    def from_generators(d: int, gens) -> "Ideal":
        n = ring_data(d)[0]
        gens = [g if isinstance(g, FieldElem) else FieldElem(d, g) for g in gens]
        gens = [g for g in gens if g]
        if not gens:
            raise InputError("the zero ideal is not supported")
        omega = from_coords(d, (0, 1)) if n == 2 else None
        module = []
        for g in gens:
            module.append(g)
            if omega is not None:
                module.append(g * omega)
        coords = [m.coords() for m in module]
        den = 1
        for c in coords:
            for q in c:
                den = arith.lcm(den, q.denominator)
        vecs = [tuple(int(q * den) for q in c) for c in coords]
        return Ideal._normalized(d, den, hnf(vecs, n))

    @staticmethod
    def _normalized(d, den, basis):
        g = den
        for row in basis:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            den //= g
            basis = tuple(tuple(x // g for x in row) for row in basis)
        return Ideal(d, den, basis)

    @property
    def degree(self) -> int:
        return len(self.basis)

    def elements(self):
        return [from_coords(self.d, tuple(Fraction(x, self.den) for x in row)) for row in self.basis]

    def norm(self) -> Fraction:
        prod = 1
        for i, row in enumerate(self.basis):
            prod *= row[i]
        return Fraction(prod, self.den ** self.degree)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit(self) -> bool:
        return self.den == 1 and self.norm() == 1

    def _check(self, other):
        if self.d != other.d:
            raise FieldMismatch("ideals over different fields")

    def __mul__(self, other):
        if isinstance(other, Ideal):
            self._check(other)
            gens = [a * b for a in self.elements() for b in other.elements()]
        else:
            other = other if isinstance(other, FieldElem) else FieldElem(self.d, other)
            gens = [a * other for a in self.elements()]
        return Ideal.from_generators(self.d, gens)

    __rmul__ = __mul__

    def __add__(self, other):
        self._check(other)
        return Ideal.from_generators(self.d, self.elements() + other.elements())

    def conj(self):
        return Ideal.from_generators(self.d, [e.conj() for e in self.elements()])

    def inverse(self):
        if self.degree == 1:
            return Ideal.from_generators(self.d, [1 / self.elements()[0]])
        return self.conj() * FieldElem(self.d, 1 / self.norm())

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = unit_ideal(self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def contains(self, elem) -> bool:
        elem = elem if isinstance(elem, FieldElem) else FieldElem(self.d, elem)
        scaled = [c * self.den for c in elem.coords()]
        if any(c.denominator != 1 for c in scaled):
            return False
        return hnf_contains(tuple(int(c) for c in scaled), self.basis)

    def contains_ideal(self, other) -> bool:
        return all(self.contains(e) for e in other.elements())

    def valuation(self, P: "PrimeIdeal") -> int:
        return min(elem_valuation(e, P) for e in self.elements() if e)

    def factor(self):
        """Prime factorization as a list of (PrimeIdeal, exponent), sorted."""
        nrm = self.norm()
        cand = set(arith.factor(nrm.numerator)) | set(arith.factor(nrm.denominator))
        cand |= set(arith.factor(self.den))
        out = []
        for p in sorted(cand):
            for P in primes_above(self.d, p):
                v = self.valuation(P)
                if v:
                    out.append((P, v))
        return out

    def is_coprime(self, other) -> bool:
        mine = {P for P, _ in self.factor()}
        return not any(P in mine for P, _ in other.factor())

    def __repr__(self):
        return f"Ideal(d={self.d}, den={self.den}, basis={self.basis})"


def unit_ideal(d: int) -> Ideal:
    return Ideal.from_generators(d, [1])


def principal(d: int, g) -> Ideal:
    return Ideal.from_generators(d, [g])


@dataclass(frozen=True)
class PrimeIdeal:
    """A finite place of K: prime ideal above the rational prime p."""

    p: int
    e: int
    f: int
    index: int
    ideal: Ideal = field(repr=False)
    root: int | None = field(default=None, compare=False, repr=False)
    uniformizer: FieldElem | None = field(default=None, compare=False, repr=False)
    unique: bool = field(default=True, compare=False, repr=False)

    @property
    def d(self) -> int:
        return self.ideal.d

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def is_dyadic(self) -> bool:
        return self.p == 2

    @property
    def label(self) -> str:
        return str(self.p) if self.unique else f"{self.p}.{self.index}"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class RealPlace:
    index: int

    @property
    def label(self) -> str:
        return f"infty_{self.index}"

    def __str__(self):
        return self.label


@lru_cache(maxsize=None)
def primes_above(d: int, p: int):
    """The prime ideals of O_K above p, with splitting data."""
    arith.check_prime(p)
    if d == 1:
        return (PrimeIdeal(p, 1, 1, 0, principal(1, p), root=0, uniformizer=FieldElem(1, p)),)
    n, t, nw = ring_data(d)
    disc = d if d % 4 == 1 else 4 * d
    k = kronecker_symbol(disc, p)
    if k == -1:
        return (PrimeIdeal(p, 1, 2, 0, principal(d, p), uniformizer=FieldElem(d, p)),)
    if p == 2:
        roots = sorted({r for r in range(2) if (r * r - t * r + nw) % 2 == 0})
    else:
        s = int(sqrt_mod(disc % p, p)) if disc % p else 0
        inv2 = pow(2, -1, p)
        roots = sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})
    omega = from_coords(d, (0, 1))
    out = []
    if k == 0:
        r = roots[0]
        pi = omega - r
        out.append(PrimeIdeal(p, 2, 1, 0, Ideal.from_generators(d, [p, pi]), root=r, uniformizer=pi))
    else:
        for i, r in enumerate(roots):
            pi = omega - r
            if (r * r - t * r + nw) % (p * p) == 0:
                pi = omega - (r + p)
            out.append(
                PrimeIdeal(p, 1, 1, i, Ideal.from_generators(d, [p, omega - r]), root=r, uniformizer=pi, unique=False)
            )
    return tuple(out)


def _int_coords(elem: FieldElem):
    """Integer coordinates of D*elem and D, with D the least common denominator."""
    c = elem.coords()
    den = 1
    for q in c:
        den = arith.lcm(den, q.denominator)
    return tuple(int(q * den) for q in c), den


def _coprime_part_valuation(Z, P: PrimeIdeal) -> int:
    """v_P of an integral element whose coordinates have content prime to p."""
    if P.f == 2:
        return 0
    if len(Z) == 1:
        return 0
    p = P.p
    nrm = _coord_norm(P.d, Z)
    if P.e == 2:
        return arith.int_valuation(nrm, p) if nrm % p == 0 else 0
    if (Z[0] + Z[1] * P.root) % p:
        return 0
    return arith.int_valuation(nrm, p)


def _coord_norm(d, Z):
    n, t, nw = ring_data(d)
    if n == 1:
        return Z[0]
    a, b = Z
    return a * a + t * a * b + nw * b * b


def elem_valuation(elem, P: PrimeIdeal) -> int:
    """Exact P-adic valuation of a nonzero element of K."""
    if not isinstance(elem, FieldElem):
        elem = FieldElem(P.d, elem)
    if not elem:
        raise InputError("valuation of zero is undefined")
    Z, D = _int_coords(elem)
    p = P.p
    content = 0
    for z in Z:
        content = gcd(content, z)
    k = arith.int_valuation(content, p)
    if k:
        Z = tuple(z // p**k for z in Z)
    return P.e * k + _coprime_part_valuation(Z, P) - P.e * arith.int_valuation(D, p)


def factor_rational_prime(K, p: int):
    """Factorization p*O_K = prod P^e as a list of (PrimeIdeal, e)."""
    d = K.d if hasattr(K, "d") else K
    return [(P, P.e) for P in primes_above(d, p)]


def ideal_mul(a: Ideal, b: Ideal) -> Ideal:
    return a * b


def ideal_norm(a: Ideal):
    n = a.norm()
    return int(n) if n.denominator == 1 else n


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    if a.d != b.d:
        raise FieldMismatch("ideals over different fields")
    return a == b


class BaseField:
    """The base number field K = Q (d = 1) or Q(sqrt d)."""

    def __init__(self, d: int):
        self.d = d
        self.degree, self.tr_w, self.nm_w = ring_data(d)
        if d == 1:
            self.disc = 1
        else:
            self.disc = d if d % 4 == 1 else 4 * d
        self.real_places = tuple(RealPlace(i) for i in range(self.num_real_places))
        self.fundamental_unit = None
        self.unit_norm = None
        self.class_group = None

    @property
    def num_real_places(self) -> int:
        if self.d == 1:
            return 1
        return 2 if self.d > 0 else 0

    @property
    def signature(self):
        if self.d == 1:
            return (1, 0)
        return (2, 0) if self.d > 0 else (0, 1)

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def is_real(self) -> bool:
        return self.d > 1

    @property
    def class_number(self) -> int:
        return self.class_group.order

    def elem(self, x, y=0) -> FieldElem:
        return FieldElem(self.d, x, y)

    def from_coords(self, coords) -> FieldElem:
        return from_coords(self.d, coords)

    def ideal(self, *gens) -> Ideal:
        return Ideal.from_generators(self.d, gens)

    def unit_ideal(self) -> Ideal:
        return unit_ideal(self.d)

    def primes_above(self, p: int):
        return primes_above(self.d, p)

    def primes(self, start: int = 2, stop: int | None = None):
        """Prime ideals ordered by residue characteristic, from ``start``."""
        from sympy import nextprime

        p = start - 1
        while True:
            p = nextprime(p)
            if stop is not None and p > stop:
                return
            yield from primes_above(self.d, p)

    def places_label(self, v) -> str:
        return v.label

    def __eq__(self, other):
        return isinstance(other, BaseField) and other.d == self.d

    def __hash__(self):
        return hash(("BaseField", self.d))

    def __repr__(self):
        return "BaseField(Q)" if self.d == 1 else f"BaseField(Q(sqrt({self.d})))"


_FIELDS: dict = {}


def make_field(d: int, disc_bound: int = DEFAULT_DISC_BOUND) -> BaseField:
    """Build K = Q(sqrt d) with unit and class-group data (d = 1 gives Q)."""
    if d == 0 or (d != 1 and not arith.is_squarefree(d)):
        raise InputError(f"d = {d} is not a nonzero squarefree integer")
    key = (d, disc_bound)
    if key in _FIELDS:
        return _FIELDS[key]
    K = BaseField(d)
    if abs(K.disc) > disc_bound:
        raise ResourceRefusal(f"|disc| = {abs(K.disc)} exceeds bound {disc_bound}")
    from . import classgroup

    if K.is_real:
        K.fundamental_unit = classgroup.fundamental_unit(d)
        K.unit_norm = int(K.fundamental_unit.norm())
    K.class_group = classgroup.compute_class_group(K)
    _FIELDS[key] = K
    return K


def isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1
