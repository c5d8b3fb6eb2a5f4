"""Relative quadratic extensions L = K(sqrt delta) and quadratic O_K-orders."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from . import arith
from .errors import FieldMismatch, InconsistencyError, InputError
from .field import FieldElem, Ideal, PrimeIdeal, RealPlace, _int_coords, from_coords, primes_above, unit_ideal
from .local import disc_exponent, is_local_square, real_sign


class SplitType(Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def sqrt_in_field(y: FieldElem):
    """A square root of y in K, or None."""
    if y.d == 1 or y.y == 0:
        r = arith.rational_sqrt(y.x)
        if r is not None:
            return FieldElem(y.d, r)
        if y.d == 1:
            return None
        # x = d * w^2 possible
        w = arith.rational_sqrt(y.x / y.d)
        return FieldElem(y.d, 0, w) if w is not None else None
    n = arith.rational_sqrt(y.norm())
    if n is None:
        return None
    for cand in (y.x + n, y.x - n):
        s = arith.rational_sqrt(cand / 2)
        if s:
            r = FieldElem(y.d, s, y.y / (2 * s))
            if r * r == y:
                return r
    return None


def normalize_delta(delta: FieldElem) -> FieldElem:
    """An integral representative of delta mod squares with square-free rational content."""
    Z, D = _int_coords(delta)
    y = from_coords(delta.d, Z) * D
    c = 0
    for z in Z:
        c = gcd(c, z)
    _, r = arith.squarefree_part(c)
    return y / (r * r) if r > 1 else y


@dataclass(frozen=True)
class SplitMarker:
    """delta is a square in K: L = K x K and every quadratic order is not a domain."""

    K: object
    delta: FieldElem
    root: FieldElem

    @property
    def is_domain(self) -> bool:
        return False


class RelExt:
    """L = K(sqrt delta), delta a nonsquare."""

    def __init__(self, K, delta: FieldElem):
        self.K = K
        self.delta = delta
        self.rel_disc = unit_ideal(K.d)
        self.disc_exponents = {}
        nrm = delta.norm() if K.d != 1 else delta.x
        for p in sorted({2} | set(arith.factor(nrm.numerator))):
            for P in primes_above(K.d, p):
                k = disc_exponent(delta, P)
                if k:
                    self.disc_exponents[P] = k
                    self.rel_disc = self.rel_disc * P.ideal ** k
        self.ramified_real_places = tuple(v for v in K.real_places if real_sign(delta, v) < 0)
        self._split_cache = {}
        self._presentation = None

    @property
    def is_domain(self) -> bool:
        return True

    @property
    def ramified_primes(self):
        return sorted(self.disc_exponents, key=lambda P: (P.p, P.index))

    def splitting(self, v) -> SplitType:
        if isinstance(v, RealPlace):
            return SplitType.RAMIFIED if v in self.ramified_real_places else SplitType.SPLIT
        if v not in self._split_cache:
            if v.d != self.K.d:
                raise FieldMismatch("place of a different field")
            if v in self.disc_exponents:
                s = SplitType.RAMIFIED
            elif is_local_square(self.delta, v):
                s = SplitType.SPLIT
            else:
                s = SplitType.INERT
            self._split_cache[v] = s
        return self._split_cache[v]

    def chi(self, P: PrimeIdeal) -> int:
        s = self.splitting(P)
        if s is SplitType.RAMIFIED:
            raise InputError(f"chi undefined at the ramified prime {P.label}")
        return 1 if s is SplitType.SPLIT else -1

    def presentation(self):
        """(t, n, c) with O_L = O_K + c*theta, theta^2 = t*theta - n."""
        if self._presentation is None:
            self._presentation = _maximal_presentation(self)
        return self._presentation

    def __repr__(self):
        return f"RelExt(K=Q(sqrt {self.K.d}), delta={self.delta})"


def make_extension(K, delta):
    """K(sqrt delta), or a SplitMarker when delta is a square in K."""
    delta = delta if isinstance(delta, FieldElem) else FieldElem(K.d, delta)
    if delta.d != K.d:
        raise FieldMismatch("delta lies in a different field")
    if not delta:
        raise InputError("delta must be nonzero")
    root = sqrt_in_field(delta)
    if root is not None:
        return SplitMarker(K, delta, root)
    return RelExt(K, normalize_delta(delta))


def splitting(E: RelExt, v) -> SplitType:
    return E.splitting(v)


def chi_eval(E: RelExt, a: Ideal) -> int:
    """Artin symbol of the ideal a (coprime to the relative discriminant)."""
    if a.d != E.K.d:
        raise FieldMismatch("ideal of a different field")
    out = 1
    for P, k in a.factor():
        if P in E.disc_exponents:
            raise InputError(f"ideal is not coprime to the relative discriminant at {P.label}")
        if k % 2 and E.chi(P) == -1:
            out = -out
    return out


def ideal_sqrt(a: Ideal) -> Ideal:
    out = unit_ideal(a.d)
    for P, k in a.factor():
        if k % 2:
            raise InconsistencyError(f"ideal is not a square at {P.label}")
        out = out * P.ideal ** (k // 2)
    return out


def _maximal_presentation(E: RelExt):
    d = E.K.d
    four_delta = Ideal.from_generators(d, [E.delta * 4])
    g = ideal_sqrt(four_delta / E.rel_disc)
    target = g * g * 4
    # sigma runs over g modulo 2g
    basis = g.elements()
    for coeffs in ([0, 0], [1, 0], [0, 1], [1, 1]) if d != 1 else ([0], [1]):
        sigma = FieldElem(d, 0)
        for cf, b in zip(coeffs, basis):
            sigma = sigma + b * cf
        if target.contains(sigma * sigma - E.delta * 4):
            t = sigma
            n = (sigma * sigma - E.delta * 4) * Fraction(1, 4)
            return t, n, g.inverse()
    raise InconsistencyError("no integral generator found for O_L")


@dataclass(frozen=True)
class QuadOrder:
    """Omega = O_K + b*theta inside L, with theta^2 = t*theta - n."""

    ext: object
    conductor: Ideal
    rel_disc_order: Ideal
    is_domain: bool
    t: FieldElem
    n: FieldElem
    b: Ideal

    @property
    def K(self):
        return self.ext.K

    def presentation(self):
        return self.t, self.n, self.b


def make_order(E, f: Ideal = None) -> QuadOrder:
    """The order of conductor f in L (or in K x K for a SplitMarker)."""
    K = E.K
    if f is None:
        f = unit_ideal(K.d)
    if not isinstance(f, Ideal):
        f = Ideal.from_generators(K.d, [f])
    if f.d != K.d:
        raise FieldMismatch("conductor of a different field")
    if not f.is_integral():
        raise InputError("conductor must be an integral ideal")
    if isinstance(E, SplitMarker):
        one = FieldElem(K.d, 1)
        return QuadOrder(E, f, f * f, False, one, FieldElem(K.d, 0), f)
    t, n, c = E.presentation()
    return QuadOrder(E, f, f * f * E.rel_disc, True, t, n, f * c)
