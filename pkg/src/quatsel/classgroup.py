"""Units, principality and class groups of quadratic fields."""

from fractions import Fraction
from math import isqrt

from . import arith
from .errors import InconsistencyError, InputError, ResourceRefusal
from .field import FieldElem, Ideal, primes_above, ring_data, unit_ideal

PRINCIPAL_SEARCH_BOUND = 2 * 10**6


def fundamental_unit(d: int) -> FieldElem:
    """Fundamental unit > 1 of a real quadratic field, via continued fractions.

    Expands w = sqrt(d) (or (1 + sqrt d)/2) and returns the first convergent
    h/k for which h - k*w' is a unit.
    """
    if d <= 1:
        raise InputError("fundamental unit needs a real quadratic field")
    root = isqrt(d)
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for _ in range(10**6):
        if Q > 0:
            a = (P + root) // Q
        else:
            a = -((P + root) // -Q) - 1
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if d % 4 == 1:
            eta = FieldElem(d, Fraction(2 * h - k, 2), Fraction(k, 2))
        else:
            eta = FieldElem(d, h, k)
        if abs(eta.norm()) == 1:
            return eta
        P = a * Q - P
        Q = (d - P * P) // Q
    raise ResourceRefusal(f"continued fraction of sqrt({d}) did not close")


def _unit_trace_bound(K) -> int:
    """An integer upper bound for the fundamental unit."""
    eps = K.fundamental_unit
    return int(abs(eps.trace())) + 1


def _gauss_reduce(vecs, form):
    b1, b2 = vecs

    def bil(u, v):
        return (form(tuple(a + b for a, b in zip(u, v))) - form(u) - form(v)) / 2

    while True:
        if form(b1) > form(b2):
            b1, b2 = b2, b1
        q = round(Fraction(bil(b1, b2)) / form(b1))
        if q == 0:
            return b1, b2
        b2 = tuple(x - q * y for x, y in zip(b2, b1))
        if form(b2) >= form(b1):
            return b1, b2


def _short_element(K, I: Ideal) -> FieldElem:
    d = K.d
    n, t, nw = ring_data(d)
    if K.d < 0:
        def form(c):
            return c[0] * c[0] + t * c[0] * c[1] + nw * c[1] * c[1]
    else:
        tr_w2 = t * t - 2 * nw

        def form(c):
            return 2 * c[0] * c[0] + 2 * t * c[0] * c[1] + tr_w2 * c[1] * c[1]
    b1, _ = _gauss_reduce([tuple(r) for r in I.basis], form)
    return K.from_coords(b1)


def reduce_ideal(K, I: Ideal) -> Ideal:
    """An integral ideal of small norm in the class of the integral ideal I."""
    if K.degree == 1:
        return unit_ideal(1)
    J = I
    for _ in range(2):
        alpha = _short_element(K, J)
        J = J.conj() * (alpha / J.norm())
    if not J.is_integral():
        raise InconsistencyError("ideal reduction left the integral ideals")
    return J


def is_principal(K, a: Ideal, search_bound: int = PRINCIPAL_SEARCH_BOUND):
    """A generator of ``a`` if it is principal, else None.

    The search ranges over elements (U + V sqrt d)/2 of norm +-N(a); for
    real fields the candidates are confined to one fundamental-unit period,
    which makes a negative answer exact.
    """
    if a.d != K.d:
        raise InputError("ideal over a different field")
    if K.degree == 1:
        return FieldElem(1, abs(a.elements()[0].x))
    scale = a.den
    J = a * scale
    N = int(J.norm())
    d = K.d
    if d < 0:
        vmax = isqrt(4 * N // -d)
        signs = (1,)
    else:
        vmax = isqrt(4 * N * _unit_trace_bound(K) // d) + 1
        signs = (1, -1)
    if vmax > search_bound:
        raise ResourceRefusal(f"principal-ideal search needs {vmax} steps (bound {search_bound})")
    half = d % 4 == 1
    for V in range(vmax + 1):
        for s in signs:
            U2 = d * V * V + 4 * s * N
            if U2 < 0 or not arith.is_square_int(U2):
                continue
            U0 = isqrt(U2)
            for U in {U0, -U0}:
                if half:
                    if (U - V) % 2:
                        continue
                elif U % 2 or V % 2:
                    continue
                alpha = FieldElem(d, Fraction(U, 2), Fraction(V, 2))
                if J.contains(alpha):
                    return alpha / scale
    return None


class ClassGroup:
    """Ideal class group with small-norm integral representatives.

    ``reps[0]`` is the trivial class.  Classes are identified by index.
    """

    def __init__(self, K, reps):
        self.K = K
        self.reps = reps
        self._index_cache = {}
        self._mul_cache = {}
        for i, r in enumerate(reps):
            self._index_cache[r] = i

    @property
    def order(self) -> int:
        return len(self.reps)

    def index(self, I: Ideal) -> int:
        """Class index of a fractional ideal."""
        if I in self._index_cache:
            return self._index_cache[I]
        J = reduce_ideal(self.K, I * I.den)
        found = None
        for i, R in enumerate(self.reps):
            if J == R or is_principal(self.K, J * R.conj()) is not None:
                found = i
                break
        if found is None:
            raise InconsistencyError("ideal class not among the representatives")
        self._index_cache[I] = found
        return found

    def mul(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._mul_cache:
            self._mul_cache[key] = self.index(self.reps[i] * self.reps[j])
        return self._mul_cache[key]

    def power(self, i: int, k: int) -> int:
        r = 0
        for _ in range(k % self.order):
            r = self.mul(r, i)
        return r

    def inverse(self, i: int) -> int:
        return self.index(self.reps[i].conj())

    def element_order(self, i: int) -> int:
        k, r = 1, i
        while r != 0:
            r = self.mul(r, i)
            k += 1
        return k

    def two_torsion(self):
        return [i for i in range(self.order) if self.mul(i, i) == 0]

    def squares(self):
        return sorted({self.mul(i, i) for i in range(self.order)})

    @property
    def invariants(self):
        """Elementary divisors (cyclic factor orders), smallest first."""
        h = self.order
        if h == 1:
            return []
        orders = [self.element_order(i) for i in range(h)]
        cyclic = []
        for ell, a in arith.factor(h).items():
            # s[k] = log_ell of |G[ell^k]|
            s = []
            for k in range(a + 2):
                size = sum(1 for o in orders if (ell**k) % o == 0)
                s.append(arith.int_valuation(size, ell))
            for k in range(1, a + 1):
                exact = (s[k] - s[k - 1]) - (s[k + 1] - s[k])
                cyclic.extend([ell**k] * exact)
        return sorted(cyclic)


def minkowski_bound(K) -> int:
    D = abs(K.disc)
    if K.d > 0:
        return isqrt(D) // 2 + 1
    return isqrt(41 * D // 100) + 1


def compute_class_group(K) -> ClassGroup:
    """Class group from the prime ideals of norm below the Minkowski bound."""
    O = unit_ideal(K.d)
    if K.degree == 1:
        return ClassGroup(K, [O])
    gens = []
    for p in range(2, minkowski_bound(K) + 1):
        if not arith.factor(p) == {p: 1}:
            continue
        for P in primes_above(K.d, p):
            if P.f == 1:
                gens.append(P.ideal)
    group = ClassGroup(K, [O])
    queue = [O]
    while queue:
        rep = queue.pop(0)
        for g in gens:
            J = reduce_ideal(K, rep * g)
            known = False
            for R in group.reps:
                if J == R or is_principal(K, J * R.conj()) is not None:
                    known = True
                    break
            if not known:
                group.reps.append(J)
                group._index_cache[J] = len(group.reps) - 1
                queue.append(J)
    group.reps.sort(key=lambda r: (r.norm(), r.basis))
    group._index_cache = {r: i for i, r in enumerate(group.reps)}
    if group.reps[0] != O:
        raise InconsistencyError("trivial class representative is not O_K")
    return group
