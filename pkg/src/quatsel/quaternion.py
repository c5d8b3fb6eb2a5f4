"""Quaternion algebras (a, b | K): ramification, Eichler condition, embedding test."""

from .errors import FieldMismatch, InconsistencyError, InputError
from .ext import SplitType
from .field import FieldElem, RealPlace, primes_above, unit_ideal
from .local import candidate_primes, hilbert_symbol


def place_key(v):
    """Sort key putting finite places first (by p, index), then real places."""
    if isinstance(v, RealPlace):
        return (1, 0, v.index)
    return (0, v.p, v.index)


class QuatAlg:
    """The algebra with i^2 = a, j^2 = b, ij = -ji over K."""

    def __init__(self, K, a, b):
        a = a if isinstance(a, FieldElem) else FieldElem(K.d, a)
        b = b if isinstance(b, FieldElem) else FieldElem(K.d, b)
        if a.d != K.d or b.d != K.d:
            raise FieldMismatch("algebra parameters lie in a different field")
        if not a or not b:
            raise InputError("algebra parameters must be nonzero")
        self.K, self.a, self.b = K, a, b
        self.ramified_places = _ramification(K, a, b)
        self.disc_ideal = unit_ideal(K.d)
        for v in self.finite_ramified:
            self.disc_ideal = self.disc_ideal * v.ideal

    @property
    def finite_ramified(self):
        return [v for v in self.ramified_places if not isinstance(v, RealPlace)]

    @property
    def is_split(self) -> bool:
        return not self.ramified_places

    def is_ramified_at(self, v) -> bool:
        return v in self.ramified_places

    def __repr__(self):
        return f"QuatAlg(({self.a}, {self.b}) over Q(sqrt {self.K.d}))"


def _ramification(K, a, b):
    out = []
    for p in candidate_primes(a, b):
        for P in primes_above(K.d, p):
            if hilbert_symbol(K, P, a, b) == -1:
                out.append(P)
    for v in K.real_places:
        if hilbert_symbol(K, v, a, b) == -1:
            out.append(v)
    if len(out) % 2:
        raise InconsistencyError(f"odd number of ramified places for ({a}, {b})")
    return tuple(sorted(out, key=place_key))


def make_algebra(K, a, b) -> QuatAlg:
    return QuatAlg(K, a, b)


def ramified_places(A: QuatAlg):
    return A.ramified_places


def satisfies_eichler(A: QuatAlg) -> bool:
    """Some archimedean place of K is unramified in A."""
    if A.K.d < 0:
        return True
    return any(v not in A.ramified_places for v in A.K.real_places)


def abhn_embeds(A: QuatAlg, E) -> bool:
    """Whether L embeds in A: no ramified place of A splits in L."""
    if E.K.d != A.K.d:
        raise FieldMismatch("extension and algebra over different fields")
    return all(E.splitting(v) is not SplitType.SPLIT for v in A.ramified_places)
