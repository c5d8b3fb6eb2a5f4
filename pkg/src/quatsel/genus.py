"""Orders given by local data, the genus group G_R and its parameterization.

G_R is an elementary abelian 2-group; it is handled through its dual, the
quadratic characters of K (given as extensions K(sqrt x)) that are trivial
on the local norm groups of the normalizers of R.
"""

from dataclasses import dataclass, field
from itertools import product

from .errors import EichlerConditionFailed, InputError, ResourceRefusal, SearchExhausted
from .ext import RelExt, SplitMarker, SplitType, make_extension, sqrt_in_field
from .field import FieldElem, Ideal, PrimeIdeal, RealPlace, unit_ideal
from .local import hilbert_symbol
from .quaternion import QuatAlg, place_key, satisfies_eichler

KINDS = ("maximal", "eichler", "custom")
MAX_SELMER_RANK = 12


@dataclass(frozen=True)
class LocalOrderData:
    """Local type of R at a finite place.

    For ``custom``, ``units`` says whether the local units lie in the norm
    group of the normalizer and ``odd`` whether an element of odd valuation
    (taken to be the stored uniformizer up to squares) does.
    """

    place: PrimeIdeal
    kind: str = "maximal"
    exponent: int = 0
    units: bool = True
    odd: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown local order kind {self.kind!r}")
        if self.kind == "eichler" and self.exponent < 1:
            raise InputError("Eichler exponent must be >= 1")
        if self.exponent < 0:
            raise InputError("exponent must be nonnegative")


def maximal(place) -> LocalOrderData:
    return LocalOrderData(place)


def eichler(place, e: int) -> LocalOrderData:
    return LocalOrderData(place, "eichler", e)


def custom(place, units: bool, odd: bool, exponent: int = 0) -> LocalOrderData:
    return LocalOrderData(place, "custom", exponent, units, odd)


@dataclass
class OrderSpec:
    algebra: QuatAlg
    local: dict
    level_ideal: Ideal

    @property
    def K(self):
        return self.algebra.K

    def local_data(self, v) -> LocalOrderData:
        return self.local.get(v) or LocalOrderData(v)

    @property
    def special_places(self):
        """Finite places where R is not maximal."""
        return sorted((v for v, D in self.local.items() if D.kind != "maximal"), key=place_key)

    @property
    def level_places(self):
        return [P for P, _ in self.level_ideal.factor()]

    def level_coprime_ramification(self) -> bool:
        return not any(v in self.algebra.ramified_places for v in self.special_places)


def make_order_spec(A: QuatAlg, entries=()) -> OrderSpec:
    if not satisfies_eichler(A):
        raise EichlerConditionFailed("every archimedean place ramifies in the algebra")
    local = {}
    level = unit_ideal(A.K.d)
    for D in entries:
        if D.place in local:
            raise InputError(f"two local entries at {D.place.label}")
        if D.place.d != A.K.d:
            raise InputError("local entry at a place of a different field")
        if D.kind == "eichler" and A.is_ramified_at(D.place):
            raise InputError(f"Eichler entry at {D.place.label}, which ramifies in the algebra")
        local[D.place] = D
        if D.exponent:
            level = level * D.place.ideal ** D.exponent
    return OrderSpec(A, local, level)


def _chi_on(E: RelExt, v, x) -> int:
    return hilbert_symbol(E.K, v, E.delta, x)


def local_norm_group_kills_chi(D, E: RelExt, v, A: QuatAlg = None) -> bool:
    """Whether chi_{L/K} is trivial on n(N(R_v)).

    ``D`` is the LocalOrderData at a finite place (None means maximal);
    for real places pass D=None and the algebra.
    """
    if isinstance(E, SplitMarker):
        return True
    s = E.splitting(v)
    if isinstance(v, RealPlace):
        if A is not None and A.is_ramified_at(v):
            return True
        return s is SplitType.SPLIT
    if D is None or D.kind == "maximal":
        if A is not None and A.is_ramified_at(v):
            return s is SplitType.SPLIT
        return s is not SplitType.RAMIFIED
    if D.kind == "eichler":
        return s is not SplitType.RAMIFIED and (D.exponent % 2 == 0 or s is SplitType.SPLIT)
    if D.units and D.odd:
        return s is SplitType.SPLIT
    if D.units:
        return s is not SplitType.RAMIFIED
    if D.odd:
        return _chi_on(E, v, v.uniformizer) == 1
    return True


def class_field_trace(R: OrderSpec, E: RelExt):
    """Per-place evaluation of the local rules, as (place, kind, splitting, verdict)."""
    A = R.algebra
    places = set(A.ramified_places) | set(R.local) | set(E.disc_exponents) | set(R.K.real_places)
    rows = []
    for v in sorted(places, key=place_key):
        if isinstance(v, RealPlace):
            kind = "ramified" if A.is_ramified_at(v) else "split"
            ok = local_norm_group_kills_chi(None, E, v, A)
        else:
            D = R.local.get(v)
            kind = D.kind if D else "maximal"
            ok = local_norm_group_kills_chi(D, E, v, A)
        rows.append((v, kind, E.splitting(v), ok))
    return rows


def contains_L_in_KR(R: OrderSpec, E) -> bool:
    """Whether L lies in the class field K(R) cut out by H_R."""
    if isinstance(E, SplitMarker):
        return True
    return all(ok for *_, ok in class_field_trace(R, E))


def _unit_generators(K):
    if K.d == 1:
        return [FieldElem(1, -1)]
    if K.d == -1:
        return [FieldElem(-1, 0, 1)]
    if K.d < 0:
        return [FieldElem(K.d, -1)]
    return [FieldElem(K.d, -1), K.fundamental_unit]


def _is_square(x: FieldElem) -> bool:
    return sqrt_in_field(x) is not None


def _span(elems):
    """An F_2-basis of the subgroup of K^x/K^x2 generated by elems."""
    basis, members = [], [FieldElem(elems[0].d, 1)] if elems else []
    for g in elems:
        if any(_is_square(g * m) for m in members):
            continue
        basis.append(g)
        members = members + [g * m for m in members]
        if len(basis) > MAX_SELMER_RANK:
            raise ResourceRefusal("square-class group too large")
    return basis, members


def selmer_generators(K, S):
    """Generators of K(S,2): classes with even valuation outside S."""
    G = K.class_group
    gens = list(_unit_generators(K))
    from .classgroup import is_principal

    for bits in product((0, 1), repeat=len(S)):
        I = unit_ideal(K.d)
        for bit, P in zip(bits, S):
            if bit:
                I = I * P.ideal
        for c in range(G.order):
            J = I * G.reps[c] ** 2
            g = is_principal(K, J)
            if g is not None:
                gens.append(g)
    basis, _ = _span(gens)
    return basis


@dataclass
class GenusDual:
    """Characters generating the dual of G_R; 2^rank is the type number."""

    R: OrderSpec
    deltas: list
    chars: list
    S: list

    @property
    def rank(self) -> int:
        return len(self.chars)

    @property
    def type_number(self) -> int:
        return 2 ** self.rank

    def eval_ideal(self, a: Ideal):
        """Dual coordinates (bits) of the class of a in G_R."""
        from .ext import chi_eval

        return tuple(0 if chi_eval(E, a) == 1 else 1 for E in self.chars)

    def eval_prime(self, P: PrimeIdeal):
        return tuple(0 if E.chi(P) == 1 else 1 for E in self.chars)


def genus_dual(R: OrderSpec) -> GenusDual:
    if not satisfies_eichler(R.algebra):
        raise EichlerConditionFailed("every archimedean place ramifies in the algebra")
    cached = R.__dict__.get("_dual")
    if cached is not None:
        return cached
    K = R.K
    S = R.special_places
    basis = selmer_generators(K, S)
    _, members = _span(basis)
    good = []
    for x in members:
        if _is_square(x):
            continue
        E = make_extension(K, x)
        if contains_L_in_KR(R, E):
            good.append((x, E))
    dbasis, _ = _span([x for x, _ in good])
    chars = [make_extension(K, x) for x in dbasis]
    if 2 ** len(chars) != len(good) + 1:
        raise ResourceRefusal("characters killing H_R do not form a group")  # pragma: no cover
    R._dual = GenusDual(R, dbasis, chars, S)
    return R._dual


@dataclass
class Parameterization:
    """Generator primes nu_1..nu_m and their dual evaluation matrix."""

    dual: GenusDual
    primes: list
    matrix: list
    ext: object = None
    window: tuple = (2, None)

    @property
    def rank(self) -> int:
        return self.dual.rank

    def classes(self):
        return [GenusClass(g, self) for g in product((0, 1), repeat=self.rank)]

    def dual_vector(self, gamma):
        """Coordinates in the character dual of the class with parameter gamma."""
        out = [0] * self.rank
        for gi, row in zip(gamma, self.matrix):
            if gi:
                out = [a ^ b for a, b in zip(out, row)]
        return tuple(out)

    def gamma_of_dual(self, vec):
        for c in product((0, 1), repeat=self.rank):
            if self.dual_vector(c) == tuple(vec):
                return c
        raise InputError("vector outside the dual space")  # pragma: no cover

    def gamma_of_ideal(self, a: Ideal):
        return self.gamma_of_dual(self.dual.eval_ideal(a))


@dataclass(frozen=True)
class GenusClass:
    gamma: tuple
    param: Parameterization = field(compare=False, repr=False)

    @property
    def generator_primes(self):
        return self.param.primes

    @property
    def label(self) -> str:
        if not any(self.gamma):
            return "gamma=0"
        return "gamma=" + "".join(str(g) for g in self.gamma)


@dataclass(frozen=True)
class DistanceClass:
    bits: tuple
    param: Parameterization = field(compare=False, repr=False)

    def is_trivial(self) -> bool:
        return not any(self.bits)


def _rank_f2(rows):
    rows = [int("".join(map(str, r)) or "0", 2) for r in rows]
    rank = 0
    pivots = []
    for r in rows:
        for p in pivots:
            r = min(r, r ^ p)
        if r:
            pivots.append(r)
            rank += 1
    return rank


def parameterize_genus(R: OrderSpec, E=None, dual: GenusDual = None, start: int = 2, bound: int = 2000):
    """Choose generator primes nu_i and return the parameterization.

    When L lies in K(R), nu_1 is inert in L and the other nu_i split;
    otherwise (with E given) all nu_i split in L.
    """
    dual = dual or genus_dual(R)
    m = dual.rank
    if isinstance(E, SplitMarker):
        E = None
    if m == 0:
        return Parameterization(dual, [], [], E, (start, bound))
    A = R.algebra
    bad = set(A.ramified_places) | set(R.local) | set(dual.S)
    inside = E is not None and contains_L_in_KR(R, E)
    if E is not None:
        bad |= set(E.disc_exponents)
    chosen, rows = [], []
    for P in R.K.primes(start, bound):
        if len(chosen) == m:
            break
        if P in bad:
            continue
        try:
            row = dual.eval_prime(P)
        except InputError:
            continue
        if _rank_f2(rows + [row]) != len(rows) + 1:
            continue
        if E is not None:
            want = -1 if (inside and not chosen) else 1
            if E.chi(P) != want:
                continue
        chosen.append(P)
        rows.append(row)
    if len(chosen) < m:
        raise SearchExhausted(f"no generator primes found below {bound}")
    return Parameterization(dual, chosen, rows, E, (start, bound))


def distance(c1: GenusClass, c2: GenusClass) -> DistanceClass:
    if c1.param is not c2.param:
        raise InputError("classes come from different parameterizations")
    return DistanceClass(tuple(a ^ b for a, b in zip(c1.gamma, c2.gamma)), c1.param)


def frob_of_distance(E: RelExt, d: DistanceClass) -> int:
    out = 1
    for bit, P in zip(d.bits, d.param.primes):
        if bit:
            out *= E.chi(P)
    return out
