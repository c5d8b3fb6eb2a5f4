"""Deciding which orders in a genus admit an (optimal) embedding of Omega."""

from dataclasses import dataclass, field

from .errors import AssumptionsNotMet, EichlerConditionFailed, InputError
from .ext import SplitType
from .genus import (
    GenusClass,
    OrderSpec,
    Parameterization,
    contains_L_in_KR,
    distance,
    frob_of_distance,
    genus_dual,
    parameterize_genus,
)
from .quaternion import abhn_embeds, place_key, satisfies_eichler

NONE, ALL, HALF = "none", "all", "half"

# Citation strings reported with each verdict, keyed by the rule that fired.
PROVENANCE = {
    "nondomain": "Prop 5.4",
    "abhn": "Thm 1.1",
    "fast_path": "Cor 5.6",
    "not_in_class_field": "Prop 5.5",
    "disc_not_split": "Prop 5.7",
    "half": "Prop 5.9",
    "opt_not_in_class_field": "Prop 6.2",
    "opt_disc_not_split": "Thm 6.4",
    "opt_half": "Thm 6.4",
    "genus": "Thm 3.1",
    "classfield": "Thm 5.2",
}


@dataclass(frozen=True)
class Assumptions:
    coprime_disc_level: bool
    level_coprime_ramification: bool

    @property
    def hold(self) -> bool:
        return self.coprime_disc_level and self.level_coprime_ramification

    @property
    def failed(self):
        out = []
        if not self.coprime_disc_level:
            out.append("coprime_disc_level")
        if not self.level_coprime_ramification:
            out.append("level_coprime_ramification")
        return out


@dataclass
class Verdict:
    outcome: str
    rule: str
    param: Parameterization = None
    admitting: list = field(default_factory=list)
    ext: object = None
    witness: object = None
    optimal: bool = False

    @property
    def provenance(self) -> str:
        return PROVENANCE[self.rule]

    @property
    def classes(self):
        return self.param.classes() if self.param is not None else []

    @property
    def fraction(self):
        from fractions import Fraction

        if self.outcome == NONE:
            return Fraction(0)
        if self.outcome == ALL:
            return Fraction(1)
        return Fraction(len(self.admitting), len(self.classes))


def check_assumptions(R: OrderSpec, W) -> Assumptions:
    return Assumptions(W.rel_disc_order.is_coprime(R.level_ideal), R.level_coprime_ramification())


def obstruction_fast_path(R: OrderSpec, E):
    """A finite prime ramified in L at which R is maximal, if any."""
    special = set(R.special_places) | set(R.level_places)
    for P in E.ramified_primes:
        if P not in special:
            return P
    return None


def _half(R, W, E, rule, optimal, param=None):
    param = param or parameterize_genus(R, E)
    base = param.classes()[0]
    admitting = [c for c in param.classes() if frob_of_distance(E, distance(base, c)) == 1]
    return Verdict(HALF, rule, param, admitting, E, optimal=optimal)


def _all(R, E, rule, optimal, witness=None, with_param=True):
    param = parameterize_genus(R, E) if with_param else None
    return Verdict(ALL, rule, param, param.classes() if param else [], E, witness, optimal)


def _not_split_divisor(W, E):
    for P, _ in W.rel_disc_order.factor():
        if E.splitting(P) is not SplitType.SPLIT:
            return P
    return None


def decide_embedding(R: OrderSpec, W, param: Parameterization = None) -> Verdict:
    """Which orders in the genus of R admit an embedding of Omega.

    Assumes Omega embeds in R itself.  ``param`` may fix the generator
    primes used for the Half partition.
    """
    if not satisfies_eichler(R.algebra):
        raise EichlerConditionFailed("every archimedean place ramifies in the algebra")
    if W.K.d != R.K.d:
        raise InputError("order and algebra over different fields")
    if not W.is_domain:
        return _all(R, None, "nondomain", False)
    E = W.ext
    if not abhn_embeds(R.algebra, E):
        return Verdict(NONE, "abhn", parameterize_genus(R), [], E)
    witness = obstruction_fast_path(R, E)
    if witness is not None:
        return _all(R, E, "fast_path", False, witness)
    if not contains_L_in_KR(R, E):
        return _all(R, E, "not_in_class_field", False)
    asm = check_assumptions(R, W)
    if not asm.hold:
        raise AssumptionsNotMet(asm.failed)
    bad = _not_split_divisor(W, E)
    if bad is not None:
        return _all(R, E, "disc_not_split", False, bad)
    return _half(R, W, E, "half", False, param)


def decide_optimal(R: OrderSpec, W, param: Parameterization = None) -> Verdict:
    """Which orders in the genus of R admit an optimal embedding of Omega."""
    if not satisfies_eichler(R.algebra):
        raise EichlerConditionFailed("every archimedean place ramifies in the algebra")
    if not W.is_domain:
        raise InputError("optimal embeddings need Omega to be a domain")
    E = W.ext
    if not abhn_embeds(R.algebra, E):
        return Verdict(NONE, "abhn", parameterize_genus(R), [], E, optimal=True)
    if not contains_L_in_KR(R, E):
        return _all(R, E, "opt_not_in_class_field", True, obstruction_fast_path(R, E))
    asm = check_assumptions(R, W)
    if not asm.hold:
        raise AssumptionsNotMet(asm.failed)
    bad = _not_split_divisor(W, E)
    if bad is not None:
        return _all(R, E, "opt_disc_not_split", True, bad)
    return _half(R, W, E, "opt_half", True, param)


def admits(c: GenusClass, v: Verdict) -> bool:
    if v.outcome == ALL:
        return True
    if v.outcome == NONE:
        return False
    if c.param is not v.param:
        raise InputError("class from a different parameterization")
    base = v.param.classes()[0]
    return frob_of_distance(v.ext, distance(base, c)) == 1


def verdict_places(v: Verdict):
    return sorted(v.param.primes, key=place_key) if v.param else []
