"""Selectivity of quadratic orders in genera of quaternion orders over Q and quadratic fields."""

from .errors import (
    AssumptionsNotMet,
    EichlerConditionFailed,
    FieldMismatch,
    InconsistencyError,
    InputError,
    QuatselError,
    ResourceRefusal,
    SearchExhausted,
)
from .ext import make_extension, make_order, splitting
from .field import make_field
from .genus import contains_L_in_KR, custom, eichler, genus_dual, make_order_spec, maximal, parameterize_genus
from .local import hilbert_symbol
from .oracle import cross_validate, enumerate_maximal_orders_M2, search_embedding
from .quaternion import abhn_embeds, make_algebra, ramified_places, satisfies_eichler
from .selectivity import admits, decide_embedding, decide_optimal

__all__ = [
    "AssumptionsNotMet", "EichlerConditionFailed", "FieldMismatch", "InconsistencyError", "InputError",
    "QuatselError", "ResourceRefusal", "SearchExhausted",
    "make_field", "make_extension", "make_order", "splitting", "hilbert_symbol",
    "make_algebra", "ramified_places", "satisfies_eichler", "abhn_embeds",
    "make_order_spec", "maximal", "eichler", "custom", "genus_dual", "parameterize_genus", "contains_L_in_KR",
    "decide_embedding", "decide_optimal", "admits",
    "enumerate_maximal_orders_M2", "search_embedding", "cross_validate",
]
