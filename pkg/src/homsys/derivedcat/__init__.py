"""Concrete model of the bounded derived category of a hereditary path algebra."""

from .objects import (
    DbMorphism,
    DbObject,
    IndeterminateError,
    compose,
    direct_sum_objects,
    dual_morphism,
    dual_object,
    from_coordinates,
    hom_db,
    hom_layout,
    hom_space,
    hstack,
    inclusion,
    projection,
    shift,
    sub_object,
    vstack,
)
from .triangles import (
    Cone,
    ConsistencyError,
    TriangleCert,
    VerifyResult,
    closed_form_cone,
    cone,
    cone_full,
    induced_rank,
    triangle_verify,
)

__all__ = [
    "Cone", "ConsistencyError", "DbMorphism", "DbObject", "IndeterminateError", "TriangleCert",
    "VerifyResult", "closed_form_cone", "compose", "cone", "cone_full", "direct_sum_objects",
    "dual_morphism", "dual_object", "from_coordinates", "hom_db", "hom_layout", "hom_space", "hstack",
    "inclusion", "induced_rank", "projection", "shift", "sub_object", "triangle_verify", "vstack",
]
