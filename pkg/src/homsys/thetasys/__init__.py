"""Theta-systems, filtration certificates, relative projectives and approximations."""

from .approx import (
    Approximation,
    Precover,
    approximate,
    cotorsion_check,
    in_F,
    in_I,
    in_P,
    projective_precover,
)
from .filtration import (
    FiltrationCertificate,
    FiltrationStep,
    MultiplicityError,
    certify,
    exchange,
    factor_map,
    filtration_diagnose,
    filtration_verify,
    glue,
    group_filtration,
    lift_through,
    make_step,
    multiplicities,
    multiplicity_matrix,
    random_filtered,
    reorder_filtration,
)
from .projective import (
    InjectiveSystemData,
    ProjectiveSystemData,
    build_injective_system,
    build_projective_system,
    check_injective_system,
    check_projective_system,
    injective_data_from_objects,
    is_nonsplit,
    projective_data_from_objects,
)
from .system import ThetaInputError, ThetaSystem, check_theta_system

__all__ = [
    "Approximation", "FiltrationCertificate", "FiltrationStep", "InjectiveSystemData", "MultiplicityError",
    "Precover", "ProjectiveSystemData", "ThetaInputError", "ThetaSystem", "approximate",
    "build_injective_system", "build_projective_system", "certify", "check_injective_system",
    "check_projective_system", "check_theta_system", "cotorsion_check", "exchange", "factor_map",
    "filtration_diagnose", "filtration_verify", "glue", "group_filtration", "in_F", "in_I", "in_P",
    "injective_data_from_objects", "is_nonsplit", "lift_through", "make_step", "multiplicities",
    "multiplicity_matrix", "projective_data_from_objects", "projective_precover", "random_filtered",
    "reorder_filtration",
]
