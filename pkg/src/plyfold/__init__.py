"""Bending of multi-ply paperboard with interlayer delamination.

Explicit folds, their energies, numeric certificates and scaling checks.
"""

from .angles import FoldKinematics, beta_eq, f_alpha, kinematics
from .construct import (
    ConstructionParams,
    DeformationField,
    build_cpa,
    build_multilayer,
    build_plate,
    build_two_fold,
    choose_boundaries,
    eval_field,
    eval_grad,
    field_from_dict,
)
from .core import (
    AdmissibilityError,
    ConstraintError,
    DomainError,
    EnergyBreakdown,
    MaterialSpec,
    PlyfoldError,
    RegimeError,
    dist_so2_squared,
    rotation,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "ConstraintError",
    "ConstructionParams",
    "DeformationField",
    "DomainError",
    "EnergyBreakdown",
    "FoldKinematics",
    "MaterialSpec",
    "PlyfoldError",
    "RegimeError",
    "beta_eq",
    "build_cpa",
    "build_multilayer",
    "build_plate",
    "build_two_fold",
    "choose_boundaries",
    "dist_so2_squared",
    "eval_field",
    "eval_grad",
    "f_alpha",
    "field_from_dict",
    "kinematics",
    "rotation",
]
