"""Finite-dimensional quantum measurement simulator and uncertainty-relation verifier."""

from .operators import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionMismatchError,
    Operator,
    SpaceLayout,
    StateVector,
    commutator,
    expectation,
    identity,
    polarization_matrix_element,
    residual_norm,
    std_dev,
    tensor,
    tensor_state,
)
from .models import (
    IndirectModel,
    JointModel,
    ModelValidationError,
    ProjectiveModel,
    conjugate_out,
    dilate,
    disturbance,
    error,
    fluctuation,
    inaccuracy,
    is_precise,
    is_unbiased_disturbance,
    is_unbiased_measurement,
    joint_outputs,
    meter_out,
    projective_disturbance,
    projective_error,
)
from .relations import (
    RELATION_IDS,
    UNIVERSAL_IDS,
    QuantitySet,
    RelationReport,
    eval_ak,
    eval_direct_products,
    evaluate,
    evaluate_many,
    is_universal,
    quantities,
    quantities_from_operators,
)

__version__ = "0.1.0"

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "DimensionMismatchError",
    "Operator",
    "SpaceLayout",
    "StateVector",
    "commutator",
    "expectation",
    "identity",
    "polarization_matrix_element",
    "residual_norm",
    "std_dev",
    "tensor",
    "tensor_state",
    "IndirectModel",
    "JointModel",
    "ModelValidationError",
    "ProjectiveModel",
    "conjugate_out",
    "dilate",
    "disturbance",
    "error",
    "fluctuation",
    "inaccuracy",
    "is_precise",
    "is_unbiased_disturbance",
    "is_unbiased_measurement",
    "joint_outputs",
    "meter_out",
    "projective_disturbance",
    "projective_error",
    "RELATION_IDS",
    "UNIVERSAL_IDS",
    "QuantitySet",
    "RelationReport",
    "eval_ak",
    "eval_direct_products",
    "evaluate",
    "evaluate_many",
    "is_universal",
    "quantities",
    "quantities_from_operators",
    "__version__",
]
