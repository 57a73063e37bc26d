"""Measurement models and their Heisenberg-picture output observables.

Three model kinds are supported:

* ``IndirectModel``: a unitary system-apparatus coupling read out through a
  meter observable on the apparatus.
* ``ProjectiveModel``: a direct projective measurement given by projectors
  and outcome values.
* ``JointModel``: an indirect model with a second, commuting meter so both
  observables are read simultaneously.

All quantities (error, disturbance, spreads) are evaluated on the composite
state ``psi (x) xi`` in the Heisenberg picture: the meter after the
interaction is ``U^dag (I (x) M) U`` and the conjugate observable after the
interaction is ``U^dag (B (x) I) U``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    SIGMA_X,
    SIGMA_Z,
    Operator,
    SpaceLayout,
    StateVector,
    identity,
    residual_norm,
    std_dev,
    tensor,
    tensor_state,
)

UNBIASED_TOL = 1e-10
PRECISE_TOL = 1e-10
OUTPUT_COMMUTATOR_TOL = 1e-10
PROJECTOR_SUM_TOL = 1e-12
METER_COMMUTATOR_TOL = 1e-12


class ModelValidationError(ValueError):
    """A measurement model failed a structural invariant; names the field."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelValidationError(message)


@dataclass(frozen=True)
class IndirectModel:
    """Unitary dilation of a measurement: couple, then read a meter.

    Fields
    ------
    layout, interaction, apparatus_state, meter, measured, conjugate:
        the space factorization, the unitary coupling on the composite
        space, the initial apparatus state, the pointer observable on the
        apparatus, the system observable being measured, and the system
        observable watched for disturbance.
    """

    layout: SpaceLayout
    interaction: Operator
    apparatus_state: StateVector
    meter: Operator
    measured: Operator
    conjugate: Operator

    def __post_init__(self) -> None:
        lay = self.layout
        _require(
            self.interaction.dim == lay.composite_dim,
            f"interaction: dim {self.interaction.dim} != composite {lay.composite_dim}",
        )
        _require(
            self.apparatus_state.dim == lay.dim_apparatus,
            f"apparatus_state: dim {self.apparatus_state.dim} != {lay.dim_apparatus}",
        )
        _require(
            self.meter.dim == lay.dim_apparatus,
            f"meter: dim {self.meter.dim} != apparatus dim {lay.dim_apparatus}",
        )
        _require(
            self.measured.dim == lay.dim_system,
            f"measured: dim {self.measured.dim} != system dim {lay.dim_system}",
        )
        _require(
            self.conjugate.dim == lay.dim_system,
            f"conjugate: dim {self.conjugate.dim} != system dim {lay.dim_system}",
        )
        _require(self.interaction.is_unitary(), "interaction: matrix is not unitary")
        _require(self.meter.is_hermitian(), "meter: matrix is not Hermitian")
        _require(self.measured.is_hermitian(), "measured: matrix is not Hermitian")
        _require(self.conjugate.is_hermitian(), "conjugate: matrix is not Hermitian")


@dataclass(frozen=True)
class JointModel(IndirectModel):
    """Indirect model with a second meter reading the conjugate observable."""

    second_meter: Operator = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        super().__post_init__()
        _require(self.second_meter is not None, "second_meter: missing")
        _require(
            self.second_meter.dim == self.layout.dim_apparatus,
            f"second_meter: dim {self.second_meter.dim} != apparatus dim "
            f"{self.layout.dim_apparatus}",
        )
        _require(
            self.second_meter.is_hermitian(), "second_meter: matrix is not Hermitian"
        )
        cross = self.meter.mat @ self.second_meter.mat - self.second_meter.mat @ self.meter.mat
        _require(
            float(np.linalg.norm(cross)) <= METER_COMMUTATOR_TOL,
            "second_meter: meters do not commute on the apparatus space",
        )


@dataclass(frozen=True)
class ProjectiveModel:
    """Projective measurement: outcome values paired with projectors."""

    outcomes: tuple
    measured: Operator
    conjugate: Operator

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        _require(len(self.outcomes) >= 2, "outcomes: need at least two outcomes")
        dim = self.measured.dim
        values = []
        total = np.zeros((dim, dim), dtype=complex)
        for value, proj in self.outcomes:
            _require(isinstance(proj, Operator), "outcomes: projector must be Operator")
            _require(proj.dim == dim, f"outcomes: projector dim {proj.dim} != {dim}")
            _require(proj.is_projector(), f"outcomes: entry for value {value} is not a projector")
            values.append(float(value))
            total += proj.mat
        _require(len(set(values)) == len(values), "outcomes: values must be pairwise distinct")
        for i, (_, pi) in enumerate(self.outcomes):
            for _, pj in list(self.outcomes)[i + 1 :]:
                _require(
                    float(np.linalg.norm(pi.mat @ pj.mat)) <= PROJECTOR_SUM_TOL,
                    "outcomes: projectors are not pairwise orthogonal",
                )
        _require(
            float(np.linalg.norm(total - np.eye(dim))) <= PROJECTOR_SUM_TOL,
            "outcomes: projectors do not sum to the identity",
        )
        _require(self.conjugate.dim == dim, "conjugate: dim mismatch with projectors")
        _require(self.measured.is_hermitian(), "measured: matrix is not Hermitian")
        _require(self.conjugate.is_hermitian(), "conjugate: matrix is not Hermitian")

    @property
    def dim(self) -> int:
        return self.measured.dim

    def outcome_operator(self) -> Operator:
        """Weighted sum of projectors, sum_m m E(m)."""
        dim = self.dim
        out = np.zeros((dim, dim), dtype=complex)
        for value, proj in self.outcomes:
            out += value * proj.mat
        return Operator(out)


def meter_out(model: IndirectModel) -> Operator:
    """Meter observable after the interaction, on the composite space."""
    lifted = model.layout.lift_apparatus(model.meter)
    return model.interaction.dag() @ lifted @ model.interaction


def conjugate_out(model: IndirectModel) -> Operator:
    """Conjugate observable after the interaction, on the composite space."""
    lifted = model.layout.lift_system(model.conjugate)
    return model.interaction.dag() @ lifted @ model.interaction


def composite_state(model: IndirectModel, psi: StateVector) -> StateVector:
    """System state joined with the model's initial apparatus state."""
    if psi.dim != model.layout.dim_system:
        raise ModelValidationError(
            f"state: dim {psi.dim} != system dim {model.layout.dim_system}"
        )
    return tensor_state(psi, model.apparatus_state)


def error(model: IndirectModel, psi: StateVector) -> float:
    """Root-mean-square deviation of the meter output from the measured observable."""
    deviation = meter_out(model) - model.layout.lift_system(model.measured)
    return residual_norm(deviation, composite_state(model, psi))


def disturbance(model: IndirectModel, psi: StateVector) -> float:
    """Root-mean-square change of the conjugate observable caused by the measurement."""
    deviation = conjugate_out(model) - model.layout.lift_system(model.conjugate)
    return residual_norm(deviation, composite_state(model, psi))


def inaccuracy(model: IndirectModel, psi: StateVector) -> float:
    """Error plus intrinsic spread of the measured observable."""
    return error(model, psi) + std_dev(model.measured, psi)


def fluctuation(model: IndirectModel, psi: StateVector) -> float:
    """Disturbance plus intrinsic spread of the conjugate observable."""
    return disturbance(model, psi) + std_dev(model.conjugate, psi)


def projective_error(model: ProjectiveModel, psi: StateVector) -> float:
    """Error of a projective measurement against its target observable."""
    return residual_norm(model.outcome_operator() - model.measured, psi)


def projective_disturbance(model: ProjectiveModel, psi: StateVector) -> float:
    """Disturbance of the conjugate observable under a projective measurement.

    Uses the sum over outcomes of the squared commutator residuals
    ``||[E(m), B] psi||^2``; with two outcomes this reduces to
    ``sqrt(2) ||[E(+1), B] psi||`` because the two commutators differ only
    in sign.
    """
    total = 0.0
    for _, proj in model.outcomes:
        cross = proj.mat @ model.conjugate.mat - model.conjugate.mat @ proj.mat
        total += float(np.vdot(cross @ psi.vec, cross @ psi.vec).real)
    return float(np.sqrt(total))


def dilate(model: ProjectiveModel) -> IndirectModel:
    """Realize a two-outcome (+1/-1) projective measurement indirectly.

    The apparatus is a single qubit prepared in its first basis state; the
    coupling applies a bit flip on the branch carrying outcome -1 and the
    meter is the qubit's z observable, so reading +1 on the meter means
    outcome +1.  Error and disturbance of the result reproduce the
    projective formulas exactly.
    """
    if len(model.outcomes) != 2:
        raise ModelValidationError(
            f"outcomes: dilation needs exactly two outcomes, got {len(model.outcomes)}"
        )
    by_value = {round(float(v), 12): proj for v, proj in model.outcomes}
    if set(by_value) != {1.0, -1.0}:
        raise ModelValidationError("outcomes: dilation needs outcome values +1 and -1")
    plus, minus = by_value[1.0], by_value[-1.0]
    layout = SpaceLayout(model.dim, 2)
    coupling = tensor(plus, identity(2)) + tensor(minus, SIGMA_X)
    return IndirectModel(
        layout=layout,
        interaction=coupling,
        apparatus_state=StateVector.basis(2, 0),
        meter=SIGMA_Z,
        measured=model.measured,
        conjugate=model.conjugate,
    )


def _apparatus_contraction(
    composite: Operator, xi: StateVector, layout: SpaceLayout
) -> np.ndarray:
    """Contract a composite operator with the apparatus state on both sides."""
    d_s, d_a = layout.dim_system, layout.dim_apparatus
    tens = composite.mat.reshape(d_s, d_a, d_s, d_a)
    return np.einsum("a,iajb,b->ij", xi.vec.conj(), tens, xi.vec)


def is_unbiased_measurement(model: IndirectModel, tol: float = UNBIASED_TOL) -> bool:
    """True when the meter deviation vanishes on average for every system state.

    Decided exactly by contracting the deviation operator with the apparatus
    state: the contraction is the zero system operator iff the mean deviation
    vanishes for all states (polarization argument).
    """
    deviation = meter_out(model) - model.layout.lift_system(model.measured)
    contracted = _apparatus_contraction(deviation, model.apparatus_state, model.layout)
    return float(np.linalg.norm(contracted)) <= tol


def is_unbiased_disturbance(model: IndirectModel, tol: float = UNBIASED_TOL) -> bool:
    """Same contraction test applied to the conjugate-observable deviation."""
    deviation = conjugate_out(model) - model.layout.lift_system(model.conjugate)
    contracted = _apparatus_contraction(deviation, model.apparatus_state, model.layout)
    return float(np.linalg.norm(contracted)) <= tol


def is_precise(model: IndirectModel, psi: StateVector, tol: float = PRECISE_TOL) -> bool:
    """True when the measurement error vanishes on the given state.

    This is state-by-state: an apparatus can be precise for one preparation
    and not another.
    """
    return error(model, psi) <= tol


def joint_outputs(model: JointModel) -> tuple[Operator, Operator]:
    """Both meter observables after the interaction; they must commute."""
    first = meter_out(model)
    second = (
        model.interaction.dag()
        @ model.layout.lift_apparatus(model.second_meter)
        @ model.interaction
    )
    cross = first.mat @ second.mat - second.mat @ first.mat
    if float(np.linalg.norm(cross)) > OUTPUT_COMMUTATOR_TOL:
        raise ModelValidationError(
            "second_meter: output observables do not commute; joint model invalid"
        )
    return first, second
