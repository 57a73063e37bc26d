"""Randomized search for violations of the non-universal relations.

Trials are independent: the randomness of trial ``i`` is derived from
``(seed, i)``, so results do not depend on execution order and a fixed
seed reproduces the identical witness list run after run.  An optional
hill-climbing refinement perturbs the state and the coupling of a found
violation and keeps changes that widen the margin.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import modelio, relations, spin
from .models import IndirectModel
from .operators import Operator, SpaceLayout, StateVector
from .relations import RelationReport

MARGIN_REPRODUCE_TOL = 1e-12
_DIM_LIMIT = (2, 8)


class WitnessMismatchError(RuntimeError):
    """A stored witness no longer reproduces its report."""


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one search run."""

    target: str
    trials: int
    seed: int
    dim_system: tuple[int, int] = (2, 4)
    dim_apparatus: tuple[int, int] = (2, 4)
    refine_steps: int = 0
    perturbation_scale: float = 0.05
    inject_spin_phi: float | None = None

    def __post_init__(self) -> None:
        relations.describe(self.target)  # raises on unknown ids
        if self.target == "KR36":
            raise ValueError("KR36 is evaluated on wavefunctions, not searched models")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        for name, (lo, hi) in (
            ("dim_system", self.dim_system),
            ("dim_apparatus", self.dim_apparatus),
        ):
            if not (_DIM_LIMIT[0] <= lo <= hi <= _DIM_LIMIT[1]):
                raise ValueError(
                    f"{name} range {lo}:{hi} outside {_DIM_LIMIT[0]}..{_DIM_LIMIT[1]}"
                )
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be nonnegative")
        if self.perturbation_scale <= 0:
            raise ValueError("perturbation_scale must be positive")


@dataclass(frozen=True)
class Witness:
    """A (model, state) pair violating the target relation."""

    model: IndirectModel
    state: StateVector
    report: RelationReport
    margin: float
    trial_index: int


def haar_unitary(dim: int, rng: np.random.Generator) -> Operator:
    """Haar-distributed unitary from a QR-decomposed complex Gaussian matrix."""
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gauss)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return Operator(q * (diag / np.abs(diag)))


def random_hermitian(dim: int, rng: np.random.Generator) -> Operator:
    """Random Hermitian matrix with spectral radius normalized to 1."""
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    herm = 0.5 * (gauss + gauss.conj().T)
    radius = float(np.abs(np.linalg.eigvalsh(herm)).max())
    return Operator(herm / max(radius, 1e-300))


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    gauss = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(gauss)


def random_model(
    seed,
    dim_system: tuple[int, int] = (2, 4),
    dim_apparatus: tuple[int, int] = (2, 4),
) -> tuple[IndirectModel, StateVector]:
    """Seeded random model plus system state, identical for identical seeds."""
    rng = np.random.default_rng(seed)
    d_s = int(rng.integers(dim_system[0], dim_system[1] + 1))
    d_a = int(rng.integers(dim_apparatus[0], dim_apparatus[1] + 1))
    layout = SpaceLayout(d_s, d_a)
    model = IndirectModel(
        layout=layout,
        interaction=haar_unitary(layout.composite_dim, rng),
        apparatus_state=random_state(d_a, rng),
        meter=random_hermitian(d_a, rng),
        measured=random_hermitian(d_s, rng),
        conjugate=random_hermitian(d_s, rng),
    )
    return model, random_state(d_s, rng)


def _trial_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(index)])


def _evaluate(target: str, model: IndirectModel, psi: StateVector) -> RelationReport:
    return relations.evaluate(target, relations.quantities(model, psi))


def _refine(
    config: SearchConfig,
    model: IndirectModel,
    psi: StateVector,
    trial_index: int,
) -> tuple[IndirectModel, StateVector, RelationReport]:
    """Greedy seeded perturbation of the state and coupling; margin never drops."""
    rng = np.random.default_rng(
        np.random.SeedSequence([int(config.seed), int(trial_index), 0x5EF1])
    )
    best_report = _evaluate(config.target, model, psi)
    best = (model, psi, best_report)
    scale = config.perturbation_scale
    for _ in range(config.refine_steps):
        current_model, current_psi, current_report = best
        dim = current_psi.dim
        bumped_vec = current_psi.vec + scale * (
            rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        )
        candidate_psi = StateVector.normalized(bumped_vec)
        n = current_model.interaction.dim
        bumped_u = current_model.interaction.mat + scale * (
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        )
        q, r = np.linalg.qr(bumped_u)
        diag = np.diagonal(r).copy()
        diag[diag == 0] = 1.0
        candidate_model = replace(
            current_model, interaction=Operator(q * (diag / np.abs(diag)))
        )
        candidate_report = _evaluate(config.target, candidate_model, candidate_psi)
        if -candidate_report.slack > -current_report.slack:
            best = (candidate_model, candidate_psi, candidate_report)
    return best


def search(config: SearchConfig) -> list[Witness]:
    """Evaluate the target on seeded trials and keep the violations, widest first."""
    witnesses = []
    for index in range(config.trials):
        if index == 0 and config.inject_spin_phi is not None:
            model, psi = spin.indirect_model(config.inject_spin_phi), spin.PLUS_Z
        else:
            model, psi = random_model(
                _trial_seed(config.seed, index),
                config.dim_system,
                config.dim_apparatus,
            )
        report = _evaluate(config.target, model, psi)
        if report.satisfied:
            continue
        if config.refine_steps:
            model, psi, report = _refine(config, model, psi, index)
        witnesses.append(
            Witness(
                model=model,
                state=psi,
                report=report,
                margin=-report.slack,
                trial_index=index,
            )
        )
    witnesses.sort(key=lambda w: (-w.margin, w.trial_index))
    return witnesses


def verify_witness(witness: Witness) -> RelationReport:
    """Re-evaluate a witness from its serialized form; must reproduce the report."""
    doc = modelio.witness_to_doc(
        witness.model, witness.state, witness.report, witness.trial_index
    )
    model, state, stored, _ = modelio.witness_from_doc(doc)
    fresh = _evaluate(stored.relation_id, model, state)
    if (
        abs(fresh.lhs - stored.lhs) > MARGIN_REPRODUCE_TOL
        or abs(fresh.rhs - stored.rhs) > MARGIN_REPRODUCE_TOL
    ):
        raise WitnessMismatchError(
            f"witness for {stored.relation_id} does not reproduce: "
            f"lhs {stored.lhs!r} -> {fresh.lhs!r}, rhs {stored.rhs!r} -> {fresh.rhs!r}"
        )
    return fresh


def verify_witness_doc(doc: dict) -> RelationReport:
    """Verify a witness document loaded from disk."""
    model, state, stored, index = modelio.witness_from_doc(doc)
    witness = Witness(
        model=model, state=state, report=stored, margin=-stored.slack, trial_index=index
    )
    return verify_witness(witness)
