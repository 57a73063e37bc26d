"""Evaluation of the uncertainty-relation catalog.

Every relation is evaluated from a :class:`QuantitySet`, a bundle of scalar
quantities computed once per (model, state) pair.  Reports carry the two
sides, the slack, the bound-normalized slack, and a satisfied flag.  The
relation identifiers are fixed tokens shared with the CLI and the CSV
output format:

===========  ==========  ====================================================
identifier   universal   left-hand side >= right-hand side
===========  ==========  ====================================================
R8           yes         sigma(A) sigma(B)            >=  c/2
R20          yes         sigma(dA) sigma(dB)          >=  |<[dA, dB]>| / 2
R21          yes         eps eta                      >=  |<[dA, dB]>| / 2
OZ16         yes         eps eta + sA eta + eps sB    >=  c/2
UVH1         yes         (eps + sA)(eta + sB)         >=  c
MAK9         no          sqrt((eps^2+sA^2)(eta^2+sB^2)) >= c
HEDR13       no          eps eta                      >=  c/2
HT30         yes         (s(dA)+s(Mout))(s(dB)+s(Bout)) >= c/2
AK34         no          sqrt((eps^2+sA^2)(epsN^2+sB^2)) >= c
UAK35        yes         (eps + sA)(epsN + sB)        >=  c
TRI25        yes         s(dA) s(dB) >= middle >= bottom (three-term split)
TRI29        yes         s(dA) s(dB) >= middle >= bottom (four-term split)
CHAIN12      yes         (eps + sA)(eta + sB)         >=  s(Mout) s(Bout)
KR36         yes         dev(p) dev(x) >= boundary bound (periodic box)
===========  ==========  ====================================================

with ``c = |<[A, B]>|``, ``dA/dB`` the output deviations, ``eps/eta`` the
error and disturbance, and ``sX`` standard deviations.  Non-universal
relations are allowed to fail; a failing universal relation signals a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .models import IndirectModel, JointModel, joint_outputs, meter_out, conjugate_out, composite_state
from .operators import Operator, StateVector

SLACK_TOL = 1e-9
DEGENERATE_RHS_TOL = 1e-12
COMMUTING_OUTPUTS_TOL = 1e-10


class MissingQuantityError(ValueError):
    """A relation needs a quantity the given set does not carry."""


class NoncommutingOutputsError(ValueError):
    """TRI25 presumes commuting outputs; the quantity set says otherwise."""


@dataclass(frozen=True)
class QuantitySet:
    """Scalar quantities of one (model, state) pair.

    ``eps_n`` is the error of the second meter against the conjugate
    observable.  Joint models compute it from their second meter; indirect
    models use the evolved conjugate observable itself as that meter (it
    always commutes with the meter output), which makes ``eps_n`` equal to
    ``eta``.
    """

    eps: float
    eta: float
    sigma_a: float
    sigma_b: float
    sigma_mout: float
    sigma_bout: float
    sigma_mout_minus_a: float
    sigma_bout_minus_b: float
    comm_ab: float
    comm_da_db: float
    comm_a_db: float
    comm_da_b: float
    comm_mout_db: float
    comm_da_bout: float
    comm_mout_bout: float
    eps_n: float | None = None

    def __post_init__(self) -> None:
        for field in fields(self):
            value = getattr(self, field.name)
            if value is not None and value < 0.0:
                raise ValueError(f"{field.name} must be nonnegative, got {value!r}")


@dataclass(frozen=True)
class RelationReport:
    """One evaluated inequality."""

    relation_id: str
    lhs: float
    rhs: float
    slack: float
    normalized_slack: float
    satisfied: bool
    degenerate: bool = False
    tolerance: float = SLACK_TOL
    rhs_bottom: float | None = None
    slack_bottom: float | None = None
    variant: str = ""


def make_report(
    relation_id: str,
    lhs: float,
    rhs: float,
    rhs_bottom: float | None = None,
    tolerance: float = SLACK_TOL,
    variant: str = "",
) -> RelationReport:
    """Assemble a report; satisfaction means slack >= -tolerance."""
    lhs = float(lhs)
    rhs = float(rhs)
    if rhs_bottom is not None:
        rhs_bottom = float(rhs_bottom)
    slack = lhs - rhs
    degenerate = rhs <= DEGENERATE_RHS_TOL
    normalized = float("nan") if degenerate else slack / rhs
    return RelationReport(
        relation_id=relation_id,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        normalized_slack=normalized,
        satisfied=slack >= -tolerance,
        degenerate=degenerate,
        tolerance=tolerance,
        rhs_bottom=rhs_bottom,
        slack_bottom=None if rhs_bottom is None else lhs - rhs_bottom,
        variant=variant,
    )


def _need(quantities: QuantitySet, names: tuple[str, ...]) -> None:
    for name in names:
        if getattr(quantities, name) is None:
            raise MissingQuantityError(f"relation needs quantity '{name}'")


def _eval_r8(q):
    return q.sigma_a * q.sigma_b, 0.5 * q.comm_ab, None


def _eval_r20(q):
    return q.sigma_mout_minus_a * q.sigma_bout_minus_b, 0.5 * q.comm_da_db, None


def _eval_r21(q):
    return q.eps * q.eta, 0.5 * q.comm_da_db, None


def _eval_oz16(q):
    lhs = q.eps * q.eta + q.sigma_a * q.eta + q.eps * q.sigma_b
    return lhs, 0.5 * q.comm_ab, None


def _eval_uvh1(q):
    return (q.eps + q.sigma_a) * (q.eta + q.sigma_b), q.comm_ab, None


def _eval_mak9(q):
    lhs = math.sqrt((q.eps**2 + q.sigma_a**2) * (q.eta**2 + q.sigma_b**2))
    return lhs, q.comm_ab, None


def _eval_hedr13(q):
    return q.eps * q.eta, 0.5 * q.comm_ab, None


def _eval_ht30(q):
    lhs = (q.sigma_mout_minus_a + q.sigma_mout) * (q.sigma_bout_minus_b + q.sigma_bout)
    return lhs, 0.5 * q.comm_ab, None


def _eval_ak34(q):
    lhs = math.sqrt((q.eps**2 + q.sigma_a**2) * (q.eps_n**2 + q.sigma_b**2))
    return lhs, q.comm_ab, None


def _eval_uak35(q):
    return (q.eps + q.sigma_a) * (q.eps_n + q.sigma_b), q.comm_ab, None


def _eval_tri25(q):
    # The middle bound equals |<[dA, dB]>|/2 only when the outputs commute;
    # refuse to proceed otherwise instead of reporting a wrong number.
    if q.comm_mout_bout > COMMUTING_OUTPUTS_TOL:
        raise NoncommutingOutputsError(
            f"TRI25 needs commuting outputs, |<[Mout, Bout]>| = {q.comm_mout_bout!r}"
        )
    middle = 0.5 * q.comm_da_db
    bottom = 0.5 * (q.comm_ab - q.comm_a_db - q.comm_da_b)
    return q.sigma_mout_minus_a * q.sigma_bout_minus_b, middle, bottom


def _eval_tri29(q):
    middle = 0.5 * q.comm_da_db
    bottom = 0.5 * (q.comm_ab - q.comm_mout_db - q.comm_da_bout - q.comm_mout_bout)
    return q.sigma_mout_minus_a * q.sigma_bout_minus_b, middle, bottom


def _eval_chain12(q):
    lhs = (q.eps + q.sigma_a) * (q.eta + q.sigma_b)
    return lhs, q.sigma_mout * q.sigma_bout, None


@dataclass(frozen=True)
class _RelationSpec:
    universal: bool
    requires: tuple
    evaluate: object
    description: str


_BASE = ("eps", "eta", "sigma_a", "sigma_b")
_DEV = ("sigma_mout_minus_a", "sigma_bout_minus_b")

_RELATIONS: dict[str, _RelationSpec] = {
    "R8": _RelationSpec(True, ("sigma_a", "sigma_b", "comm_ab"), _eval_r8,
                        "spread product vs half commutator"),
    "R20": _RelationSpec(True, _DEV + ("comm_da_db",), _eval_r20,
                         "deviation-spread product vs deviation commutator"),
    "R21": _RelationSpec(True, ("eps", "eta", "comm_da_db"), _eval_r21,
                         "error-disturbance product vs deviation commutator"),
    "OZ16": _RelationSpec(True, _BASE + ("comm_ab",), _eval_oz16,
                          "error-disturbance three-term sum"),
    "UVH1": _RelationSpec(True, _BASE + ("comm_ab",), _eval_uvh1,
                          "inaccuracy-fluctuation product"),
    "MAK9": _RelationSpec(False, _BASE + ("comm_ab",), _eval_mak9,
                          "rms-combined error/disturbance product"),
    "HEDR13": _RelationSpec(False, ("eps", "eta", "comm_ab"), _eval_hedr13,
                            "bare error-disturbance product"),
    "HT30": _RelationSpec(True, _DEV + ("sigma_mout", "sigma_bout", "comm_ab"), _eval_ht30,
                          "output-deviation sum product"),
    "AK34": _RelationSpec(False, ("eps", "eps_n", "sigma_a", "sigma_b", "comm_ab"), _eval_ak34,
                          "joint-meter rms product"),
    "UAK35": _RelationSpec(True, ("eps", "eps_n", "sigma_a", "sigma_b", "comm_ab"), _eval_uak35,
                           "joint-meter inaccuracy product"),
    "TRI25": _RelationSpec(True, _DEV + ("comm_da_db", "comm_ab", "comm_a_db",
                                         "comm_da_b", "comm_mout_bout"), _eval_tri25,
                           "three-term triangle split of R20"),
    "TRI29": _RelationSpec(True, _DEV + ("comm_da_db", "comm_ab", "comm_mout_db",
                                         "comm_da_bout", "comm_mout_bout"), _eval_tri29,
                           "four-term triangle split of R20"),
    "CHAIN12": _RelationSpec(True, _BASE + ("sigma_mout", "sigma_bout"), _eval_chain12,
                             "inaccuracy product vs output-spread product"),
}

# KR36 (periodic box) reports through the same record type but is evaluated
# from sampled wavefunctions in the box module, not from a QuantitySet.
RELATION_IDS: tuple[str, ...] = tuple(_RELATIONS)
UNIVERSAL_IDS: tuple[str, ...] = tuple(k for k, v in _RELATIONS.items() if v.universal)


def is_universal(relation_id: str) -> bool:
    if relation_id == "KR36":
        return True
    return _spec(relation_id).universal


def describe(relation_id: str) -> str:
    if relation_id == "KR36":
        return "periodic-box momentum-position spread product"
    return _spec(relation_id).description


def _spec(relation_id: str) -> _RelationSpec:
    try:
        return _RELATIONS[relation_id]
    except KeyError:
        raise ValueError(f"unknown relation id {relation_id!r}") from None


def evaluate(relation_id: str, quantities: QuantitySet) -> RelationReport:
    """Evaluate one relation on a quantity set."""
    spec = _spec(relation_id)
    _need(quantities, spec.requires)
    lhs, rhs, bottom = spec.evaluate(quantities)
    return make_report(relation_id, lhs, rhs, rhs_bottom=bottom)


def evaluate_many(quantities: QuantitySet, ids=None) -> list[RelationReport]:
    """Evaluate several relations in registry order."""
    return [evaluate(rid, quantities) for rid in (ids or RELATION_IDS)]


def _comm_magnitude(left: np.ndarray, right: np.ndarray) -> float:
    # |<[X, Y]>| = 2 |Im <X Psi, Y Psi>| for Hermitian X, Y.
    return float(2.0 * abs(np.vdot(left, right).imag))


def _spread(applied: np.ndarray, state: np.ndarray) -> float:
    mean = float(np.vdot(state, applied).real)
    second = float(np.vdot(applied, applied).real)
    return float(np.sqrt(max(second - mean * mean, 0.0)))


def quantities_from_operators(
    measured_out: Operator,
    conjugate_out_op: Operator,
    measured: Operator,
    conjugate: Operator,
    state: StateVector,
    second_out: Operator | None = None,
) -> QuantitySet:
    """Quantity set for arbitrary Hermitian operators on one space.

    All four operators and the state share a single space; no model is
    needed.  This is the raw engine behind :func:`quantities` and also
    serves direct checks of relations such as HT30 that hold for any
    Hermitian substitutes.
    """
    vec = state.vec
    v_m = measured_out.mat @ vec
    v_b = conjugate_out_op.mat @ vec
    v_a = measured.mat @ vec
    v_bb = conjugate.mat @ vec
    v_da = v_m - v_a
    v_db = v_b - v_bb

    eps = float(np.linalg.norm(v_da))
    eta = float(np.linalg.norm(v_db))
    eps_n = eta
    if second_out is not None:
        eps_n = float(np.linalg.norm(second_out.mat @ vec - v_bb))

    return QuantitySet(
        eps=eps,
        eta=eta,
        sigma_a=_spread(v_a, vec),
        sigma_b=_spread(v_bb, vec),
        sigma_mout=_spread(v_m, vec),
        sigma_bout=_spread(v_b, vec),
        sigma_mout_minus_a=_spread(v_da, vec),
        sigma_bout_minus_b=_spread(v_db, vec),
        comm_ab=_comm_magnitude(v_a, v_bb),
        comm_da_db=_comm_magnitude(v_da, v_db),
        comm_a_db=_comm_magnitude(v_a, v_db),
        comm_da_b=_comm_magnitude(v_da, v_bb),
        comm_mout_db=_comm_magnitude(v_m, v_db),
        comm_da_bout=_comm_magnitude(v_da, v_b),
        comm_mout_bout=_comm_magnitude(v_m, v_b),
        eps_n=eps_n,
    )


def quantities(model: IndirectModel, psi: StateVector) -> QuantitySet:
    """All relation inputs for a model evaluated on the joined state."""
    state = composite_state(model, psi)
    lift = model.layout.lift_system
    second = None
    if isinstance(model, JointModel):
        _, second = joint_outputs(model)
    return quantities_from_operators(
        meter_out(model),
        conjugate_out(model),
        lift(model.measured),
        lift(model.conjugate),
        state,
        second_out=second,
    )


@dataclass(frozen=True)
class DirectProductComparison:
    """Output-spread product versus its error/disturbance formula.

    The two sides agree only for unbiased measurement and disturbance; the
    difference field exposes the bias.
    """

    direct: RelationReport
    formula: RelationReport
    difference: float


def eval_direct_products(model: IndirectModel, psi: StateVector) -> DirectProductComparison:
    """Report sigma(Mout) sigma(Bout) next to the rms formula, same bound."""
    q = quantities(model, psi)
    direct = make_report("MAK9", q.sigma_mout * q.sigma_bout, q.comm_ab, variant="direct")
    formula_lhs, formula_rhs, _ = _eval_mak9(q)
    formula = make_report("MAK9", formula_lhs, formula_rhs, variant="formula")
    return DirectProductComparison(
        direct=direct,
        formula=formula,
        difference=abs(direct.lhs - formula.lhs),
    )


def eval_ak(model: JointModel, psi: StateVector) -> tuple[RelationReport, RelationReport]:
    """AK34 and UAK35 for a joint model (second meter reads the conjugate)."""
    q = quantities(model, psi)
    return evaluate("AK34", q), evaluate("UAK35", q)


CSV_HEADER = "relation_id,lhs,rhs,slack,normalized_slack,satisfied"


def _fmt(value: float) -> str:
    return format(value, ".17g")


def report_row(report: RelationReport) -> str:
    """Flat CSV record for one report."""
    return ",".join(
        (
            report.relation_id,
            _fmt(report.lhs),
            _fmt(report.rhs),
            _fmt(report.slack),
            _fmt(report.normalized_slack),
            "true" if report.satisfied else "false",
        )
    )


def reports_to_csv(reports, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(CSV_HEADER + "\n")
        for report in reports:
            handle.write(report_row(report) + "\n")


def report_to_doc(report: RelationReport) -> dict:
    """Structured (JSON-ready) form of a report."""
    doc = {
        "relation_id": report.relation_id,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "normalized_slack": None if math.isnan(report.normalized_slack) else report.normalized_slack,
        "satisfied": report.satisfied,
        "degenerate": report.degenerate,
        "tolerance": report.tolerance,
        "universal": is_universal(report.relation_id),
    }
    if report.rhs_bottom is not None:
        doc["rhs_bottom"] = report.rhs_bottom
        doc["slack_bottom"] = report.slack_bottom
    if report.variant:
        doc["variant"] = report.variant
    return doc


def report_from_doc(doc: dict) -> RelationReport:
    """Rebuild a report from its structured form."""
    try:
        lhs = float(doc["lhs"])
        rhs = float(doc["rhs"])
        relation_id = str(doc["relation_id"])
    except KeyError as exc:
        raise MissingQuantityError(f"report document missing field {exc.args[0]!r}") from None
    return make_report(
        relation_id,
        lhs,
        rhs,
        rhs_bottom=doc.get("rhs_bottom"),
        tolerance=float(doc.get("tolerance", SLACK_TOL)),
        variant=str(doc.get("variant", "")),
    )
