"""Serialization of models, states, reports, and witnesses.

The interchange document is JSON with matrices as nested [re, im] pairs in
row-major order:

    {"type": "indirect" | "projective" | "joint",
     "dimS": int, "dimA": int,
     "U": [[[re, im], ...], ...], "xi": [[re, im], ...],
     "M": ..., "N": ..., "A": ..., "B": ...,
     "projectors": [{"value": v, "E": ...}, ...]}

Indirect and joint documents carry U, xi, M, A, B (plus N for joint);
projective documents carry projectors, A, B.  Parsing errors always name
the offending field.
"""

from __future__ import annotations

import json

import numpy as np

from .models import IndirectModel, JointModel, ModelValidationError, ProjectiveModel
from .operators import Operator, SpaceLayout, StateVector
from .relations import RelationReport, report_from_doc, report_to_doc


class ModelFormatError(ValueError):
    """A model document cannot be parsed; message names the field."""


def matrix_to_doc(op: Operator) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in op.mat]


def vector_to_doc(state) -> list:
    vec = state.vec if isinstance(state, StateVector) else np.asarray(state).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in vec]


def _pairs_to_array(raw, field: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise ModelFormatError(f"field '{field}': entries must be [re, im] pairs") from None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ModelFormatError(f"field '{field}': entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_from_doc(raw, field: str) -> Operator:
    data = _pairs_to_array(raw, field)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise ModelFormatError(f"field '{field}': expected a square matrix")
    return Operator(data)


def vector_from_doc(raw, field: str) -> StateVector:
    data = _pairs_to_array(raw, field)
    if data.ndim != 1:
        raise ModelFormatError(f"field '{field}': expected a vector")
    try:
        return StateVector(data)
    except ValueError as exc:
        raise ModelFormatError(f"field '{field}': {exc}") from None


def _take(doc: dict, field: str):
    try:
        return doc[field]
    except KeyError:
        raise ModelFormatError(f"field '{field}': missing") from None


def model_to_doc(model) -> dict:
    if isinstance(model, JointModel):
        doc = {
            "type": "joint",
            "dimS": model.layout.dim_system,
            "dimA": model.layout.dim_apparatus,
            "U": matrix_to_doc(model.interaction),
            "xi": vector_to_doc(model.apparatus_state),
            "M": matrix_to_doc(model.meter),
            "N": matrix_to_doc(model.second_meter),
            "A": matrix_to_doc(model.measured),
            "B": matrix_to_doc(model.conjugate),
        }
    elif isinstance(model, IndirectModel):
        doc = {
            "type": "indirect",
            "dimS": model.layout.dim_system,
            "dimA": model.layout.dim_apparatus,
            "U": matrix_to_doc(model.interaction),
            "xi": vector_to_doc(model.apparatus_state),
            "M": matrix_to_doc(model.meter),
            "A": matrix_to_doc(model.measured),
            "B": matrix_to_doc(model.conjugate),
        }
    elif isinstance(model, ProjectiveModel):
        doc = {
            "type": "projective",
            "dimS": model.dim,
            "projectors": [
                {"value": float(value), "E": matrix_to_doc(proj)}
                for value, proj in model.outcomes
            ],
            "A": matrix_to_doc(model.measured),
            "B": matrix_to_doc(model.conjugate),
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return doc


def model_from_doc(doc: dict):
    if not isinstance(doc, dict):
        raise ModelFormatError("field 'type': document must be an object")
    kind = _take(doc, "type")
    if kind in ("indirect", "joint"):
        try:
            layout = SpaceLayout(int(_take(doc, "dimS")), int(_take(doc, "dimA")))
        except ValueError as exc:
            raise ModelFormatError(f"field 'dimS'/'dimA': {exc}") from None
        common = dict(
            layout=layout,
            interaction=matrix_from_doc(_take(doc, "U"), "U"),
            apparatus_state=vector_from_doc(_take(doc, "xi"), "xi"),
            meter=matrix_from_doc(_take(doc, "M"), "M"),
            measured=matrix_from_doc(_take(doc, "A"), "A"),
            conjugate=matrix_from_doc(_take(doc, "B"), "B"),
        )
        try:
            if kind == "joint":
                return JointModel(
                    second_meter=matrix_from_doc(_take(doc, "N"), "N"), **common
                )
            return IndirectModel(**common)
        except ModelValidationError as exc:
            raise ModelFormatError(str(exc)) from None
    if kind == "projective":
        raw = _take(doc, "projectors")
        if not isinstance(raw, list):
            raise ModelFormatError("field 'projectors': expected a list")
        outcomes = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, dict):
                raise ModelFormatError(f"field 'projectors[{i}]': expected an object")
            value = _take(entry, "value") if "value" in entry else None
            if value is None:
                raise ModelFormatError(f"field 'projectors[{i}].value': missing")
            outcomes.append(
                (float(value), matrix_from_doc(_take(entry, "E"), f"projectors[{i}].E"))
            )
        try:
            return ProjectiveModel(
                outcomes=tuple(outcomes),
                measured=matrix_from_doc(_take(doc, "A"), "A"),
                conjugate=matrix_from_doc(_take(doc, "B"), "B"),
            )
        except ModelValidationError as exc:
            raise ModelFormatError(str(exc)) from None
    raise ModelFormatError(f"field 'type': unknown model type {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(model_to_doc(model), handle, indent=1)
        handle.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(
                f"field 'type': not a complete JSON document "
                f"(line {exc.lineno}, column {exc.colno}: {exc.msg})"
            ) from None
    return model_from_doc(doc)


def load_state(path) -> StateVector:
    """Read a bare state vector stored as a JSON list of [re, im] pairs."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(
                f"field 'state': not a complete JSON document "
                f"(line {exc.lineno}, column {exc.colno}: {exc.msg})"
            ) from None
    return vector_from_doc(doc, "state")


def save_state(state: StateVector, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(vector_to_doc(state), handle)
        handle.write("\n")


def witness_to_doc(model, state: StateVector, report: RelationReport, trial_index: int) -> dict:
    return {
        "model": model_to_doc(model),
        "state": vector_to_doc(state),
        "report": report_to_doc(report),
        "margin": -report.slack,
        "trial_index": int(trial_index),
    }


def witness_from_doc(doc: dict):
    model = model_from_doc(_take(doc, "model"))
    state = vector_from_doc(_take(doc, "state"), "state")
    report = report_from_doc(_take(doc, "report"))
    return model, state, report, int(doc.get("trial_index", 0))


def dump_json(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(doc, handle, indent=1)
        handle.write("\n")


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
