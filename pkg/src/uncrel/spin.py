"""Spin-measurement sweep over the detuning angle.

The scenario is fixed: measure the x spin component of a qubit prepared
spin-up along z, watch the y component for disturbance, and detune the
actually measured axis by an angle phi in [0, pi/2] within the x-y plane.
Closed forms exist for everything:

    error        eps(phi)  = 2 sin(phi/2)
    disturbance  eta(phi)  = sqrt(2) cos(phi)
    spreads      sigma = 1 for both observables
    bound        |<[A, B]>| = 2

Each sweep row is computed both from these closed forms and from the
dilated indirect model; the two routes must agree to 1e-9 or the sweep
aborts.  Spin observables carry no physical prefactor (they are the bare
Pauli matrices), so all quantities are dimensionless and O(1).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import relations
from .models import ProjectiveModel, dilate
from .operators import SIGMA_X, SIGMA_Y, Operator, StateVector, identity

PHI_MIN = 0.0
PHI_MAX = math.pi / 2
AGREEMENT_TOL = 1e-9
RHS_FULL = 2.0
RHS_HALF = 1.0

PLUS_Z = StateVector.basis(2, 0)

CSV_HEADER = "phi,eps,eta,sigmaA,sigmaB,lhs14,lhs15,lhs16,lhs13,ratio14,ratio16"

QUANTITY_IDS = ("eps", "eta", "lhs14", "lhs15", "lhs16_ratio", "lhs14_ratio")


class SweepAgreementError(RuntimeError):
    """Closed forms and the dilated model disagree beyond tolerance."""


class IngestError(ValueError):
    """A data-point file is malformed; message carries line numbers."""


def _check_domain(phi: float) -> float:
    phi = float(phi)
    if not PHI_MIN <= phi <= PHI_MAX:
        raise ValueError(f"detuning angle {phi!r} outside [0, pi/2]")
    return phi


def detuned_axis(phi: float) -> Operator:
    """Spin axis rotated by phi from x toward y in the equatorial plane."""
    phi = _check_domain(phi)
    return math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y


def detuned_projectors(phi: float) -> tuple[tuple[float, Operator], tuple[float, Operator]]:
    """Outcome projectors (I +/- axis)/2 for the detuned axis."""
    axis = detuned_axis(phi)
    eye = identity(2)
    return ((1.0, 0.5 * (eye + axis)), (-1.0, 0.5 * (eye - axis)))


def projective_model(phi: float) -> ProjectiveModel:
    """Projective detuned measurement of x with y as the watched conjugate."""
    return ProjectiveModel(
        outcomes=detuned_projectors(phi),
        measured=SIGMA_X,
        conjugate=SIGMA_Y,
    )


def indirect_model(phi: float):
    """Qubit-apparatus dilation of the detuned projective measurement."""
    return dilate(projective_model(phi))


def analytic_quantities(phi: float) -> tuple[float, float, float, float]:
    """Closed-form (error, disturbance, spread, spread) at a detuning angle."""
    phi = _check_domain(phi)
    return (2.0 * math.sin(phi / 2.0), math.sqrt(2.0) * math.cos(phi), 1.0, 1.0)


@dataclass(frozen=True)
class SweepRow:
    """One detuning angle with every curve the sweep tracks."""

    phi: float
    eps: float
    eta: float
    sigma_a: float
    sigma_b: float
    lhs14: float  # (eps + sigma_a)(eta + sigma_b), bound RHS_FULL
    lhs15: float  # sqrt((eps^2 + sigma_a^2)(eta^2 + sigma_b^2)), bound RHS_FULL
    lhs16: float  # eps eta + sigma_a eta + eps sigma_b, bound RHS_HALF
    lhs13: float  # eps eta, bound RHS_HALF
    ratio14: float
    ratio16: float


def _analytic_row(phi: float) -> SweepRow:
    eps, eta, sigma_a, sigma_b = analytic_quantities(phi)
    lhs14 = (eps + sigma_a) * (eta + sigma_b)
    lhs15 = math.sqrt((eps**2 + sigma_a**2) * (eta**2 + sigma_b**2))
    lhs16 = eps * eta + sigma_a * eta + eps * sigma_b
    lhs13 = eps * eta
    return SweepRow(
        phi=phi,
        eps=eps,
        eta=eta,
        sigma_a=sigma_a,
        sigma_b=sigma_b,
        lhs14=lhs14,
        lhs15=lhs15,
        lhs16=lhs16,
        lhs13=lhs13,
        ratio14=lhs14 / RHS_FULL,
        ratio16=lhs16 / RHS_HALF,
    )


def _simulated_values(phi: float) -> dict[str, float]:
    q = relations.quantities(indirect_model(phi), PLUS_Z)
    return {
        "eps": q.eps,
        "eta": q.eta,
        "sigmaA": q.sigma_a,
        "sigmaB": q.sigma_b,
        "lhs14": relations.evaluate("UVH1", q).lhs,
        "lhs15": relations.evaluate("MAK9", q).lhs,
        "lhs16": relations.evaluate("OZ16", q).lhs,
        "lhs13": relations.evaluate("HEDR13", q).lhs,
    }


def sweep(steps: int) -> list[SweepRow]:
    """Uniform sweep over [0, pi/2] inclusive, cross-checked per point."""
    if steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {steps}")
    rows = []
    for i in range(steps):
        phi = (i / (steps - 1)) * PHI_MAX
        row = _analytic_row(phi)
        simulated = _simulated_values(phi)
        analytic = {
            "eps": row.eps,
            "eta": row.eta,
            "sigmaA": row.sigma_a,
            "sigmaB": row.sigma_b,
            "lhs14": row.lhs14,
            "lhs15": row.lhs15,
            "lhs16": row.lhs16,
            "lhs13": row.lhs13,
        }
        for name, value in analytic.items():
            if abs(value - simulated[name]) > AGREEMENT_TOL:
                raise SweepAgreementError(
                    f"phi={phi!r}: {name} closed form {value!r} vs "
                    f"model {simulated[name]!r} differ beyond {AGREEMENT_TOL}"
                )
        rows.append(row)
    return rows


def check_sweep_invariants(rows: list[SweepRow]) -> list[str]:
    """Messages for every violated sweep-wide guarantee (empty when clean)."""
    problems = []
    for row in rows:
        if row.lhs14 < RHS_FULL:
            problems.append(f"phi={row.phi!r}: lhs14={row.lhs14!r} fell below {RHS_FULL}")
        if row.lhs15 >= RHS_FULL:
            problems.append(f"phi={row.phi!r}: lhs15={row.lhs15!r} is not below {RHS_FULL}")
        if row.lhs16 < RHS_HALF:
            problems.append(f"phi={row.phi!r}: lhs16={row.lhs16!r} fell below {RHS_HALF}")
        if row.lhs13 >= RHS_HALF:
            problems.append(f"phi={row.phi!r}: lhs13={row.lhs13!r} is not below {RHS_HALF}")
        if row.lhs14 < row.lhs15:
            problems.append(f"phi={row.phi!r}: lhs14 < lhs15 ordering broken")
    return problems


def _fmt(value: float) -> str:
    return format(value, ".17g")


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write sweep rows with 17 significant digits (round-trip exact)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(CSV_HEADER + "\n")
        for row in rows:
            handle.write(
                ",".join(
                    _fmt(v)
                    for v in (
                        row.phi,
                        row.eps,
                        row.eta,
                        row.sigma_a,
                        row.sigma_b,
                        row.lhs14,
                        row.lhs15,
                        row.lhs16,
                        row.lhs13,
                        row.ratio14,
                        row.ratio16,
                    )
                )
                + "\n"
            )


def read_csv(path) -> list[SweepRow]:
    """Read back a sweep CSV produced by :func:`emit_csv`."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    if not lines or lines[0] != CSV_HEADER:
        raise IngestError(f"line 1: expected header {CSV_HEADER!r}")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 11:
            raise IngestError(f"line {number}: expected 11 columns, got {len(parts)}")
        try:
            values = [float(part) for part in parts]
        except ValueError as exc:
            raise IngestError(f"line {number}: {exc}") from None
        rows.append(SweepRow(*values))
    return rows


@dataclass(frozen=True)
class DataPoint:
    """Externally supplied value of one sweep quantity at one angle."""

    phi: float
    quantity_id: str
    value: float
    uncertainty: float | None = None


def reference_value(quantity_id: str, phi: float) -> float:
    """Closed-form curve value for a data-point quantity."""
    row = _analytic_row(_check_domain(phi))
    table = {
        "eps": row.eps,
        "eta": row.eta,
        "lhs14": row.lhs14,
        "lhs15": row.lhs15,
        "lhs16_ratio": row.ratio16,
        "lhs14_ratio": row.ratio14,
    }
    try:
        return table[quantity_id]
    except KeyError:
        raise ValueError(f"unknown quantity id {quantity_id!r}") from None


def ingest(path) -> list[DataPoint]:
    """Parse a data-point CSV (phi, quantity_id, value[, uncertainty])."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    if not lines:
        raise IngestError("line 1: empty file, expected header")
    header = lines[0].split(",")
    if [col.strip() for col in header[:3]] != ["phi", "quantity_id", "value"]:
        raise IngestError(f"line 1: expected header 'phi,quantity_id,value[,uncertainty]', got {lines[0]!r}")
    points = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) not in (3, 4):
            raise IngestError(f"line {number}: expected 3 or 4 columns, got {len(parts)}")
        try:
            phi = float(parts[0])
        except ValueError:
            raise IngestError(f"line {number}: bad angle {parts[0]!r}") from None
        if not PHI_MIN <= phi <= PHI_MAX:
            raise IngestError(f"line {number}: angle {phi!r} outside [0, pi/2]")
        quantity_id = parts[1]
        if quantity_id not in QUANTITY_IDS:
            raise IngestError(f"line {number}: unknown quantity id {quantity_id!r}")
        try:
            value = float(parts[2])
        except ValueError:
            raise IngestError(f"line {number}: bad value {parts[2]!r}") from None
        uncertainty = None
        if len(parts) == 4 and parts[3]:
            try:
                uncertainty = float(parts[3])
            except ValueError:
                raise IngestError(f"line {number}: bad uncertainty {parts[3]!r}") from None
            if uncertainty < 0:
                raise IngestError(f"line {number}: negative uncertainty {uncertainty!r}")
        points.append(DataPoint(phi, quantity_id, value, uncertainty))
    return points


@dataclass(frozen=True)
class OverlayRow:
    phi: float
    quantity_id: str
    value: float
    reference: float
    residual: float
    nearest_phi: float


@dataclass(frozen=True)
class OverlaySummary:
    rows: tuple
    max_abs_residual: float
    mean_abs_residual: float


def overlay(rows: list[SweepRow], points: list[DataPoint]) -> OverlaySummary:
    """Compare ingested points against the closed-form curves."""
    grid = [row.phi for row in rows]
    table = []
    for point in points:
        reference = reference_value(point.quantity_id, point.phi)
        nearest = min(grid, key=lambda phi: abs(phi - point.phi)) if grid else point.phi
        table.append(
            OverlayRow(
                phi=point.phi,
                quantity_id=point.quantity_id,
                value=point.value,
                reference=reference,
                residual=point.value - reference,
                nearest_phi=nearest,
            )
        )
    residuals = [abs(row.residual) for row in table]
    return OverlaySummary(
        rows=tuple(table),
        max_abs_residual=max(residuals) if residuals else 0.0,
        mean_abs_residual=(sum(residuals) / len(residuals)) if residuals else 0.0,
    )


_PLOT_TEMPLATE = """\
# Detuning-angle sweep curves; data read from {csv}
set datafile separator ','
set xlabel 'detuning angle (rad)'
set key left top
set terminal pngcairo size 900,600
set output '{stem}_bounds.png'
set ylabel 'product value'
plot '{csv}' skip 1 using 1:6 with lines lc rgb 'red' title 'inaccuracy x fluctuation', \\
     '{csv}' skip 1 using 1:7 with lines lc rgb 'blue' title 'rms-combined product', \\
     {rhs_full} with lines lc rgb 'black' dashtype 2 title 'bound'
set output '{stem}_ratios.png'
set ylabel 'value / lower bound'
plot '{csv}' skip 1 using 1:10 with lines lc rgb 'red' title 'inaccuracy x fluctuation (normalized)', \\
     '{csv}' skip 1 using 1:11 with lines lc rgb 'green' title 'error-disturbance sum (normalized)', \\
     {rhs_half} with lines lc rgb 'black' dashtype 2 title 'bound'
"""


def emit_plot_script(csv_path, path) -> None:
    """Write a gnuplot script that renders both sweep figures from the CSV."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    relative_csv = os.path.relpath(os.path.abspath(csv_path), start=directory)
    stem = os.path.splitext(os.path.basename(path))[0]
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(
            _PLOT_TEMPLATE.format(
                csv=relative_csv,
                stem=stem,
                rhs_full=_fmt(RHS_FULL),
                rhs_half=_fmt(RHS_HALF),
            )
        )
