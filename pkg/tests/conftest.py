"""Shared builders for the test suite."""

import os

import numpy as np
import pytest

from uncrel.models import IndirectModel, JointModel
from uncrel.operators import Operator, SpaceLayout, StateVector, identity

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")


def swap_matrix(dim: int) -> np.ndarray:
    """Unitary exchanging the two factors of a dim x dim composite space."""
    mat = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            mat[i * dim + j, j * dim + i] = 1.0
    return mat


def swap_model(measured: Operator, conjugate: Operator, xi: StateVector) -> IndirectModel:
    """Swap the system into the apparatus and read the measured observable there."""
    dim = measured.dim
    return IndirectModel(
        layout=SpaceLayout(dim, dim),
        interaction=Operator(swap_matrix(dim)),
        apparatus_state=xi,
        meter=measured,
        measured=measured,
        conjugate=conjugate,
    )


def identity_model(
    meter: Operator, measured: Operator, conjugate: Operator, xi: StateVector
) -> IndirectModel:
    """No interaction at all; the meter never couples to the system."""
    layout = SpaceLayout(measured.dim, meter.dim)
    return IndirectModel(
        layout=layout,
        interaction=identity(layout.composite_dim),
        apparatus_state=xi,
        meter=meter,
        measured=measured,
        conjugate=conjugate,
    )


def sequential_joint_model(first: Operator, second: Operator) -> JointModel:
    """Measure `first` then `second` on a qubit with one ancilla each.

    Each stage couples one fresh ancilla qubit through the branch-flip
    dilation of the projective measurement along the given axis; the two
    meters read different ancillas and therefore commute.
    """
    eye2 = np.eye(2, dtype=complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)

    def projectors(axis: Operator):
        return (eye2 + axis.mat) / 2, (eye2 - axis.mat) / 2

    p1, m1 = projectors(first)
    p2, m2 = projectors(second)
    stage1 = np.kron(p1, np.kron(eye2, eye2)) + np.kron(m1, np.kron(sx, eye2))
    stage2 = np.kron(p2, np.kron(eye2, eye2)) + np.kron(m2, np.kron(eye2, sx))
    return JointModel(
        layout=SpaceLayout(2, 4),
        interaction=Operator(stage2 @ stage1),
        apparatus_state=StateVector.basis(4, 0),
        meter=Operator(np.kron(sz, eye2)),
        second_meter=Operator(np.kron(eye2, sz)),
        measured=first,
        conjugate=second,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
