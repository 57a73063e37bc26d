"""Dense complex linear algebra on small Hilbert spaces.

Operators and state vectors are thin immutable wrappers around numpy
arrays.  Composite spaces always use Kronecker (system-first) index
ordering; every higher-level module inherits that single convention.
Dimensions in this package stay small (tens), so everything is dense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
PROJECTOR_TOL = 1e-12
STATE_NORM_TOL = 1e-12
# std_dev clamps radicands in [-RADICAND_TOL, 0) to zero; anything below
# that indicates corrupted inputs rather than harmless rounding.
RADICAND_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Operands live on spaces of different dimension."""


class Operator:
    """Square complex matrix acting on one (possibly composite) space."""

    __slots__ = ("_mat",)

    def __init__(self, matrix) -> None:
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {mat.shape}")
        if mat.shape[0] < 1:
            raise ValueError("operator dimension must be positive")
        mat.setflags(write=False)
        self._mat = mat

    @property
    def mat(self) -> np.ndarray:
        """Read-only matrix entries."""
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def dag(self) -> "Operator":
        """Hermitian adjoint."""
        return Operator(self._mat.conj().T)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return float(np.abs(self._mat - self._mat.conj().T).max()) <= tol

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        gram = self._mat.conj().T @ self._mat
        return float(np.linalg.norm(gram - np.eye(self.dim))) <= tol

    def is_projector(self, tol: float = PROJECTOR_TOL) -> bool:
        idempotent = float(np.linalg.norm(self._mat @ self._mat - self._mat)) <= tol
        hermitian = float(np.linalg.norm(self._mat - self._mat.conj().T)) <= tol
        return idempotent and hermitian

    def _coerce(self, other) -> np.ndarray:
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"operator dims differ: {self.dim} vs {other.dim}"
            )
        return other._mat

    def __matmul__(self, other) -> "Operator":
        return Operator(self._mat @ self._coerce(other))

    def __add__(self, other) -> "Operator":
        return Operator(self._mat + self._coerce(other))

    def __sub__(self, other) -> "Operator":
        return Operator(self._mat - self._coerce(other))

    def __neg__(self) -> "Operator":
        return Operator(-self._mat)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self._mat * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim})"


class StateVector:
    """Unit-norm complex vector on one (possibly composite) space."""

    __slots__ = ("_vec",)

    def __init__(self, amplitudes) -> None:
        vec = np.array(amplitudes, dtype=complex).reshape(-1)
        if vec.size < 1:
            raise ValueError("state vector must be nonempty")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1")
        vec.setflags(write=False)
        self._vec = vec

    @property
    def vec(self) -> np.ndarray:
        return self._vec

    @property
    def dim(self) -> int:
        return self._vec.size

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        """Computational basis vector |index> on a dim-dimensional space."""
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} outside [0, {dim})")
        vec = np.zeros(dim, dtype=complex)
        vec[index] = 1.0
        return cls(vec)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Normalize raw amplitudes (must be nonzero) into a state."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vec))
        if norm <= 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(vec / norm)

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


@dataclass(frozen=True)
class SpaceLayout:
    """System-apparatus factorization of a composite space (system first)."""

    dim_system: int
    dim_apparatus: int

    def __post_init__(self) -> None:
        if self.dim_system < 2:
            raise ValueError("system dimension must be at least 2")
        if self.dim_apparatus < 1:
            raise ValueError("apparatus dimension must be at least 1")

    @property
    def composite_dim(self) -> int:
        return self.dim_system * self.dim_apparatus

    def lift_system(self, op: Operator) -> Operator:
        """Embed a system operator as op (x) identity on the composite space."""
        if op.dim != self.dim_system:
            raise DimensionMismatchError(
                f"system operator dim {op.dim} != {self.dim_system}"
            )
        return tensor(op, identity(self.dim_apparatus))

    def lift_apparatus(self, op: Operator) -> Operator:
        """Embed an apparatus operator as identity (x) op on the composite space."""
        if op.dim != self.dim_apparatus:
            raise DimensionMismatchError(
                f"apparatus operator dim {op.dim} != {self.dim_apparatus}"
            )
        return tensor(identity(self.dim_system), op)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex))


SIGMA_X = Operator([[0, 1], [1, 0]])
SIGMA_Y = Operator([[0, -1j], [1j, 0]])
SIGMA_Z = Operator([[1, 0], [0, -1]])


def tensor(x: Operator, y: Operator) -> Operator:
    """Kronecker product with system-first index ordering."""
    return Operator(np.kron(x.mat, y.mat))


def tensor_state(x: StateVector, y: StateVector) -> StateVector:
    """Kronecker product of states, system factor first."""
    return StateVector(np.kron(x.vec, y.vec))


def commutator(x: Operator, y: Operator) -> Operator:
    """XY - YX for operators on the same space."""
    if x.dim != y.dim:
        raise DimensionMismatchError(f"operator dims differ: {x.dim} vs {y.dim}")
    return Operator(x.mat @ y.mat - y.mat @ x.mat)


def _check_state(op: Operator, state: StateVector) -> None:
    if op.dim != state.dim:
        raise DimensionMismatchError(
            f"operator dim {op.dim} does not match state dim {state.dim}"
        )


def expectation(op: Operator, state: StateVector) -> complex:
    """Quantum expectation value <state|op|state>."""
    _check_state(op, state)
    return complex(np.vdot(state.vec, op.mat @ state.vec))


def std_dev(op: Operator, state: StateVector) -> float:
    """Standard deviation (<op^2> - <op>^2)^(1/2) of a Hermitian operator."""
    _check_state(op, state)
    applied = op.mat @ state.vec
    mean = float(np.vdot(state.vec, applied).real)
    second = float(np.vdot(applied, applied).real)
    radicand = second - mean * mean
    if radicand < -RADICAND_TOL:
        raise ValueError(
            f"negative variance {radicand!r}: inputs are numerically corrupted"
        )
    return float(np.sqrt(max(radicand, 0.0)))


def residual_norm(op: Operator, state: StateVector) -> float:
    """Euclidean norm of op applied to state; equals <op^2>^(1/2) for Hermitian op."""
    _check_state(op, state)
    return float(np.linalg.norm(op.mat @ state.vec))


def polarization_matrix_element(
    op: Operator,
    psi: StateVector,
    psi_prime,
    xi: StateVector,
) -> complex:
    """Off-diagonal element <psi (x) xi| op |psi' (x) xi> from diagonal forms.

    Reconstructs the matrix element from the four quadratic forms on
    (psi +/- psi') (x) xi and (psi +/- i psi') (x) xi.  psi' may be any raw
    complex vector (it is typically an operator applied to a state and
    therefore not normalized).
    """
    left = psi.vec
    right = np.asarray(psi_prime, dtype=complex).reshape(-1)
    anc = xi.vec
    if right.size != left.size:
        raise DimensionMismatchError(
            f"psi' dim {right.size} does not match psi dim {left.size}"
        )
    if op.dim != left.size * anc.size:
        raise DimensionMismatchError(
            f"operator dim {op.dim} does not match composite dim {left.size * anc.size}"
        )

    def form(vec: np.ndarray) -> complex:
        full = np.kron(vec, anc)
        return complex(np.vdot(full, op.mat @ full))

    return 0.25 * (
        form(left + right)
        - form(left - right)
        - 1j * form(left + 1j * right)
        + 1j * form(left - 1j * right)
    )
