"""Core linear-algebra layer."""

import numpy as np
import pytest

from uncrel.operators import (
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

PLUS_Z = StateVector.basis(2, 0)
PLUS_X = StateVector.normalized([1, 1])


def random_hermitian(dim, rng):
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Operator((raw + raw.conj().T) / 2)


def random_state(dim, rng):
    return StateVector.normalized(
        rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    )


class TestOperator:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            Operator(np.zeros((2, 3)))

    def test_predicates(self):
        assert SIGMA_X.is_hermitian()
        assert SIGMA_X.is_unitary()
        assert not Operator([[0, 1], [0, 0]]).is_hermitian()
        plus = 0.5 * (identity(2) + SIGMA_X)
        assert plus.is_projector()
        assert not SIGMA_X.is_projector()

    def test_matrix_is_read_only(self):
        with pytest.raises(ValueError):
            SIGMA_X.mat[0, 0] = 5.0

    def test_arithmetic_dim_check(self):
        with pytest.raises(DimensionMismatchError):
            SIGMA_X @ identity(3)


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            StateVector([1.0, 1.0])

    def test_basis_and_normalized(self):
        assert np.allclose(StateVector.basis(3, 1).vec, [0, 1, 0])
        assert np.isclose(np.linalg.norm(PLUS_X.vec), 1.0)
        with pytest.raises(ValueError):
            StateVector.normalized([0.0, 0.0])


class TestSpaceLayout:
    def test_validation(self):
        with pytest.raises(ValueError):
            SpaceLayout(1, 2)
        with pytest.raises(ValueError):
            SpaceLayout(2, 0)

    def test_lifts(self):
        layout = SpaceLayout(2, 3)
        lifted = layout.lift_system(SIGMA_Z)
        assert np.allclose(lifted.mat, np.kron(SIGMA_Z.mat, np.eye(3)))
        lifted = layout.lift_apparatus(identity(3))
        assert np.allclose(lifted.mat, np.eye(6))
        with pytest.raises(DimensionMismatchError):
            layout.lift_system(identity(3))


class TestTensor:
    def test_identity_case(self):
        assert np.allclose(tensor(identity(2), identity(2)).mat, np.eye(4))

    def test_disjoint_factors_commute(self):
        left = tensor(SIGMA_X, identity(2))
        right = tensor(identity(2), SIGMA_Z)
        assert np.abs(commutator(left, right).mat).max() <= 1e-15

    def test_zz_diagonal(self):
        # 4x4 hand computation: diag(+1, -1, -1, +1)
        zz = tensor(SIGMA_Z, SIGMA_Z)
        assert np.allclose(zz.mat, np.diag([1.0, -1.0, -1.0, 1.0]))

    def test_mixed_product_rule(self, rng):
        for _ in range(50):
            x, xp = (random_hermitian(2, rng) for _ in range(2))
            y, yp = (random_hermitian(3, rng) for _ in range(2))
            lhs = tensor(x, y) @ tensor(xp, yp)
            rhs = tensor(x @ xp, y @ yp)
            assert np.abs(lhs.mat - rhs.mat).max() <= 1e-12

    def test_tensor_state_ordering(self):
        state = tensor_state(StateVector.basis(2, 1), StateVector.basis(3, 0))
        assert np.allclose(state.vec, [0, 0, 0, 1, 0, 0])


class TestCommutator:
    def test_pauli_algebra(self):
        assert np.allclose(commutator(SIGMA_X, SIGMA_Y).mat, 2j * SIGMA_Z.mat)

    def test_self_commutator_vanishes(self, rng):
        op = random_hermitian(4, rng)
        assert np.abs(commutator(op, op).mat).max() == 0.0

    def test_spin_lower_bound(self):
        value = expectation(commutator(SIGMA_X, SIGMA_Y), PLUS_Z)
        assert np.isclose(abs(value), 2.0)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(SIGMA_X, identity(3))


class TestExpectation:
    def test_eigenstate(self):
        assert np.isclose(expectation(SIGMA_Z, PLUS_Z), 1.0)

    def test_orthogonal_axis(self):
        assert np.isclose(expectation(SIGMA_X, PLUS_Z), 0.0)

    def test_equatorial_axis_any_angle(self):
        # any axis in the x-y plane has zero diagonal in the z basis
        for phi in np.linspace(0, np.pi / 2, 7):
            axis = np.cos(phi) * SIGMA_X + np.sin(phi) * SIGMA_Y
            assert abs(expectation(axis, PLUS_Z)) <= 1e-15

    def test_hermitian_expectation_is_real(self, rng):
        for _ in range(20):
            op = random_hermitian(3, rng)
            psi = random_state(3, rng)
            assert abs(expectation(op, psi).imag) <= 1e-12

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            expectation(SIGMA_X, StateVector.basis(3, 0))


class TestStdDev:
    def test_unit_spread(self):
        assert np.isclose(std_dev(SIGMA_X, PLUS_Z), 1.0)
        assert np.isclose(std_dev(SIGMA_Y, PLUS_Z), 1.0)

    def test_eigenstate_spread_vanishes(self):
        assert std_dev(SIGMA_Z, PLUS_Z) == 0.0

    def test_moment_identity(self, rng):
        for _ in range(50):
            op = random_hermitian(4, rng)
            psi = random_state(4, rng)
            mean = expectation(op, psi).real
            second = expectation(op @ op, psi).real
            assert abs(std_dev(op, psi) ** 2 + mean**2 - second) <= 1e-12


class TestResidualNorm:
    def test_zero_operator(self):
        zero = SIGMA_X - SIGMA_X
        assert residual_norm(zero, PLUS_X) == 0.0

    def test_detuned_axis_residual(self):
        for phi in np.linspace(0, np.pi / 2, 9):
            axis = np.cos(phi) * SIGMA_X + np.sin(phi) * SIGMA_Y
            value = residual_norm(axis - SIGMA_X, PLUS_Z)
            assert np.isclose(value, 2 * np.sin(phi / 2), atol=1e-12)

    def test_unit_eigenvalues(self):
        assert np.isclose(residual_norm(SIGMA_Z, PLUS_X), 1.0)

    def test_matches_second_moment(self, rng):
        for _ in range(50):
            op = random_hermitian(3, rng)
            psi = random_state(3, rng)
            lhs = residual_norm(op, psi) ** 2
            rhs = expectation(op @ op, psi).real
            assert abs(lhs - rhs) <= 1e-12


class TestPolarization:
    def test_identity_operator(self, rng):
        psi = random_state(2, rng)
        psi_prime = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        xi = random_state(2, rng)
        value = polarization_matrix_element(identity(4), psi, psi_prime, xi)
        assert abs(value - np.vdot(psi.vec, psi_prime)) <= 1e-12

    def test_matches_direct_element(self, rng):
        for _ in range(100):
            d_s, d_a = int(rng.integers(2, 4)), int(rng.integers(2, 4))
            op = random_hermitian(d_s * d_a, rng)
            psi = random_state(d_s, rng)
            psi_prime = rng.standard_normal(d_s) + 1j * rng.standard_normal(d_s)
            xi = random_state(d_a, rng)
            direct = np.vdot(
                np.kron(psi.vec, xi.vec), op.mat @ np.kron(psi_prime, xi.vec)
            )
            value = polarization_matrix_element(op, psi, psi_prime, xi)
            assert abs(value - direct) <= 1e-12

    def test_spin_model_deviation_element(self):
        from uncrel.models import meter_out
        from uncrel.spin import PLUS_Z as plus_z, indirect_model

        model = indirect_model(np.pi / 3)
        deviation = meter_out(model) - model.layout.lift_system(model.measured)
        psi_prime = SIGMA_Y.mat @ plus_z.vec
        direct = np.vdot(
            np.kron(plus_z.vec, model.apparatus_state.vec),
            deviation.mat @ np.kron(psi_prime, model.apparatus_state.vec),
        )
        value = polarization_matrix_element(
            deviation, plus_z, psi_prime, model.apparatus_state
        )
        assert abs(value - direct) <= 1e-12

    def test_dim_mismatch(self, rng):
        with pytest.raises(DimensionMismatchError):
            polarization_matrix_element(
                identity(4), PLUS_Z, np.zeros(3), StateVector.basis(2, 0)
            )
