import numpy as np
import pytest
from helpers import ginibre_state, random_spec

import belldiag as bd
from belldiag import qmath
from belldiag.exceptions import (
    DimensionMismatchError,
    InvalidProbabilitiesError,
    NotAStateError,
    OutOfRangeError,
    UnphysicalCorrelationsError,
)
from belldiag.states import (
    bell_state_vector,
    density_matrix_from_json,
    density_matrix_to_json,
)


class TestBellStates:
    def test_beta_00(self):
        expected = np.zeros(4, dtype=complex)
        expected[[0, 3]] = 1 / np.sqrt(2)
        np.testing.assert_allclose(bell_state_vector(0, 0), expected)

    def test_beta_11(self):
        expected = np.zeros(4, dtype=complex)
        expected[1] = 1 / np.sqrt(2)
        expected[2] = -1 / np.sqrt(2)
        np.testing.assert_allclose(bell_state_vector(1, 1), expected)

    @pytest.mark.parametrize("j,k", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_maximally_mixed_marginals(self, j, k):
        rho = bd.bell_state(j, k)
        for qubit in (0, 1):
            np.testing.assert_allclose(
                rho.reduced((qubit,)).matrix, np.eye(2) / 2, atol=1e-12
            )

    def test_orthonormal(self):
        basis = [bell_state_vector(j, k) for j in (0, 1) for k in (0, 1)]
        gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)


class TestBdsSpec:
    def test_pure_bell(self):
        rho = bd.bds_from_spec(bd.BdsSpec(1, 0, 0, 0))
        np.testing.assert_allclose(rho.matrix, bd.bell_state(0, 0).matrix, atol=1e-12)

    def test_uniform_is_maximally_mixed(self):
        rho = bd.bds_from_spec(bd.BdsSpec(0.25, 0.25, 0.25, 0.25))
        np.testing.assert_allclose(rho.matrix, np.eye(4) / 4, atol=1e-12)

    def test_werner_equality(self):
        for w in (0.0, 0.3, 0.5, 1.0):
            np.testing.assert_allclose(
                bd.bds_from_spec(bd.werner_spec(w)).matrix, bd.werner(w).matrix, atol=1e-12
            )

    def test_eigenvalues_are_probabilities(self, rng):
        for _ in range(50):
            spec = random_spec(rng)
            w = np.linalg.eigvalsh(bd.bds_from_spec(spec).matrix)
            np.testing.assert_allclose(np.sort(w), np.sort(spec.probabilities), atol=1e-12)

    def test_invalid_probabilities(self):
        with pytest.raises(InvalidProbabilitiesError):
            bd.BdsSpec(0.5, 0.5, 0.5, -0.5)
        with pytest.raises(InvalidProbabilitiesError):
            bd.BdsSpec(0.3, 0.3, 0.3, 0.3)


class TestCorrelations:
    def test_zero_triple_is_uniform(self):
        spec = bd.spec_from_correlations(bd.CorrelationTriple(0, 0, 0))
        np.testing.assert_allclose(spec.probabilities, [0.25] * 4, atol=1e-14)

    def test_werner_triple(self):
        for w in (0.2, 0.7):
            spec = bd.spec_from_correlations(bd.CorrelationTriple(-w, -w, -w))
            np.testing.assert_allclose(spec.probabilities, bd.werner_spec(w).probabilities, atol=1e-14)

    def test_pure_triple(self):
        spec = bd.spec_from_correlations(bd.CorrelationTriple(1, -1, 1))
        np.testing.assert_allclose(spec.probabilities, [1, 0, 0, 0], atol=1e-14)

    def test_unphysical_triple(self):
        with pytest.raises(UnphysicalCorrelationsError):
            bd.CorrelationTriple(1, 1, 1)

    def test_round_trip(self, rng):
        for _ in range(50):
            spec = random_spec(rng)
            back = bd.spec_from_correlations(bd.correlations_from_spec(spec))
            np.testing.assert_allclose(back.probabilities, spec.probabilities, atol=1e-12)

    def test_matches_pauli_expectations(self, rng):
        for _ in range(20):
            spec = random_spec(rng)
            rho = bd.bds_from_spec(spec).matrix
            c = bd.correlations_from_spec(spec)
            for value, sigma in zip(c.as_tuple(), qmath.PAULIS[1:]):
                direct = float(np.trace(rho @ np.kron(sigma, sigma)).real)
                assert value == pytest.approx(direct, abs=1e-12)


class TestWerner:
    def test_endpoints(self):
        np.testing.assert_allclose(bd.werner(0.0).matrix, np.eye(4) / 4, atol=1e-14)
        np.testing.assert_allclose(bd.werner(1.0).matrix, bd.bell_state(1, 1).matrix, atol=1e-14)

    def test_half_correlations(self):
        c = bd.correlations_from_spec(bd.werner_spec(0.5))
        np.testing.assert_allclose(c.as_tuple(), (-0.5, -0.5, -0.5), atol=1e-14)

    def test_rejects_out_of_range(self):
        for w in (-0.1, 1.1):
            with pytest.raises(OutOfRangeError):
                bd.werner(w)

    def test_marginals_maximally_mixed(self):
        for w in np.linspace(0, 1, 11):
            rho = bd.werner(float(w))
            for qubit in (0, 1):
                np.testing.assert_allclose(
                    rho.reduced((qubit,)).matrix, np.eye(2) / 2, atol=1e-12
                )


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NotAStateError, match="Hermitian"):
            bd.DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))

    def test_rejects_wrong_trace(self):
        with pytest.raises(NotAStateError, match="trace"):
            bd.DensityMatrix(np.eye(2, dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotAStateError, match="eigenvalue"):
            bd.DensityMatrix(np.diag([1.2, -0.2]).astype(complex))

    def test_immutable(self):
        rho = bd.werner(0.5)
        with pytest.raises(AttributeError):
            rho.n_qubits = 3
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 2.0


class TestFidelity:
    def test_self(self, rng):
        rho = ginibre_state(rng)
        assert bd.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure(self):
        zero = bd.DensityMatrix(np.diag([1.0, 0.0]).astype(complex), validate=False)
        one = bd.DensityMatrix(np.diag([0.0, 1.0]).astype(complex), validate=False)
        assert bd.fidelity(zero, one) == pytest.approx(0.0, abs=1e-12)

    def test_mixed_versus_bell(self):
        mixed = bd.bds_from_spec(bd.BdsSpec(0.25, 0.25, 0.25, 0.25))
        assert bd.fidelity(mixed, bd.bell_state(1, 1)) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric(self, rng):
        for _ in range(10):
            a, b = ginibre_state(rng), ginibre_state(rng)
            assert bd.fidelity(a, b) == pytest.approx(bd.fidelity(b, a), abs=1e-8)

    def test_one_only_for_equal_states(self, rng):
        for _ in range(10):
            a, b = ginibre_state(rng), ginibre_state(rng)
            assert bd.fidelity(a, b) < 1.0 - 1e-6

    def test_dimension_mismatch(self):
        one_qubit = bd.DensityMatrix(np.eye(2, dtype=complex) / 2)
        with pytest.raises(DimensionMismatchError):
            bd.fidelity(one_qubit, bd.werner(0.5))


class TestJsonFormat:
    def test_round_trip(self, rng):
        rho = ginibre_state(rng)
        back = density_matrix_from_json(density_matrix_to_json(rho))
        np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-15)
        assert back.n_qubits == rho.n_qubits

    def test_malformed(self):
        with pytest.raises(NotAStateError):
            density_matrix_from_json("{not json")
        with pytest.raises(NotAStateError):
            density_matrix_from_json('{"n_qubits": 1, "re": [[1, 0]], "im": [[0, 0]]}')
