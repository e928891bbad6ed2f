import math

import numpy as np
import pytest
from helpers import ginibre_state
from oracles import apply_channel_superoperator

import belldiag as bd
from belldiag.exceptions import DimensionMismatchError, OutOfRangeError
from belldiag.noise import COMPLETENESS_ATOL, KrausChannel

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


def single_qubit(diag0, diag1, off):
    m = np.array([[diag0, off], [np.conj(off), diag1]], dtype=complex)
    return bd.DensityMatrix(m, validate=False)


class TestCompositeDamping:
    def test_three_operators_complete(self):
        for a in (0.0, 0.3, 0.7, 1.0):
            for p in (0.0, 0.3, 1.0):
                channel = bd.composite_damping(a, p)
                assert len(channel.operators) == 3
                total = sum(k.conj().T @ k for k in channel.operators)
                assert np.max(np.abs(total - np.eye(2))) < COMPLETENESS_ATOL

    def test_zero_rates_identity_action(self, rng):
        channel = bd.composite_damping(0.0, 0.0)
        rho = ginibre_state(rng, rank=2)
        out = bd.apply_channel(channel, rho, qubit=0)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_full_amplitude_decay(self):
        for p in (0.0, 0.5, 1.0):
            channel = bd.composite_damping(1.0, p)
            rho = single_qubit(0.2, 0.8, 0.1 + 0.2j)
            out = bd.apply_channel(channel, rho, qubit=0)
            np.testing.assert_allclose(out.matrix, np.diag([1.0, 0.0]), atol=1e-12)

    def test_off_diagonal_scale(self):
        channel = bd.composite_damping(0.3, 0.3)
        plus = single_qubit(0.5, 0.5, 0.5)
        out = bd.apply_channel(channel, plus, qubit=0)
        assert out.matrix[0, 1].real == pytest.approx(0.5 * 0.7, abs=1e-12)

    def test_out_of_range(self):
        for a, p in ((-0.1, 0.5), (0.5, 1.2)):
            with pytest.raises(OutOfRangeError):
                bd.composite_damping(a, p)

    def test_incomplete_channel_rejected(self):
        with pytest.raises(OutOfRangeError):
            KrausChannel(operators=(np.eye(2, dtype=complex) * 0.5,))


class TestApplyChannel:
    def test_werner_correlation_scaling(self):
        channel = bd.composite_damping(0.3, 0.3)
        for w in (0.25, 0.5, 1.0):
            out = bd.apply_channel(channel, bd.werner(w), qubit=0)
            dec = bd.bloch_decompose(out)
            np.testing.assert_allclose(dec.corr, -0.7 * w * np.eye(3), atol=1e-12)

    def test_quarter_noise_keeps_nonlocality(self):
        out = bd.apply_channel(bd.composite_damping(0.25, 0.25), bd.werner(1.0), qubit=0)
        expected = (0.75 * SQRT2 - 1) / (SQRT2 - 1)
        assert bd.nonlocality(out) == pytest.approx(expected, abs=1e-12)

    def test_preserves_state_invariants(self, rng):
        channel = bd.composite_damping(0.4, 0.2)
        for _ in range(20):
            rho = ginibre_state(rng)
            out = bd.apply_channel(channel, rho, qubit=0)
            assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-10)
            assert np.max(np.abs(out.matrix - out.matrix.conj().T)) < 1e-12
            assert np.linalg.eigvalsh(out.matrix)[0] > -1e-10

    def test_matches_superoperator(self, rng):
        channel = bd.composite_damping(0.35, 0.15)
        for qubit in (0, 1):
            for _ in range(10):
                rho = ginibre_state(rng)
                kraus_path = bd.apply_channel(channel, rho, qubit=qubit).matrix
                superop_path = apply_channel_superoperator(
                    channel.operators, rho.matrix, qubit, 2
                )
                assert np.max(np.abs(kraus_path - superop_path)) < 1e-10

    def test_dimension_checks(self):
        channel = bd.composite_damping(0.1, 0.1)
        with pytest.raises(DimensionMismatchError):
            bd.apply_channel(channel, bd.werner(0.5), qubit=2)


class TestDecoheredSweep:
    def test_zero_noise_reproduces_theory(self):
        grid = np.linspace(0, 1, 5)
        for (w, noisy), clean in zip(
            bd.decohered_werner_sweep(0.0, 0.0, grid),
            (bd.full_report(bd.werner(float(w))) for w in grid),
        ):
            for a, b in zip(noisy.as_dict().values(), clean.as_dict().values()):
                assert a == pytest.approx(b, abs=1e-9)

    def test_thirty_percent_noise_kills_nonlocality(self):
        grid = np.linspace(0, 1, 11)
        results = bd.decohered_werner_sweep(0.3, 0.3, grid)
        assert all(report.nonlocality == 0.0 for _, report in results)
        s_final = results[-1][1].steering
        assert s_final == pytest.approx((0.7 * SQRT3 - 1) / (SQRT3 - 1), abs=1e-9)

    def test_monotone_under_noise(self):
        grid = np.linspace(0, 1, 6)
        noisy = bd.decohered_werner_sweep(0.3, 0.3, grid)
        for (w, nrep) in noisy:
            crep = bd.full_report(bd.werner(w))
            for key in ("nonlocal_coherence", "discord", "negativity", "steering", "nonlocality"):
                assert nrep.as_dict()[key] <= crep.as_dict()[key] + 1e-9

    def test_empty_grid_rejected(self):
        with pytest.raises(OutOfRangeError):
            bd.decohered_werner_sweep(0.1, 0.1, [])

    def test_target_qubit_flag(self):
        out_b = bd.apply_channel(bd.composite_damping(0.3, 0.3), bd.werner(0.6), qubit=1)
        dec = bd.bloch_decompose(out_b)
        # damping the second qubit scales correlations identically but moves
        # the local Bloch shift to b instead of a
        np.testing.assert_allclose(dec.corr, -0.7 * 0.6 * np.eye(3), atol=1e-12)
        assert dec.b_vec[2] == pytest.approx(0.3, abs=1e-12)
        assert abs(dec.a_vec[2]) < 1e-12
