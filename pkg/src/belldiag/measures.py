"""Quantumness measures: coherence, discord, negativity, steering, nonlocality.

Discord follows the measured-mutual-information definition: the maximum is
taken over rank-one projective measurements on qubit b, parametrized by the
spherical angles of the measurement axis. The optimizer is a dense coarse
grid followed by Nelder-Mead refinement from the best three grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import qmath
from .exceptions import DimensionMismatchError, OptimizerFailureError
from .states import DensityMatrix

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

# Values in (-1e-9, 0) produced by round-off are reported as 0.
ROUNDOFF_CLAMP = 1e-9

DISCORD_GRID_THETA = 64
DISCORD_GRID_PHI = 128
DISCORD_REFINE_STARTS = 3
DISCORD_FTOL = 1e-8


@dataclass(frozen=True)
class ResourceReport:
    """The five quantumness measures plus the raw l1 coherence."""

    coherence_l1: float
    nonlocal_coherence: float
    discord: float
    negativity: float
    steering: float
    nonlocality: float

    def as_dict(self) -> dict[str, float]:
        return {
            "coherence_l1": self.coherence_l1,
            "nonlocal_coherence": self.nonlocal_coherence,
            "discord": self.discord,
            "negativity": self.negativity,
            "steering": self.steering,
            "nonlocality": self.nonlocality,
        }


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors and the 3x3 Pauli correlation matrix."""

    a_vec: np.ndarray
    b_vec: np.ndarray
    corr: np.ndarray


def _clamp_roundoff(x: float) -> float:
    return 0.0 if -ROUNDOFF_CLAMP < x < 0.0 else x


def coherence_l1(rho: DensityMatrix) -> float:
    """Sum of moduli of off-diagonal entries in the computational basis."""
    off = np.abs(rho.matrix.copy())
    np.fill_diagonal(off, 0.0)
    return float(np.sum(off))


def nonlocal_coherence(rho: DensityMatrix) -> float:
    """Global l1 coherence minus the sum of the marginal coherences."""
    if rho.n_qubits != 2:
        raise DimensionMismatchError("nonlocal coherence is defined for two qubits")
    local = coherence_l1(rho.reduced((0,))) + coherence_l1(rho.reduced((1,)))
    return coherence_l1(rho) - local


def bloch_decompose(rho: DensityMatrix) -> BlochDecomposition:
    """Pauli expansion coefficients of a two-qubit state."""
    m = rho.matrix
    a_vec = np.array(
        [float(np.trace(m @ np.kron(qmath.PAULIS[j], qmath.SIGMA_0)).real) for j in (1, 2, 3)]
    )
    b_vec = np.array(
        [float(np.trace(m @ np.kron(qmath.SIGMA_0, qmath.PAULIS[k])).real) for k in (1, 2, 3)]
    )
    corr = np.array(
        [
            [
                float(np.trace(m @ np.kron(qmath.PAULIS[j], qmath.PAULIS[k])).real)
                for k in (1, 2, 3)
            ]
            for j in (1, 2, 3)
        ]
    )
    return BlochDecomposition(a_vec=a_vec, b_vec=b_vec, corr=corr)


def correlation_vector(corr: np.ndarray) -> np.ndarray:
    """Singular values of the 3x3 correlation matrix, descending.

    For symmetric matrices these coincide with the absolute eigenvalues;
    singular values keep the steering and nonlocality formulas well defined
    for the non-symmetric matrices tomography can produce.
    """
    return np.linalg.svd(np.asarray(corr, dtype=float), compute_uv=False)


def negativity(rho: DensityMatrix) -> float:
    """Trace norm of the partial transpose minus one, clamped at zero."""
    pt = qmath.partial_transpose(rho.matrix, (2, 2), "b")
    return max(0.0, _clamp_roundoff(qmath.trace_norm(pt) - 1.0))


def steering(rho: DensityMatrix) -> float:
    """Steering degree for three measurements per qubit."""
    c = correlation_vector(bloch_decompose(rho).corr)
    return max(0.0, (float(np.linalg.norm(c)) - 1.0) / (SQRT3 - 1.0))


def nonlocality(rho: DensityMatrix) -> float:
    """Bell-inequality violation degree for two measurements per qubit."""
    c = correlation_vector(bloch_decompose(rho).corr)
    c_min_sq = float(np.min(c) ** 2)
    norm_sq = float(np.dot(c, c))
    return max(0.0, (math.sqrt(max(0.0, norm_sq - c_min_sq)) - 1.0) / (SQRT2 - 1.0))


def _entropy_of(matrix: np.ndarray) -> float:
    return qmath.entropy_bits(np.linalg.eigvalsh(matrix))


def mutual_information(rho: DensityMatrix) -> float:
    """Quantum mutual information S(rho_a) + S(rho_b) - S(rho)."""
    sa = _entropy_of(rho.reduced((0,)).matrix)
    sb = _entropy_of(rho.reduced((1,)).matrix)
    return sa + sb - _entropy_of(rho.matrix)


def _measured_mutual_information(rho: DensityMatrix, thetas, phis) -> np.ndarray:
    """Mutual information after measuring qubit b along each (theta, phi) axis.

    Vectorized over the flat angle arrays. Uses the block reduction of the
    post-measurement state: its spectrum is the union of the spectra of the
    two unnormalized conditional states of qubit a.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    st, ct = np.sin(thetas), np.cos(thetas)
    nx, ny, nz = st * np.cos(phis), st * np.sin(phis), ct

    # P+/- = (I +/- n.sigma)/2, stacked over the grid.
    n_dot_sigma = (
        nx[:, None, None] * qmath.SIGMA_1
        + ny[:, None, None] * qmath.SIGMA_2
        + nz[:, None, None] * qmath.SIGMA_3
    )
    eye = np.broadcast_to(qmath.SIGMA_0, n_dot_sigma.shape)
    projectors = ((eye + n_dot_sigma) / 2, (eye - n_dot_sigma) / 2)

    t = rho.matrix.reshape(2, 2, 2, 2)  # indices: a_row, b_row, a_col, b_col
    sa = _entropy_of(rho.reduced((0,)).matrix)

    conditional = 0.0
    outcome = 0.0
    for proj in projectors:
        # M[g] = Tr_b[rho (I x P)], the unnormalized conditional a-state.
        m = np.einsum("ikjl,glk->gij", t, proj)
        # 2x2 Hermitian eigenvalues in closed form.
        m00 = m[:, 0, 0].real
        m11 = m[:, 1, 1].real
        half_gap = np.sqrt(((m00 - m11) / 2) ** 2 + np.abs(m[:, 0, 1]) ** 2)
        mean = (m00 + m11) / 2
        w = np.clip(np.stack([mean - half_gap, mean + half_gap], axis=1), 0.0, None)
        p = np.sum(w, axis=1)
        conditional = conditional + _h_sum(w)
        outcome = outcome + _h_sum(p[:, None])
    # I(meas) = S(a) + H(outcomes) - S(post-measurement state)
    return sa + outcome - conditional


def _h_sum(w: np.ndarray) -> np.ndarray:
    """Row-wise sum of -x log2 x with the 0 log 0 = 0 convention."""
    safe = np.where(w > qmath.ENTROPY_EIGENVALUE_CUTOFF, w, 1.0)
    return -np.sum(np.where(w > qmath.ENTROPY_EIGENVALUE_CUTOFF, w * np.log2(safe), 0.0), axis=1)


def _h(x: float) -> float:
    return -x * math.log2(x) if x > qmath.ENTROPY_EIGENVALUE_CUTOFF else 0.0


def _measured_mi_scalar(rho: DensityMatrix):
    """Single-point measured-MI objective, precomputed for optimizer loops."""
    t = rho.matrix.reshape(2, 2, 2, 2)
    # tm[(i,j), (l,k)] = rho[ik, jl]; M(P) = tm @ vec(P) gives Tr_b[rho (I x P)].
    tm = np.ascontiguousarray(t.transpose(0, 2, 3, 1).reshape(4, 4))
    rho_a_flat = tm @ np.array([1, 0, 0, 1], dtype=complex)
    sa = _entropy_of(rho_a_flat.reshape(2, 2))

    def objective(theta: float, phi: float) -> float:
        st = math.sin(theta)
        nx, ny, nz = st * math.cos(phi), st * math.sin(phi), math.cos(theta)
        p_vec = np.array(
            [(1 + nz) / 2, (nx - 1j * ny) / 2, (nx + 1j * ny) / 2, (1 - nz) / 2]
        )
        m_plus = tm @ p_vec
        total = 0.0
        for m in (m_plus, rho_a_flat - m_plus):
            m00, m11 = m[0].real, m[3].real
            half_gap = math.sqrt(((m00 - m11) / 2) ** 2 + abs(m[1]) ** 2)
            mean = (m00 + m11) / 2
            lo, hi = max(0.0, mean - half_gap), max(0.0, mean + half_gap)
            total += _h(lo + hi) - _h(lo) - _h(hi)
        return sa + total

    return objective


def discord_oz(
    rho: DensityMatrix,
    n_theta: int = DISCORD_GRID_THETA,
    n_phi: int = DISCORD_GRID_PHI,
    refine: bool = True,
    ftol: float = DISCORD_FTOL,
) -> float:
    """Discord of a two-qubit state under projective measurements on qubit b.

    Mutual information minus the best measured mutual information; the
    maximization runs a coarse (theta, phi) grid and then Nelder-Mead from
    the best ``DISCORD_REFINE_STARTS`` grid points.
    """
    if not np.all(np.isfinite(rho.matrix)):
        raise OptimizerFailureError("state matrix has non-finite entries")
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    try:
        total_mi = mutual_information(rho)
        values = _measured_mutual_information(rho, tt.ravel(), pp.ravel())
    except np.linalg.LinAlgError as exc:
        raise OptimizerFailureError(f"inner eigenvalue computation failed: {exc}") from exc
    if not (np.isfinite(total_mi) and np.all(np.isfinite(values))):
        raise OptimizerFailureError("measured mutual information is not finite")

    best = float(np.max(values))
    if refine:
        objective = _measured_mi_scalar(rho)
        order = np.argsort(values)[::-1][:DISCORD_REFINE_STARTS]
        for idx in order:
            res = optimize.minimize(
                lambda x: -objective(x[0], x[1]),
                x0=np.array([tt.ravel()[idx], pp.ravel()[idx]]),
                method="Nelder-Mead",
                options={"fatol": ftol, "xatol": 1e-6, "maxfev": 400},
            )
            if np.isfinite(res.fun):
                best = max(best, -float(res.fun))

    return max(0.0, _clamp_roundoff(total_mi - best))


def full_report(rho: DensityMatrix) -> ResourceReport:
    """All measures of a two-qubit state in one record."""
    return ResourceReport(
        coherence_l1=coherence_l1(rho),
        nonlocal_coherence=nonlocal_coherence(rho),
        discord=discord_oz(rho),
        negativity=negativity(rho),
        steering=steering(rho),
        nonlocality=nonlocality(rho),
    )
