"""Dense complex linear algebra primitives for small multi-qubit operators.

All functions operate on square ``numpy`` arrays of ``complex`` dtype and are
pure: inputs are never mutated. Dimensions in this package never exceed 16,
so everything is done densely with LAPACK-backed eigendecompositions.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NegativeSpectrumError,
    NotAStateError,
    NotHermitianError,
)

# Tolerances sized to absorb round-off from 16-dimensional simulations.
HERMITICITY_ATOL = 1e-9
EIGENVALUE_CLIP_FLOOR = -1e-9
ENTROPY_EIGENVALUE_CUTOFF = 1e-12

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


class HermitianEigenResult(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; the columns of ``eigenvectors``
    are the matching orthonormal eigenvectors, so
    ``V @ diag(w) @ V.conj().T`` reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry-wise modulus of ``m - m†``."""
    a = _as_square(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def require_hermitian(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    a = _as_square(m)
    defect = hermiticity_defect(a)
    if defect > atol:
        raise NotHermitianError(f"matrix is not Hermitian: max |m - m†| = {defect:.3e}")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product of two square matrices."""
    return np.kron(_as_square(a), _as_square(b))


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Tensor product of a sequence of square matrices, left to right."""
    out = np.array([[1.0 + 0j]])
    for f in factors:
        out = np.kron(out, _as_square(f))
    return out


def hermitian_eigen(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    a = require_hermitian(m, atol)
    w, v = np.linalg.eigh(a)
    return HermitianEigenResult(eigenvalues=w, eigenvectors=v)


def trace_norm(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> float:
    """Trace norm of a Hermitian matrix: sum of absolute eigenvalues."""
    a = require_hermitian(m, atol)
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def matrix_sqrt_psd(
    m: np.ndarray,
    atol: float = HERMITICITY_ATOL,
    clip_floor: float = EIGENVALUE_CLIP_FLOOR,
) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[clip_floor, 0)`` are treated as round-off and clipped
    to zero; anything below ``clip_floor`` raises ``NegativeSpectrumError``.
    """
    w, v = hermitian_eigen(m, atol)
    if w[0] < clip_floor:
        raise NegativeSpectrumError(f"matrix is not PSD: min eigenvalue = {w[0]:.3e}")
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s) @ v.conj().T


def partial_trace(
    m: np.ndarray, dims: Sequence[int], keep: Iterable[int]
) -> np.ndarray:
    """Partial trace over the subsystems *not* listed in ``keep``.

    ``dims`` gives the dimension of each tensor factor, leftmost factor
    first; kept subsystems preserve their original relative order.
    """
    a = _as_square(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != a.shape[0]:
        raise DimensionMismatchError(
            f"product of dims {dims} does not match matrix dim {a.shape[0]}"
        )
    keep_set = set(int(k) for k in keep)
    if not keep_set or not keep_set.issubset(range(len(dims))):
        raise DimensionMismatchError(f"keep={sorted(keep_set)} is not a valid subsystem subset")

    n = len(dims)
    t = a.reshape(dims + dims)
    traced = 0
    for idx in sorted(set(range(n)) - keep_set, reverse=True):
        t = np.trace(t, axis1=idx, axis2=idx + (n - traced))
        traced += 1
    d_keep = int(np.prod([dims[i] for i in sorted(keep_set)]))
    return t.reshape(d_keep, d_keep)


def partial_transpose(m: np.ndarray, dims: tuple[int, int], subsystem: str = "b") -> np.ndarray:
    """Partial transpose of a bipartite operator over subsystem ``"a"`` or ``"b"``."""
    a = _as_square(m)
    da, db = int(dims[0]), int(dims[1])
    if da * db != a.shape[0]:
        raise DimensionMismatchError(f"dims {dims} do not match matrix dim {a.shape[0]}")
    if subsystem not in ("a", "b"):
        raise DimensionMismatchError(f"subsystem must be 'a' or 'b', got {subsystem!r}")
    t = a.reshape(da, db, da, db)
    if subsystem == "a":
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def vn_entropy(rho: np.ndarray, atol: float = HERMITICITY_ATOL) -> float:
    """Von Neumann entropy in bits of a density matrix.

    Eigenvalues below ``ENTROPY_EIGENVALUE_CUTOFF`` are skipped (0·log 0 = 0).
    """
    a = _as_square(rho)
    defect = hermiticity_defect(a)
    if defect > atol:
        raise NotAStateError(f"not Hermitian: max |m - m†| = {defect:.3e}")
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > atol:
        raise NotAStateError(f"trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(a)
    if w[0] < EIGENVALUE_CLIP_FLOOR:
        raise NotAStateError(f"negative eigenvalue {w[0]:.3e}")
    w = w[w > ENTROPY_EIGENVALUE_CUTOFF]
    return float(-np.sum(w * np.log2(w)))


def entropy_bits(eigenvalues: np.ndarray) -> float:
    """Shannon entropy in bits of a spectrum, clipping round-off negatives."""
    w = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    w = w[w > ENTROPY_EIGENVALUE_CUTOFF]
    return float(-np.sum(w * np.log2(w)))
