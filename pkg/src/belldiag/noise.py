"""Kraus channels and the composite amplitude plus phase damping model.

The composite channel is zero temperature: amplitude decay toward |0> with
rate ``a`` combined with pure dephasing with rate ``p``. Its three Kraus
operators satisfy the completeness relation algebraically, since
``p(1-a) + a + (1-p)(1-a) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qmath
from .exceptions import DimensionMismatchError, OutOfRangeError
from .measures import ResourceReport, full_report
from .states import DensityMatrix, werner

COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise OutOfRangeError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise DimensionMismatchError("all Kraus operators must share one square shape")
        total = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > COMPLETENESS_ATOL:
            raise OutOfRangeError(f"channel is not trace preserving: |sum K†K - I| = {defect:.3e}")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def composite_damping(a: float, p: float) -> KrausChannel:
    """Single-qubit composition of amplitude damping ``a`` and phase damping ``p``."""
    if not 0.0 <= a <= 1.0 or not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"damping rates must be in [0, 1], got a={a}, p={p}")
    k0 = np.array([[0, 0], [0, np.sqrt(p * (1 - a))]], dtype=complex)
    k1 = np.array([[0, np.sqrt(a)], [0, 0]], dtype=complex)
    k2 = np.array([[1, 0], [0, np.sqrt((1 - p) * (1 - a))]], dtype=complex)
    return KrausChannel(operators=(k0, k1, k2))


def apply_channel(channel: KrausChannel, rho: DensityMatrix, qubit: int = 0) -> DensityMatrix:
    """Apply a single-qubit channel to one qubit of a multi-qubit state."""
    if channel.dim != 2:
        raise DimensionMismatchError("apply_channel embeds single-qubit channels only")
    if not 0 <= qubit < rho.n_qubits:
        raise DimensionMismatchError(f"qubit {qubit} out of range for {rho.n_qubits} qubits")
    before = np.eye(2**qubit, dtype=complex)
    after = np.eye(2 ** (rho.n_qubits - qubit - 1), dtype=complex)
    out = np.zeros_like(rho.matrix)
    for k in channel.operators:
        full = qmath.kron_all([before, k, after])
        out += full @ rho.matrix @ full.conj().T
    return DensityMatrix(out, validate=False)


def decohered_werner_sweep(
    a: float, p: float, w_grid: Sequence[float], qubit: int = 0
) -> list[tuple[float, ResourceReport]]:
    """Measures of Werner states after damping one qubit, for each weight."""
    if len(w_grid) == 0:
        raise OutOfRangeError("w_grid must be nonempty")
    channel = composite_damping(a, p)
    out = []
    for w in w_grid:
        decohered = apply_channel(channel, werner(float(w)), qubit)
        out.append((float(w), full_report(decohered)))
    return out
