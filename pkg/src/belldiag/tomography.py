"""Simulated Pauli tomography: sampling, correlation estimation, inversion.

The nine two-qubit measurement settings pair one of X, Y, Z on each side.
Counts are recorded per setting in the outcome order ++, +-, -+, -- (the
signs are the local Pauli eigenvalues). Linear inversion reconstructs
``rho = (1/4) sum_jk c_jk sigma_j x sigma_k`` and projects onto the
physical set when the raw matrix has a meaningfully negative eigenvalue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import qmath
from .exceptions import DimensionMismatchError, OutOfRangeError
from .states import DensityMatrix

BASES = ("X", "Y", "Z")
_BASIS_INDEX = {"X": 1, "Y": 2, "Z": 3}

# Outcome order for the four counts of one setting.
OUTCOMES = ("pp", "pm", "mp", "mm")

PROJECTION_EIGENVALUE_TRIGGER = -1e-8


class MeasurementSetting(NamedTuple):
    """Local measurement bases for the two qubits, each one of X, Y, Z."""

    basis_a: str
    basis_b: str

    @property
    def key(self) -> str:
        return self.basis_a + self.basis_b


SETTINGS = tuple(
    MeasurementSetting(a, b) for a in BASES for b in BASES
)


@dataclass(frozen=True)
class TomographyCounts:
    """Outcome counts for all nine settings at a fixed number of shots."""

    shots_per_setting: int
    counts: Mapping[MeasurementSetting, tuple[int, int, int, int]]

    def __post_init__(self):
        if self.shots_per_setting < 1:
            raise OutOfRangeError("shots_per_setting must be positive")
        missing = set(SETTINGS) - set(self.counts)
        if missing:
            raise OutOfRangeError(
                f"missing settings: {sorted(s.key for s in missing)}"
            )
        for setting, values in self.counts.items():
            if len(values) != 4 or any(v < 0 for v in values):
                raise OutOfRangeError(f"setting {setting.key} needs 4 nonnegative counts")
            if sum(values) != self.shots_per_setting:
                raise OutOfRangeError(
                    f"setting {setting.key} counts sum to {sum(values)}, "
                    f"expected {self.shots_per_setting}"
                )

    def frequencies(self) -> dict[MeasurementSetting, np.ndarray]:
        return {
            s: np.asarray(self.counts[s], dtype=float) / self.shots_per_setting
            for s in SETTINGS
        }


@dataclass(frozen=True)
class CorrelationMatrix:
    """Estimated Pauli correlations c[j][k] = <sigma_j x sigma_k>, c[0][0] = 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (4, 4):
            raise DimensionMismatchError(f"expected a 4x4 array, got {v.shape}")
        if v[0, 0] != 1.0:
            raise OutOfRangeError(f"c[0][0] must be exactly 1, got {v[0, 0]!r}")
        if np.any(np.abs(v) > 1.0 + 1e-12):
            raise OutOfRangeError("correlation entries must lie in [-1, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class ReconstructionResult:
    """Linear-inversion output: physical state, projection flag, raw matrix."""

    state: DensityMatrix
    projected: bool
    raw_matrix: np.ndarray


def _pauli_projectors(basis: str) -> tuple[np.ndarray, np.ndarray]:
    sigma = qmath.PAULIS[_BASIS_INDEX[basis]]
    plus = (qmath.SIGMA_0 + sigma) / 2
    minus = (qmath.SIGMA_0 - sigma) / 2
    return plus, minus


def born_probabilities(rho: DensityMatrix, setting: MeasurementSetting) -> np.ndarray:
    """Joint outcome probabilities (++, +-, -+, --) for one setting."""
    if rho.n_qubits != 2:
        raise DimensionMismatchError("tomography operates on two-qubit states")
    pa = _pauli_projectors(setting.basis_a)
    pb = _pauli_projectors(setting.basis_b)
    probs = np.array(
        [
            float(np.trace(rho.matrix @ np.kron(pa[i], pb[j])).real)
            for i in (0, 1)
            for j in (0, 1)
        ]
    )
    return np.clip(probs, 0.0, None)


def sample_counts(rho: DensityMatrix, shots: int, seed: int) -> TomographyCounts:
    """Multinomial outcome counts for all nine settings.

    Each setting draws from its own counter-based generator keyed by
    (seed, setting index), so results are reproducible and independent of
    evaluation order.
    """
    if shots < 1:
        raise OutOfRangeError("shots must be >= 1")
    counts = {}
    for idx, setting in enumerate(SETTINGS):
        probs = born_probabilities(rho, setting)
        probs = probs / probs.sum()
        key = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, idx])
        rng = np.random.Generator(np.random.Philox(key))
        counts[setting] = tuple(int(c) for c in rng.multinomial(shots, probs))
    return TomographyCounts(shots_per_setting=shots, counts=counts)


def _correlations_from_frequencies(
    freqs: Mapping[MeasurementSetting, np.ndarray]
) -> CorrelationMatrix:
    c = np.zeros((4, 4), dtype=float)
    c[0, 0] = 1.0
    marg_a = {b: [] for b in BASES}
    marg_b = {b: [] for b in BASES}
    for setting in SETTINGS:
        pp, pm, mp, mm = freqs[setting]
        j = _BASIS_INDEX[setting.basis_a]
        k = _BASIS_INDEX[setting.basis_b]
        c[j, k] = pp + mm - pm - mp
        marg_a[setting.basis_a].append((pp + pm) - (mp + mm))
        marg_b[setting.basis_b].append((pp + mp) - (pm + mm))
    # The single-qubit averages are measured by three compatible settings
    # each; use their mean to reduce variance.
    for basis in BASES:
        c[_BASIS_INDEX[basis], 0] = float(np.mean(marg_a[basis]))
        c[0, _BASIS_INDEX[basis]] = float(np.mean(marg_b[basis]))
    return CorrelationMatrix(np.clip(c, -1.0, 1.0))


def estimate_correlations(counts: TomographyCounts) -> CorrelationMatrix:
    """Empirical correlation matrix from measured counts."""
    return _correlations_from_frequencies(counts.frequencies())


def exact_correlations(rho: DensityMatrix) -> CorrelationMatrix:
    """Infinite-shot correlation matrix, via exact Born probabilities."""
    freqs = {s: born_probabilities(rho, s) for s in SETTINGS}
    return _correlations_from_frequencies(freqs)


def reconstruct(corr: CorrelationMatrix) -> ReconstructionResult:
    """Linear inversion, with spectral projection if the result is unphysical.

    Projection clips negative eigenvalues to zero and renormalizes the
    trace; the unmodified linear-inversion matrix is kept for inspection.
    """
    raw = np.zeros((4, 4), dtype=complex)
    for j in range(4):
        for k in range(4):
            raw += corr.values[j, k] * np.kron(qmath.PAULIS[j], qmath.PAULIS[k])
    raw /= 4.0

    w, v = np.linalg.eigh(raw)
    if w[0] < PROJECTION_EIGENVALUE_TRIGGER:
        w = np.clip(w, 0.0, None)
        w = w / np.sum(w)
        physical = (v * w) @ v.conj().T
        return ReconstructionResult(
            state=DensityMatrix(physical, validate=False),
            projected=True,
            raw_matrix=raw,
        )
    return ReconstructionResult(
        state=DensityMatrix(raw, validate=False), projected=False, raw_matrix=raw
    )


def tomograph(rho: DensityMatrix, shots: int, seed: int = 0) -> DensityMatrix:
    """Full pipeline: sample counts, estimate correlations, reconstruct.

    ``shots=0`` is the exact mode: Born probabilities are used directly
    with no sampling, so the round trip is exact up to round-off.
    """
    if shots == 0:
        corr = exact_correlations(rho)
    else:
        corr = estimate_correlations(sample_counts(rho, shots, seed))
    return reconstruct(corr).state


def counts_to_json(counts: TomographyCounts) -> str:
    """Serialize counts as ``{"shots": n, "settings": {"XX": {...}, ...}}``."""
    payload = {
        "shots": counts.shots_per_setting,
        "settings": {
            s.key: dict(zip(OUTCOMES, (int(v) for v in counts.counts[s])))
            for s in SETTINGS
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def counts_from_json(text: str) -> TomographyCounts:
    """Parse the counts JSON format, validating its invariants."""
    try:
        payload = json.loads(text)
        shots = int(payload["shots"])
        settings = payload["settings"]
        counts = {}
        for setting in SETTINGS:
            entry = settings[setting.key]
            counts[setting] = tuple(int(entry[o]) for o in OUTCOMES)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise OutOfRangeError(f"malformed counts JSON: {exc}") from exc
    return TomographyCounts(shots_per_setting=shots, counts=counts)
