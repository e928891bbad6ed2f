"""Gate set, preparation circuits, state-vector simulation, and QASM export.

Two circuit builders are provided. ``build_bds_circuit`` emits the six-gate
layout with both superposition rotations unconditional; it covers exactly the
Bell-diagonal states whose probability table factorizes as a product of its
(j, k) marginals. ``purification_circuit`` generalizes the second rotation to
be conditioned on qubit ``a`` (four native gates), which prepares *any*
Bell-diagonal state exactly; it degenerates to the six-gate layout whenever
the conditioning is trivial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from . import qmath
from .exceptions import (
    DimensionMismatchError,
    InvalidLayoutError,
    NotNormalizedError,
    OutOfRangeError,
)
from .states import BdsSpec, DensityMatrix

GATE_KINDS = ("r", "h", "sdg", "u3", "cx")

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG_MATRIX = np.array([[1, 0], [0, -1j]], dtype=complex)
_CX_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

# 4-qubit register of the preparation circuits.
PREP_QUBIT_NAMES = ("a", "b", "c", "d")
# Hardware encoding used for QASM export: a->Q1, b->Q3, c->Q2, d->Q4.
DEFAULT_PREP_LAYOUT = {0: 1, 1: 3, 2: 2, 3: 4}


class AnglePair(NamedTuple):
    """Rotation angles (theta, alpha) steering the two superposition gates."""

    theta: float
    alpha: float


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, real parameters, target qubit indices.

    For ``cx`` the control is listed first. ``r`` carries one angle x and
    acts as the real rotation [[cos x, -sin x], [sin x, cos x]]; ``u3``
    carries (theta, phi, lam).
    """

    kind: str
    params: tuple[float, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise OutOfRangeError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        n_params = {"r": 1, "h": 0, "sdg": 0, "u3": 3, "cx": 0}[self.kind]
        if len(self.params) != n_params:
            raise OutOfRangeError(f"{self.kind} takes {n_params} parameter(s)")
        n_targets = 2 if self.kind == "cx" else 1
        if len(self.targets) != n_targets or len(set(self.targets)) != n_targets:
            raise OutOfRangeError(f"{self.kind} takes {n_targets} distinct target(s)")

    def matrix(self) -> np.ndarray:
        """Unitary matrix of the gate (4x4 for cx, ordered control then target)."""
        if self.kind == "r":
            x = self.params[0]
            return np.array(
                [[math.cos(x), -math.sin(x)], [math.sin(x), math.cos(x)]], dtype=complex
            )
        if self.kind == "h":
            return _H_MATRIX.copy()
        if self.kind == "sdg":
            return _SDG_MATRIX.copy()
        if self.kind == "u3":
            theta, phi, lam = self.params
            c, s = math.cos(theta / 2), math.sin(theta / 2)
            return np.array(
                [
                    [c, -np.exp(1j * lam) * s],
                    [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c],
                ],
                dtype=complex,
            )
        return _CX_MATRIX.copy()


@dataclass(frozen=True)
class Circuit:
    """An ordered list of gates on a register of ``n_qubits`` qubits."""

    n_qubits: int
    gates: tuple[Gate, ...]
    qubit_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.qubit_names:
            object.__setattr__(
                self, "qubit_names", tuple(f"q{i}" for i in range(self.n_qubits))
            )
        if len(self.qubit_names) != self.n_qubits:
            raise DimensionMismatchError("qubit_names length must equal n_qubits")
        for g in self.gates:
            if any(t >= self.n_qubits for t in g.targets):
                raise DimensionMismatchError(
                    f"gate {g.kind} targets {g.targets} exceed register size {self.n_qubits}"
                )


def angles_from_spec(spec: BdsSpec) -> AnglePair:
    """Rotation angles 2*arccos(sqrt(p00+p01)) and 2*arccos(sqrt(p00+p10))."""
    p = spec.probabilities
    # Guard round-off: the marginals may exceed 1 by ~1e-16.
    theta = 2.0 * math.acos(math.sqrt(min(1.0, max(0.0, p[0] + p[1]))))
    alpha = 2.0 * math.acos(math.sqrt(min(1.0, max(0.0, p[0] + p[2]))))
    return AnglePair(theta=theta, alpha=alpha)


def probs_from_angles(angles: AnglePair) -> BdsSpec:
    """Product-form Bell probabilities generated by rotation angles (theta, alpha)."""
    ct2 = math.cos(angles.theta / 2) ** 2
    ca2 = math.cos(angles.alpha / 2) ** 2
    p = np.array(
        [ct2 * ca2, ct2 * (1 - ca2), (1 - ct2) * ca2, (1 - ct2) * (1 - ca2)]
    )
    p = np.clip(p, 0.0, None)
    return BdsSpec(*(p / np.sum(p)))


def build_bds_circuit(angles: AnglePair) -> Circuit:
    """Six-gate preparation circuit on qubits a, b, c, d = 0..3.

    Sequence: R(theta/2) on a, R(alpha/2) on b, CNOT a->c, CNOT b->d,
    H on d, CNOT d->c.
    """
    gates = (
        Gate("r", (angles.theta / 2,), (0,)),
        Gate("r", (angles.alpha / 2,), (1,)),
        Gate("cx", (), (0, 2)),
        Gate("cx", (), (1, 3)),
        Gate("h", (), (3,)),
        Gate("cx", (), (3, 2)),
    )
    return Circuit(n_qubits=4, gates=gates, qubit_names=PREP_QUBIT_NAMES)


def purification_circuit(spec: BdsSpec, atol: float = 1e-14) -> Circuit:
    """Circuit preparing the exact four-qubit purification of any spec.

    Qubit a is rotated by half the angle whose cosine squared is the
    j-marginal p00+p01; qubit b gets the rotation matching the conditional
    distribution of k given j, implemented with a CNOT-conjugated rotation
    pair when the two conditionals differ. The copy CNOTs then imprint
    (j, k) on qubits c, d, and the closing H/CNOT pair rotates c, d into
    the Bell basis. The partial trace over a, b leaves the target state.
    """
    p = spec.probabilities
    pj0 = p[0] + p[1]
    theta = 2.0 * math.acos(math.sqrt(min(1.0, max(0.0, pj0))))

    # gamma_j: half-angle of the b rotation conditioned on a = j.
    def conditional_angle(num: float, den: float, fallback: float) -> float:
        if den <= atol:
            return fallback
        return math.acos(math.sqrt(min(1.0, max(0.0, num / den))))

    alpha = angles_from_spec(spec).alpha
    gamma0 = conditional_angle(p[0], p[0] + p[1], alpha / 2)
    gamma1 = conditional_angle(p[2], p[2] + p[3], alpha / 2)
    if p[0] + p[1] <= atol:
        gamma0 = gamma1
    if p[2] + p[3] <= atol:
        gamma1 = gamma0

    gates: list[Gate] = [Gate("r", (theta / 2,), (0,))]
    half_diff = (gamma1 - gamma0) / 2
    if abs(half_diff) <= atol:
        gates.append(Gate("r", (gamma0,), (1,)))
    else:
        gates.append(Gate("r", ((gamma0 + gamma1) / 2,), (1,)))
        gates.append(Gate("cx", (), (0, 1)))
        gates.append(Gate("r", (-half_diff,), (1,)))
        gates.append(Gate("cx", (), (0, 1)))
    gates.append(Gate("cx", (), (0, 2)))
    gates.append(Gate("cx", (), (1, 3)))
    gates.append(Gate("h", (), (2,)))
    gates.append(Gate("cx", (), (2, 3)))
    return Circuit(n_qubits=4, gates=tuple(gates), qubit_names=PREP_QUBIT_NAMES)


def _apply_single(psi: np.ndarray, u: np.ndarray, target: int, n: int) -> np.ndarray:
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, target, 0)
    shape = t.shape
    t = (u @ t.reshape(2, -1)).reshape(shape)
    return np.moveaxis(t, 0, target).reshape(-1)


def _apply_two(psi: np.ndarray, u: np.ndarray, q0: int, q1: int, n: int) -> np.ndarray:
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, (q0, q1), (0, 1))
    shape = t.shape
    t = (u @ t.reshape(4, -1)).reshape(shape)
    return np.moveaxis(t, (0, 1), (q0, q1)).reshape(-1)


def simulate_statevector(circ: Circuit, state: int | np.ndarray = 0) -> np.ndarray:
    """Apply the circuit's gates in order to a basis state or amplitude vector."""
    dim = 2**circ.n_qubits
    if isinstance(state, (int, np.integer)):
        if not 0 <= int(state) < dim:
            raise DimensionMismatchError(f"basis index {state} out of range for dim {dim}")
        psi = np.zeros(dim, dtype=complex)
        psi[int(state)] = 1.0
    else:
        psi = np.asarray(state, dtype=complex).reshape(-1)
        if psi.shape[0] != dim:
            raise DimensionMismatchError(
                f"input dimension {psi.shape[0]} does not match 2^{circ.n_qubits}"
            )
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalizedError(f"input norm is {norm!r}, expected 1")
        psi = psi.copy()
    for g in circ.gates:
        if g.kind == "cx":
            psi = _apply_two(psi, g.matrix(), g.targets[0], g.targets[1], circ.n_qubits)
        else:
            psi = _apply_single(psi, g.matrix(), g.targets[0], circ.n_qubits)
    return psi


def prepared_state(spec: BdsSpec) -> DensityMatrix:
    """Simulate the preparation circuit and trace out the ancilla pair a, b."""
    circ = purification_circuit(spec)
    psi = simulate_statevector(circ)
    rho_full = np.outer(psi, psi.conj())
    rho_cd = qmath.partial_trace(rho_full, [2, 2, 2, 2], keep=(2, 3))
    return DensityMatrix(rho_cd, validate=False)


_PI_FRACTIONS = [1, 2, 3, 4, 6, 8]


def _format_angle(x: float) -> str:
    """Format an angle for QASM, using pi fractions when exact."""
    if abs(x) < 1e-12:
        return "0"
    for den in _PI_FRACTIONS:
        num = x * den / math.pi
        if abs(num - round(num)) < 1e-12 and round(num) != 0:
            num = int(round(num))
            sign = "-" if num < 0 else ""
            num = abs(num)
            head = "pi" if num == 1 else f"{num}*pi"
            return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"
    return repr(float(x))


_MEASUREMENT_PREFIX = {"Z": (), "X": ("h",), "Y": ("sdg", "h")}


def to_qasm(
    circ: Circuit,
    layout: Mapping[int | str, int] | None = None,
    measure_basis: Mapping[int | str, str] | None = None,
) -> str:
    """Emit OpenQASM 2.0 for the circuit.

    ``layout`` maps logical qubits (index or register name) to physical
    indices; the 4-qubit preparation circuits default to the hardware
    encoding a->1, b->3, c->2, d->4, other circuits to the identity.
    ``measure_basis`` maps logical qubits to "X", "Y" or "Z"; X-basis
    measurements are prefixed by h, Y-basis by sdg then h.
    """

    def logical_index(key: int | str) -> int:
        if isinstance(key, str):
            if key not in circ.qubit_names:
                raise InvalidLayoutError(f"unknown qubit name {key!r}")
            return circ.qubit_names.index(key)
        return int(key)

    if layout is None:
        if circ.n_qubits == 4 and circ.qubit_names == PREP_QUBIT_NAMES:
            phys = dict(DEFAULT_PREP_LAYOUT)
        else:
            phys = {i: i for i in range(circ.n_qubits)}
    else:
        phys = {logical_index(k): int(v) for k, v in layout.items()}
    missing = set(range(circ.n_qubits)) - set(phys)
    if missing:
        raise InvalidLayoutError(f"layout is missing logical qubits {sorted(missing)}")
    if len(set(phys.values())) != len(phys) or any(v < 0 for v in phys.values()):
        raise InvalidLayoutError(f"layout is not injective into physical indices: {phys}")

    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    lines.append(f"qreg q[{max(phys.values()) + 1}];")

    measured: list[tuple[int, str]] = []
    if measure_basis:
        for key, basis in measure_basis.items():
            b = basis.upper()
            if b not in _MEASUREMENT_PREFIX:
                raise InvalidLayoutError(f"unknown measurement basis {basis!r}")
            measured.append((logical_index(key), b))
        measured.sort()
        lines.append(f"creg c[{len(measured)}];")

    for g in circ.gates:
        q = [phys[t] for t in g.targets]
        if g.kind == "r":
            # R(x/2) is the native u3(x, 0, 0).
            lines.append(f"u3({_format_angle(2 * g.params[0])},0,0) q[{q[0]}];")
        elif g.kind == "u3":
            args = ",".join(_format_angle(p) for p in g.params)
            lines.append(f"u3({args}) q[{q[0]}];")
        elif g.kind == "h":
            lines.append(f"h q[{q[0]}];")
        elif g.kind == "sdg":
            lines.append(f"sdg q[{q[0]}];")
        else:
            lines.append(f"cx q[{q[0]}],q[{q[1]}];")

    for slot, (logical, basis) in enumerate(measured):
        for prefix in _MEASUREMENT_PREFIX[basis]:
            lines.append(f"{prefix} q[{phys[logical]}];")
        lines.append(f"measure q[{phys[logical]}] -> c[{slot}];")

    return "\n".join(lines) + "\n"


def circuit_to_json(circ: Circuit) -> str:
    """Serialize a circuit as ``{"n_qubits": n, "gates": [...]}``."""
    payload = {
        "n_qubits": circ.n_qubits,
        "gates": [
            {"kind": g.kind, "params": list(g.params), "targets": list(g.targets)}
            for g in circ.gates
        ],
    }
    return json.dumps(payload, indent=2)


def circuit_from_json(text: str) -> Circuit:
    payload = json.loads(text)
    gates = tuple(
        Gate(g["kind"], tuple(g.get("params", ())), tuple(g["targets"]))
        for g in payload["gates"]
    )
    return Circuit(n_qubits=int(payload["n_qubits"]), gates=gates)
