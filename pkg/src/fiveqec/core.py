"""Dense complex linear algebra for few-qubit states and circuits.

Conventions used throughout the package:

* Qubit 0 is the most significant bit of a computational-basis label, so
  the ket string ``"01001"`` denotes basis index ``int("01001", 2)``.
* ``Rz(a)`` and ``Ry(a)`` are ``exp(-i*a*pi*Z/2)`` and ``exp(-i*a*pi*Y/2)``
  with the angle given in units of pi.
* Circuits compose temporally: the unitary of ``first + second`` is
  ``U_second @ U_first``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ATOL_EVOLVE = 1e-10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)

PAULI_MATRICES = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def rotation_y(alpha: float) -> np.ndarray:
    """Ry(alpha*pi) = exp(-i*alpha*pi*Y/2)."""
    half = alpha * math.pi / 2
    return np.array([[math.cos(half), -math.sin(half)],
                     [math.sin(half), math.cos(half)]], dtype=complex)


def rotation_z(alpha: float) -> np.ndarray:
    """Rz(alpha*pi) = exp(-i*alpha*pi*Z/2)."""
    half = alpha * math.pi / 2
    return np.diag([np.exp(-1j * half), np.exp(1j * half)])


def rotation_x(alpha: float) -> np.ndarray:
    """Rx(alpha*pi) = exp(-i*alpha*pi*X/2)."""
    half = alpha * math.pi / 2
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


_FIXED_1Q = {
    "h": _H,
    "s": _S,
    "sdg": _S.conj().T,
    "x": _X,
    "y": _Y,
    "z": _Z,
}
_ROTATIONS = {"rx": rotation_x, "ry": rotation_y, "rz": rotation_z}
_TWO_QUBIT = ("cz", "cnot", "swap")

GATE_KINDS = tuple(_FIXED_1Q) + tuple(_ROTATIONS) + _TWO_QUBIT


@dataclass(frozen=True)
class Gate:
    """A named gate acting on one or two qubits.

    ``angle`` is in units of pi and only meaningful for rx/ry/rz.
    For cnot the first target is the control.
    """

    kind: str
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(self.targets))
        arity = 2 if self.kind in _TWO_QUBIT else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind} takes {arity} target(s), "
                             f"got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate targets {self.targets}")
        if (self.kind in _ROTATIONS) != (self.angle is not None):
            raise ValueError(f"angle given/missing for {self.kind}")

    @property
    def num_targets(self) -> int:
        return len(self.targets)

    def matrix(self) -> np.ndarray:
        """The 2x2 or 4x4 unitary, ordered (control, target) for cnot."""
        if self.kind in _FIXED_1Q:
            return _FIXED_1Q[self.kind].copy()
        if self.kind in _ROTATIONS:
            return _ROTATIONS[self.kind](self.angle)
        if self.kind == "cz":
            return np.diag([1, 1, 1, -1]).astype(complex)
        if self.kind == "cnot":
            m = np.eye(4, dtype=complex)
            m[[2, 3]] = m[[3, 2]]
            return m
        m = np.eye(4, dtype=complex)  # swap
        m[[1, 2]] = m[[2, 1]]
        return m

    def inverse(self) -> "Gate":
        if self.kind == "s":
            return Gate("sdg", self.targets)
        if self.kind == "sdg":
            return Gate("s", self.targets)
        if self.kind in _ROTATIONS:
            return Gate(self.kind, self.targets, -self.angle)
        return self  # h, paulis, cz, cnot, swap are involutions


@dataclass(frozen=True)
class Layer:
    """Gates applied in parallel, plus the wall-clock duration in seconds."""

    gates: tuple[Gate, ...]
    duration: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        seen = set()
        for g in self.gates:
            for q in g.targets:
                if q in seen:
                    raise ValueError(f"qubit {q} targeted twice in one layer")
                seen.add(q)

    @property
    def qubits(self) -> set[int]:
        return {q for g in self.gates for q in g.targets}

    def has_two_qubit_gate(self) -> bool:
        return any(g.num_targets == 2 for g in self.gates)


@dataclass
class Circuit:
    """A temporally ordered list of layers on a fixed register."""

    num_qubits: int
    layers: list[Layer] = field(default_factory=list)

    def __post_init__(self):
        for layer in self.layers:
            self._check_layer(layer)

    def _check_layer(self, layer: Layer):
        for g in layer.gates:
            for q in g.targets:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"target {q} out of range")

    def append(self, layer: Layer):
        self._check_layer(layer)
        self.layers.append(layer)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError("register size mismatch")
        return Circuit(self.num_qubits, list(self.layers) + list(other.layers))

    @property
    def gates(self) -> list[Gate]:
        return [g for layer in self.layers for g in layer.gates]

    def gate_count(self) -> int:
        return len(self.gates)

    def two_qubit_count(self, kind: str | None = None) -> int:
        return sum(1 for g in self.gates
                   if g.num_targets == 2 and (kind is None or g.kind == kind))

    def duration(self) -> float:
        return sum(layer.duration for layer in self.layers)

    def qubits_touched(self) -> set[int]:
        out: set[int] = set()
        for layer in self.layers:
            out |= layer.qubits
        return out

    def inverse(self) -> "Circuit":
        layers = [Layer(tuple(g.inverse() for g in layer.gates), layer.duration)
                  for layer in reversed(self.layers)]
        return Circuit(self.num_qubits, layers)

    def unitary(self) -> np.ndarray:
        return circuit_unitary(self)


def _apply_unitary_to_tensor(tensor: np.ndarray, u: np.ndarray,
                             targets: tuple[int, ...], n: int) -> np.ndarray:
    """Apply u to the given axes of a rank-n qubit tensor."""
    k = len(targets)
    u_t = u.reshape((2,) * (2 * k))
    tensor = np.tensordot(u_t, tensor, axes=(tuple(range(k, 2 * k)), targets))
    # tensordot leaves the acted-on axes up front; move them back in place
    perm = [0] * tensor.ndim
    for src, dst in enumerate(targets):
        perm[dst] = src
    others = iter(range(k, tensor.ndim))
    for ax in range(tensor.ndim):
        if ax not in targets:
            perm[ax] = next(others)
    return tensor.transpose(perm)


class StateVector:
    """Pure state of ``num_qubits`` qubits."""

    def __init__(self, num_qubits: int, amplitudes: np.ndarray | None = None):
        self.num_qubits = int(num_qubits)
        dim = 2 ** self.num_qubits
        if amplitudes is None:
            amps = np.zeros(dim, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=complex).reshape(dim)
        self.amplitudes = amps

    @classmethod
    def from_ket(cls, label: str) -> "StateVector":
        """Basis state from a bit string such as "01001"."""
        sv = cls(len(label))
        sv.amplitudes[0] = 0.0
        sv.amplitudes[int(label, 2)] = 1.0
        return sv

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def apply_gate(self, gate: Gate) -> "StateVector":
        for q in gate.targets:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"target {q} out of range")
        t = self.amplitudes.reshape((2,) * self.num_qubits)
        t = _apply_unitary_to_tensor(t, gate.matrix(), gate.targets,
                                     self.num_qubits)
        return StateVector(self.num_qubits, t.reshape(-1))

    def apply_circuit(self, circuit: Circuit) -> "StateVector":
        out = self
        for layer in circuit.layers:
            for gate in layer.gates:
                out = out.apply_gate(gate)
        return out

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.num_qubits,
                             np.outer(self.amplitudes,
                                      self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(other.amplitudes, self.amplitudes))


class DensityMatrix:
    """Mixed state of ``num_qubits`` qubits as a dense 2^n x 2^n matrix."""

    def __init__(self, num_qubits: int, matrix: np.ndarray | None = None):
        self.num_qubits = int(num_qubits)
        dim = 2 ** self.num_qubits
        if matrix is None:
            m = np.zeros((dim, dim), dtype=complex)
            m[0, 0] = 1.0
        else:
            m = np.asarray(matrix, dtype=complex).reshape(dim, dim)
        self.matrix = m

    @classmethod
    def from_statevector(cls, sv: StateVector) -> "DensityMatrix":
        return sv.density_matrix()

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.num_qubits, self.matrix.copy())

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_physical(self, atol: float = 1e-9) -> bool:
        if abs(self.trace() - 1.0) > 1e-10:
            return False
        if not np.allclose(self.matrix, self.matrix.conj().T, atol=1e-10):
            return False
        return bool(np.linalg.eigvalsh(self.matrix).min() > -atol)

    def apply_unitary(self, u: np.ndarray,
                      targets: tuple[int, ...]) -> "DensityMatrix":
        n = self.num_qubits
        t = self.matrix.reshape((2,) * (2 * n))
        t = _apply_unitary_to_tensor(t, u, tuple(targets), 2 * n)
        conj_targets = tuple(q + n for q in targets)
        t = _apply_unitary_to_tensor(t, u.conj(), conj_targets, 2 * n)
        return DensityMatrix(n, t.reshape(2 ** n, 2 ** n))

    def apply_gate(self, gate: Gate) -> "DensityMatrix":
        for q in gate.targets:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"target {q} out of range")
        return self.apply_unitary(gate.matrix(), gate.targets)

    def apply_circuit(self, circuit: Circuit) -> "DensityMatrix":
        out = self
        for layer in circuit.layers:
            for gate in layer.gates:
                out = out.apply_gate(gate)
        return out

    def apply_channel(self, kraus: list[np.ndarray],
                      target: int) -> "DensityMatrix":
        """Single-qubit Kraus channel on ``target``.

        Raises if the set is not trace preserving within 1e-10.
        """
        check = sum(e.conj().T @ e for e in kraus)
        if not np.allclose(check, np.eye(2), atol=ATOL_EVOLVE):
            raise ValueError("Kraus set is not trace preserving")
        n = self.num_qubits
        out = np.zeros_like(self.matrix)
        for e in kraus:
            t = self.matrix.reshape((2,) * (2 * n))
            t = _apply_unitary_to_tensor(t, e, (target,), 2 * n)
            t = _apply_unitary_to_tensor(t, e.conj(), (target + n,), 2 * n)
            out += t.reshape(2 ** n, 2 ** n)
        return DensityMatrix(n, out)

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.trace(self.matrix @ operator))

    def permute_qubits(self, sources: tuple[int, ...]) -> "DensityMatrix":
        """Relabel qubits so that new qubit ``p`` is old qubit ``sources[p]``."""
        n = self.num_qubits
        if sorted(sources) != list(range(n)):
            raise ValueError(f"not a permutation: {sources}")
        perm = list(sources) + [s + n for s in sources]
        t = self.matrix.reshape((2,) * (2 * n)).transpose(perm)
        return DensityMatrix(n, t.reshape(2 ** n, 2 ** n))


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...]) -> DensityMatrix:
    """Trace out all qubits not in ``keep`` (order of ``keep`` preserved)."""
    keep = tuple(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    n = rho.num_qubits
    if any(not 0 <= q < n for q in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid keep set {keep}")
    drop = [q for q in range(n) if q not in keep]
    t = rho.matrix.reshape((2,) * (2 * n))
    for q in sorted(drop, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    k = len(keep)
    # axes are now the kept qubits in ascending order; reorder to match keep
    ascending = sorted(keep)
    order = [ascending.index(q) for q in keep]
    t = t.transpose(order + [o + k for o in order])
    return DensityMatrix(k, t.reshape(2 ** k, 2 ** k))


def state_fidelity(rho: DensityMatrix, psi: StateVector) -> float:
    """<psi| rho |psi>, checked real."""
    if rho.num_qubits != psi.num_qubits:
        raise ValueError("dimension mismatch")
    val = complex(psi.amplitudes.conj() @ rho.matrix @ psi.amplitudes)
    if abs(val.imag) > ATOL_EVOLVE * max(1.0, abs(val)):
        raise ValueError(f"fidelity came out complex: {val}")
    return float(val.real)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Product of layer unitaries in temporal order (later layers on the left)."""
    n = circuit.num_qubits
    dim = 2 ** n
    u = np.eye(dim, dtype=complex)
    for col in range(dim):
        sv = StateVector(n, u[:, col])
        u[:, col] = sv.apply_circuit(circuit).amplitudes
    return u


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray,
                             atol: float = 1e-9) -> bool:
    """True if a = e^{i phi} b for some phase, entrywise within atol."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a[idx] / b[idx]
    if abs(abs(phase) - 1.0) > atol:
        return False
    return bool(np.allclose(a, phase * b, atol=atol))
