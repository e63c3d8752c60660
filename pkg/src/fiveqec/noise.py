"""Decoherence channels, device parameters, shot sampling and readout error.

The decoherence model combines amplitude damping (probability
``gamma = k * t / T1`` per time step) with pure dephasing (probability
``gamma_phi = k' * t / T_phi``), with ``k = 1`` and ``k' = 2``.  The four
combined Kraus operators are the pairwise products of the damping pair
with the dephasing pair.  Noise is applied layer by layer: after the ideal
gates of a layer, every qubit (idle ones included) is decohered for the
layer's duration.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import Circuit, DensityMatrix, Gate

RELAX_SCALE = 1.0      # k in gamma = k * t / T1
DEPHASE_SCALE = 2.0    # k' in gamma_phi = k' * t / T_phi (no echo applied)

TPHI_MODES = ("pure-dephasing", "t2star")


@dataclass(frozen=True)
class GateTiming:
    """Wall-clock durations of single- and two-qubit gate layers."""

    t_1q: float = 25e-9
    t_2q: float = 40e-9

    def layer_duration(self, layer_has_two_qubit: bool) -> float:
        return self.t_2q if layer_has_two_qubit else self.t_1q


@dataclass(frozen=True)
class DeviceParams:
    """Per-qubit coherence and readout numbers, indexed by code label.

    ``chain`` lists, for every position of the linear chain, the code label
    of the qubit that sits there (the encoder runs along the chain).
    """

    t1: tuple[float, ...]
    t2_star: tuple[float, ...]
    f00: tuple[float, ...]
    f11: tuple[float, ...]
    chain: tuple[int, ...] = (0, 4, 1, 3, 2)

    def __post_init__(self):
        n = len(self.t1)
        if not (len(self.t2_star) == len(self.f00) == len(self.f11) == n):
            raise ValueError("per-qubit arrays must have equal length")
        if sorted(self.chain) != list(range(n)):
            raise ValueError(f"chain is not a permutation: {self.chain}")
        for q in range(n):
            if self.t1[q] <= 0:
                raise ValueError("T1 must be positive")
            if self.t2_star[q] > 2 * self.t1[q] + 1e-12:
                raise ValueError("T2* exceeds 2*T1")
            if not (0.5 < self.f00[q] <= 1 and 0.5 < self.f11[q] <= 1):
                raise ValueError("readout fidelities must lie in (0.5, 1]")

    @property
    def num_qubits(self) -> int:
        return len(self.t1)

    def with_t2_equal_t1(self) -> "DeviceParams":
        """The long-dephasing variant: every T2* raised to its qubit's T1."""
        return replace(self, t2_star=tuple(self.t1))


def paper_device() -> DeviceParams:
    """The bundled five-qubit device profile (times in seconds)."""
    return DeviceParams(
        t1=(27.5e-6, 33.0e-6, 48.6e-6, 36.8e-6, 34.0e-6),
        t2_star=(5.5e-6, 5.6e-6, 3.3e-6, 2.7e-6, 4.1e-6),
        f00=(0.982, 0.931, 0.963, 0.934, 0.932),
        f11=(0.831, 0.885, 0.916, 0.899, 0.874),
    )


def pure_dephasing_time(t1: float, t2_star: float,
                        mode: str = "pure-dephasing") -> float:
    """T_phi from T1 and T2*.

    The default removes the relaxation contribution,
    ``1/T_phi = 1/T2* - 1/(2 T1)``; mode "t2star" passes T2* through
    unchanged.
    """
    if mode not in TPHI_MODES:
        raise ValueError(f"unknown tphi mode {mode!r}")
    if mode == "t2star":
        return t2_star
    if t2_star >= 2 * t1:
        raise ValueError("no pure dephasing: T2* >= 2*T1")
    return 1.0 / (1.0 / t2_star - 1.0 / (2.0 * t1))


@dataclass(frozen=True)
class NoiseParams:
    """Everything needed to decohere a circuit on a specific device."""

    device: DeviceParams
    timing: GateTiming = GateTiming()
    tphi_mode: str = "pure-dephasing"

    def __post_init__(self):
        if self.tphi_mode not in TPHI_MODES:
            raise ValueError(f"unknown tphi mode {self.tphi_mode!r}")

    def tphi(self, qubit: int) -> float:
        return pure_dephasing_time(self.device.t1[qubit],
                                   self.device.t2_star[qubit], self.tphi_mode)


def decoherence_kraus(t1: float, tphi: float, t: float) -> list[np.ndarray]:
    """Combined relaxation+dephasing Kraus set for one qubit over time t."""
    if t < 0 or t1 <= 0 or tphi <= 0:
        raise ValueError("times must be nonnegative (T1, T_phi positive)")
    gamma = RELAX_SCALE * t / t1
    gamma_phi = DEPHASE_SCALE * t / tphi
    if not 0 <= gamma <= 1 or not 0 <= gamma_phi <= 1:
        raise ValueError(f"decay probabilities out of range: "
                         f"gamma={gamma}, gamma_phi={gamma_phi}")
    e1 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    e2 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    e3 = np.array([[1, 0], [0, np.sqrt(1 - gamma_phi)]], dtype=complex)
    e4 = np.array([[0, 0], [0, np.sqrt(gamma_phi)]], dtype=complex)
    return [e1 @ e3, e1 @ e4, e2 @ e3, e2 @ e4]


def apply_layer_noise(rho: DensityMatrix, duration: float,
                      params: NoiseParams,
                      qubit_labels: tuple[int, ...] | None = None
                      ) -> DensityMatrix:
    """Decohere every qubit of ``rho`` for ``duration`` seconds.

    ``qubit_labels[w]`` says which device qubit sits on wire ``w``; by
    default wire w is device qubit w.
    """
    if duration == 0:
        return rho
    labels = qubit_labels or tuple(range(rho.num_qubits))
    for wire, q in enumerate(labels):
        kraus = decoherence_kraus(params.device.t1[q], params.tphi(q), duration)
        rho = rho.apply_channel(kraus, wire)
    return rho


def run_circuit(rho: DensityMatrix, circuit: Circuit,
                noise: NoiseParams | None = None,
                qubit_labels: tuple[int, ...] | None = None) -> DensityMatrix:
    """Evolve ``rho`` through the circuit, decohering after each layer."""
    for layer in circuit.layers:
        for gate in layer.gates:
            rho = rho.apply_gate(gate)
        if noise is not None:
            rho = apply_layer_noise(rho, layer.duration, noise, qubit_labels)
    return rho


# ---------------------------------------------------------------------------
# readout


@dataclass(frozen=True)
class ReadoutModel:
    """Per-qubit assignment-error model built from f00/f11."""

    f00: tuple[float, ...]
    f11: tuple[float, ...]

    @classmethod
    def from_device(cls, device: DeviceParams) -> "ReadoutModel":
        return cls(device.f00, device.f11)

    @property
    def num_qubits(self) -> int:
        return len(self.f00)

    def confusion_matrix(self, qubit: int) -> np.ndarray:
        """Column j holds the outcome distribution given true state j."""
        return np.array([[self.f00[qubit], 1 - self.f11[qubit]],
                         [1 - self.f00[qubit], self.f11[qubit]]])

    def apply(self, probs: np.ndarray) -> np.ndarray:
        """Push a true outcome distribution through the confusion matrices."""
        return self._tensor_op(probs, inverse=False)

    def correct(self, freqs: np.ndarray) -> np.ndarray:
        """Invert the confusion matrices on empirical frequencies.

        The result sums to one but may have small negative entries; any
        physicality restoration happens downstream.
        """
        return self._tensor_op(freqs, inverse=True)

    def _tensor_op(self, vec: np.ndarray, inverse: bool) -> np.ndarray:
        n = self.num_qubits
        out = np.asarray(vec, dtype=float).reshape((2,) * n)
        for q in range(n):
            m = self.confusion_matrix(q)
            m = np.linalg.inv(m) if inverse else m
            out = np.tensordot(m, out, axes=(1, q))
            out = np.moveaxis(out, 0, q)
        return out.reshape(-1)


def confusion_correct(counts: np.ndarray, readout: ReadoutModel) -> np.ndarray:
    """Counts (or frequencies) -> readout-corrected probability vector."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty counts")
    return readout.correct(counts / total)


# ---------------------------------------------------------------------------
# shot sampling

_BASIS_ROTATIONS = {"Z": None, "X": ("h",), "Y": ("sdg", "h")}


def measurement_probabilities(rho: DensityMatrix,
                              basis: str | tuple[str, ...]) -> np.ndarray:
    """Born probabilities after rotating each qubit into its basis."""
    n = rho.num_qubits
    basis = tuple(basis)
    if len(basis) != n:
        raise ValueError("one basis letter per qubit required")
    rotated = rho
    for q, b in enumerate(basis):
        if b not in _BASIS_ROTATIONS:
            raise ValueError(f"basis must be X, Y or Z, got {b!r}")
        for kind in _BASIS_ROTATIONS[b] or ():
            rotated = rotated.apply_gate(Gate(kind, (q,)))
    probs = np.real(np.diag(rotated.matrix)).copy()
    probs[probs < 0] = 0.0
    return probs / probs.sum()


def sample_measurement(rho: DensityMatrix, basis: str | tuple[str, ...],
                       shots: int, readout: ReadoutModel | None = None,
                       rng: np.random.Generator | int | None = None
                       ) -> np.ndarray:
    """Multinomial counts over the 2^n outcomes; deterministic given a seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    probs = measurement_probabilities(rho, basis)
    if readout is not None:
        probs = readout.apply(probs)
    return rng.multinomial(shots, probs)


def estimate_pauli_expectation(rho: DensityMatrix, letters: str, shots: int,
                               readout: ReadoutModel | None = None,
                               rng: np.random.Generator | int | None = None,
                               correct_readout: bool = True) -> float:
    """Shot-based estimate of a Pauli-string expectation value.

    Qubits with letter I are measured in Z and ignored by the sign rule.
    """
    basis = tuple(c if c != "I" else "Z" for c in letters)
    counts = sample_measurement(rho, basis, shots, readout, rng)
    freqs = counts / counts.sum()
    if readout is not None and correct_readout:
        freqs = readout.correct(freqs)
    n = len(letters)
    signs = np.ones(2 ** n)
    for idx in range(2 ** n):
        parity = 0
        for q, c in enumerate(letters):
            if c != "I" and (idx >> (n - 1 - q)) & 1:
                parity ^= 1
        signs[idx] = -1.0 if parity else 1.0
    return float(np.dot(signs, freqs))
