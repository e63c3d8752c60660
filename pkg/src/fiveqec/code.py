"""The five-qubit perfect code: logical states, encoders, decoder, logical ops.

Three encoder constructions are provided.  The "reference" circuit works in
code labels directly and uses non-local CNOTs.  The "nearest-neighbour"
variant routes it onto a linear chain with six nearest-neighbour CNOTs plus
two SWAPs, and the "optimized" variant realizes the same encoding with
eight nearest-neighbour CZ gates dressed by single-qubit rotations.

The chain variants act on *wires*: wire ``w`` of the chain carries code
qubit ``CHAIN_QUBITS[w]``.  :func:`encode` runs on the chain and relabels
the output back to code order, so everything downstream (stabilizers,
syndromes, tomography) speaks code labels.
"""
from __future__ import annotations

import math

import numpy as np

from .core import (Circuit, DensityMatrix, Gate, Layer, StateVector,
                   partial_trace)
from .noise import GateTiming, NoiseParams, apply_layer_noise, run_circuit
from .pauli import PauliString, logical_pauli_string

# code qubit living on each chain wire
CHAIN_QUBITS: tuple[int, ...] = (0, 4, 1, 3, 2)
# inverse view: wire carrying each code qubit
WIRE_OF_QUBIT: tuple[int, ...] = tuple(CHAIN_QUBITS.index(q) for q in range(5))

ENCODER_VARIANTS = ("reference", "nearest-neighbour", "optimized")

# signed computational-basis expansions of the logical basis states,
# common prefactor 1/4
_ZERO_KETS = (
    ("00000", 1), ("10010", 1), ("01001", 1), ("10100", 1),
    ("01010", 1), ("11011", -1), ("00110", -1), ("11000", -1),
    ("11101", -1), ("00011", -1), ("11110", -1), ("01111", -1),
    ("10001", -1), ("01100", -1), ("10111", -1), ("00101", 1),
)
_ONE_KETS = (
    ("11111", 1), ("01101", 1), ("10110", 1), ("01011", 1),
    ("10101", 1), ("00100", -1), ("11001", -1), ("00111", -1),
    ("00010", -1), ("11100", -1), ("00001", -1), ("10000", -1),
    ("01110", -1), ("10011", -1), ("01000", -1), ("11010", 1),
)

LOGICAL_STATE_LABELS = ("0", "1", "+", "-", "+i", "-i", "T")


def logical_amplitudes(label: str) -> tuple[complex, complex]:
    """(a, b) for the named logical state a|0>_L + b|1>_L."""
    s = 1 / math.sqrt(2)
    table = {
        "0": (1, 0), "1": (0, 1),
        "+": (s, s), "-": (s, -s),
        "+i": (s, 1j * s), "-i": (s, -1j * s),
        "T": (s, s * np.exp(1j * math.pi / 4)),
    }
    if label not in table:
        raise ValueError(f"unknown logical state {label!r}; "
                         f"choose from {LOGICAL_STATE_LABELS}")
    return table[label]


def _ket_sum(kets) -> np.ndarray:
    v = np.zeros(32, dtype=complex)
    for bits, sign in kets:
        v[int(bits, 2)] = sign / 4.0
    return v


def logical_zero() -> StateVector:
    return StateVector(5, _ket_sum(_ZERO_KETS))


def logical_one() -> StateVector:
    return StateVector(5, _ket_sum(_ONE_KETS))


def logical_state(a: complex, b: complex) -> StateVector:
    """a|0>_L + b|1>_L as a five-qubit state in code labels."""
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
        raise ValueError("amplitudes not normalized")
    return StateVector(5, a * logical_zero().amplitudes
                       + b * logical_one().amplitudes)


def logical_basis_state(label: str) -> StateVector:
    return logical_state(*logical_amplitudes(label))


# ---------------------------------------------------------------------------
# encoder circuits


def _layer(timing: GateTiming, *gates: Gate) -> Layer:
    two_q = any(g.num_targets == 2 for g in gates)
    return Layer(tuple(gates), timing.layer_duration(two_q))


def _g(kind, *targets, angle=None):
    return Gate(kind, tuple(targets), angle)


def build_reference_encoder(timing: GateTiming = GateTiming()) -> Circuit:
    """Six-CNOT encoder in code labels: input on qubit 0, ancillas |0>."""
    t = timing
    layers = [
        _layer(t, _g("z", 0), _g("h", 2)),
        _layer(t, _g("sdg", 0), _g("cnot", 2, 4)),
        _layer(t, _g("h", 3)),
        _layer(t, _g("cnot", 3, 1)),
        _layer(t, _g("cnot", 3, 4)),
        _layer(t, _g("h", 1), _g("sdg", 4)),
        _layer(t, _g("cnot", 1, 0), _g("s", 3)),
        _layer(t, _g("s", 0), _g("s", 1)),
        _layer(t, _g("cnot", 4, 0)),
        _layer(t, _g("h", 4)),
        _layer(t, _g("cnot", 4, 1)),
        _layer(t, _g("sdg", 2)),
        _layer(t, _g("z", 2)),
    ]
    return Circuit(5, layers)


def build_chain_encoder(timing: GateTiming = GateTiming()) -> Circuit:
    """Nearest-neighbour encoder on chain wires: 6 CNOTs and 2 SWAPs."""
    t = timing
    layers = [
        _layer(t, _g("s", 0), _g("h", 2), _g("h", 4)),
        _layer(t, _g("cnot", 2, 1)),
        _layer(t, _g("cnot", 4, 3)),
        _layer(t, _g("h", 1), _g("cnot", 2, 3), _g("s", 4)),
        _layer(t, _g("s", 2), _g("sdg", 3)),
        _layer(t, _g("swap", 2, 3)),
        _layer(t, _g("cnot", 1, 0)),
        _layer(t, _g("s", 0), _g("s", 1)),
        _layer(t, _g("swap", 1, 2)),
        _layer(t, _g("cnot", 1, 0)),
        _layer(t, _g("h", 1)),
        _layer(t, _g("cnot", 1, 2)),
    ]
    return Circuit(5, layers)


def build_optimized_encoder(timing: GateTiming = GateTiming()) -> Circuit:
    """Eight-CZ encoder on chain wires, one two-qubit gate per layer.

    Single-qubit gates are H, S and Y/Z rotations by rational multiples of
    pi.  The input wire is idle over layers 4-5, leaving room for the
    input-preparation rotations that :func:`encode` merges in.
    """
    t = timing
    layers = [
        _layer(t, _g("rz", 0, angle=4 / 3), _g("h", 1), _g("h", 2),
               _g("h", 3), _g("h", 4)),
        _layer(t, _g("ry", 0, angle=1), _g("cz", 1, 2)),
        _layer(t, _g("cz", 3, 4)),
        _layer(t, _g("rz", 0, angle=7 / 6), _g("rz", 1, angle=5 / 6),
               _g("rz", 2, angle=5 / 4), _g("rz", 3, angle=1 / 2), _g("s", 4)),
        _layer(t, _g("ry", 1, angle=1), _g("ry", 2, angle=1 / 2),
               _g("ry", 3, angle=1 / 2)),
        _layer(t, _g("rz", 1, angle=7 / 6), _g("rz", 2, angle=1),
               _g("rz", 3, angle=1 / 4)),
        _layer(t, _g("cz", 0, 1)),
        _layer(t, _g("cz", 2, 3), _g("rz", 0, angle=7 / 6),
               _g("rz", 1, angle=7 / 6)),
        _layer(t, _g("ry", 0, angle=1 / 2), _g("ry", 1, angle=1 / 2),
               _g("rz", 2, angle=1), _g("rz", 3, angle=3 / 4)),
        _layer(t, _g("rz", 0, angle=1), _g("rz", 1, angle=1),
               _g("ry", 2, angle=1 / 2), _g("ry", 3, angle=1 / 2)),
        _layer(t, _g("rz", 2, angle=5 / 4), _g("rz", 3, angle=1 / 2)),
        _layer(t, _g("cz", 2, 3)),
        _layer(t, _g("rz", 2, angle=1 / 4), _g("rz", 3, angle=1 / 2)),
        _layer(t, _g("ry", 2, angle=3 / 2), _g("ry", 3, angle=3 / 2)),
        _layer(t, _g("cz", 1, 2), _g("rz", 3, angle=5 / 4)),
        _layer(t, _g("rz", 1, angle=1), _g("rz", 2, angle=1)),
        _layer(t, _g("ry", 1, angle=3 / 2), _g("ry", 2, angle=3 / 2)),
        _layer(t, _g("rz", 1, angle=3 / 4), _g("rz", 2, angle=3 / 4)),
        _layer(t, _g("cz", 0, 1)),
        _layer(t, _g("rz", 0, angle=1), _g("rz", 1, angle=3 / 4)),
        _layer(t, _g("ry", 0, angle=1 / 2), _g("ry", 1, angle=1 / 2)),
        _layer(t, _g("rz", 0, angle=1), _g("rz", 1, angle=3 / 4)),
        _layer(t, _g("cz", 1, 2)),
        _layer(t, _g("rz", 1, angle=3 / 4), _g("rz", 2, angle=3 / 4)),
        _layer(t, _g("ry", 1, angle=1 / 2), _g("ry", 2, angle=1 / 2)),
        _layer(t, _g("rz", 1, angle=1), _g("rz", 2, angle=3 / 2)),
    ]
    return Circuit(5, layers)


def build_encoder(variant: str = "optimized",
                  timing: GateTiming = GateTiming()) -> Circuit:
    """One of the three encoder constructions (see module docstring)."""
    builders = {
        "reference": build_reference_encoder,
        "nearest-neighbour": build_chain_encoder,
        "optimized": build_optimized_encoder,
    }
    if variant not in builders:
        raise ValueError(f"unknown encoder variant {variant!r}; "
                         f"choose from {ENCODER_VARIANTS}")
    return builders[variant](timing)


def preparation_angles(a: complex, b: complex) -> tuple[float, float]:
    """Ry/Rz angles (units of pi) preparing a|0>+b|1> up to global phase."""
    beta = 2 * math.atan2(abs(b), abs(a)) / math.pi
    gamma = (np.angle(b) - np.angle(a)) / math.pi
    return float(beta), float(gamma)


def encoding_circuit(a: complex, b: complex,
                     timing: GateTiming = GateTiming()) -> Circuit:
    """Optimized encoder with the input preparation merged into its slack.

    Wire 0's own rotations shift two layers later (it is idle there), so
    preparing the input costs no extra depth: the full circuit keeps the
    encoder's layer count and runs in 18 single-qubit plus 8 two-qubit
    layer times.
    """
    beta, gamma = preparation_angles(a, b)
    base = build_optimized_encoder(timing)
    layers = [list(layer.gates) for layer in base.layers]
    durations = [layer.duration for layer in base.layers]
    # wire 0 rotations sit in layers 0, 1 and 3; it is idle in 2, 4 and 5
    for i in (0, 1, 3):
        layers[i] = [g for g in layers[i] if g.targets != (0,)]
    layers[0].append(_g("ry", 0, angle=beta))
    layers[1].append(_g("rz", 0, angle=gamma))
    layers[2].append(_g("rz", 0, angle=4 / 3))
    layers[3].append(_g("ry", 0, angle=1))
    layers[4].append(_g("rz", 0, angle=7 / 6))
    return Circuit(5, [Layer(tuple(gs), d)
                       for gs, d in zip(layers, durations)])


def wires_to_code_labels(rho: DensityMatrix) -> DensityMatrix:
    """Relabel a chain-wire state into code labels."""
    return rho.permute_qubits(WIRE_OF_QUBIT)


def code_labels_to_wires(rho: DensityMatrix) -> DensityMatrix:
    return rho.permute_qubits(CHAIN_QUBITS)


def encode(a: complex, b: complex, noise: NoiseParams | None = None,
           timing: GateTiming | None = None) -> DensityMatrix:
    """Run the optimized encoder; output is in code labels.

    With ``noise`` given, every layer is followed by per-qubit decoherence
    for the layer duration, idle wires included.
    """
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
        raise ValueError("amplitudes not normalized")
    timing = timing or (noise.timing if noise else GateTiming())
    circuit = encoding_circuit(a, b, timing)
    rho = DensityMatrix(5)
    rho = run_circuit(rho, circuit, noise, qubit_labels=CHAIN_QUBITS)
    return wires_to_code_labels(rho)


# ---------------------------------------------------------------------------
# decoder


def prune_to_output(circuit: Circuit, output: int) -> Circuit:
    """Drop every gate that cannot influence the reduced state on ``output``.

    Walks the circuit backwards keeping gates that touch the growing cone
    of influence; layers left empty are dropped entirely.
    """
    cone = {output}
    kept_per_layer: list[tuple[Gate, ...]] = []
    for layer in reversed(circuit.layers):
        kept = tuple(g for g in layer.gates if set(g.targets) & cone)
        for g in kept:
            cone.update(g.targets)
        kept_per_layer.append(kept)
    kept_per_layer.reverse()
    layers = [Layer(kept, layer.duration)
              for kept, layer in zip(kept_per_layer, circuit.layers) if kept]
    return Circuit(circuit.num_qubits, layers)


def build_decoder(timing: GateTiming = GateTiming()) -> Circuit:
    """Inverse of the optimized encoder, pruned to the output wire's cone.

    The pruned circuit touches only the first three chain wires; running it
    after the encoder returns the input state on wire 0.  Layers whose
    two-qubit gate was pruned away run at single-qubit duration.
    """
    pruned = prune_to_output(build_optimized_encoder(timing).inverse(), 0)
    layers = [Layer(l.gates, timing.layer_duration(l.has_two_qubit_gate()))
              for l in pruned.layers]
    return Circuit(pruned.num_qubits, layers)


def decode(rho_code: DensityMatrix, noise: NoiseParams | None = None,
           timing: GateTiming | None = None) -> DensityMatrix:
    """Map an encoded five-qubit state back to one qubit (wire 0)."""
    timing = timing or (noise.timing if noise else GateTiming())
    decoder = build_decoder(timing)
    rho = code_labels_to_wires(rho_code)
    rho = run_circuit(rho, decoder, noise, qubit_labels=CHAIN_QUBITS)
    return partial_trace(rho, (0,))


def encode_decode(a: complex, b: complex,
                  noise: NoiseParams | None = None,
                  timing: GateTiming | None = None) -> DensityMatrix:
    """Full round trip; returns the single-qubit output state."""
    timing = timing or (noise.timing if noise else GateTiming())
    circuit = encoding_circuit(a, b, timing) + build_decoder(timing)
    rho = DensityMatrix(5)
    rho = run_circuit(rho, circuit, noise, qubit_labels=CHAIN_QUBITS)
    return partial_trace(rho, (0,))


# ---------------------------------------------------------------------------
# logical operations and error injection


def logical_pauli(axis: str) -> PauliString:
    """Transversal logical X, Y or Z (five-fold tensor string)."""
    return logical_pauli_string(axis)


def apply_logical(rho: DensityMatrix, axis: str,
                  noise: NoiseParams | None = None) -> DensityMatrix:
    """Apply a transversal logical Pauli as one single-qubit-gate layer."""
    if axis not in "XYZ":
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    kind = axis.lower()
    for q in range(5):
        rho = rho.apply_gate(Gate(kind, (q,)))
    if noise is not None:
        rho = apply_layer_noise(rho, noise.timing.t_1q, noise)
    return rho


def inject_error(rho: DensityMatrix,
                 errors: list[tuple[int, str]]) -> DensityMatrix:
    """Apply one or two coherent single-qubit Pauli errors (code labels)."""
    if not 1 <= len(errors) <= 2:
        raise ValueError("only one or two simultaneous errors are supported")
    qubits = [q for q, _ in errors]
    if len(set(qubits)) != len(qubits):
        raise ValueError("error qubits must be distinct")
    for q, axis in errors:
        if axis not in "XYZ":
            raise ValueError(f"error type must be X, Y or Z, got {axis!r}")
        rho = rho.apply_gate(Gate(axis.lower(), (q,)))
    return rho
