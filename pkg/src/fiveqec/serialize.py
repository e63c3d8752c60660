"""Circuit serialization: layered JSON with angles in units of pi.

The format is a plain JSON object::

    {"num_qubits": 5,
     "layers": [{"duration": 2.5e-08,
                 "gates": [{"kind": "ry", "targets": [0], "angle": 0.5}]}]}

Floats are written with ``repr`` semantics, so a load/dump cycle is
bit-exact.
"""
from __future__ import annotations

import json

from .core import Circuit, Gate, Layer


def gate_to_dict(gate: Gate) -> dict:
    out = {"kind": gate.kind, "targets": list(gate.targets)}
    if gate.angle is not None:
        out["angle"] = gate.angle
    return out


def gate_from_dict(data: dict) -> Gate:
    return Gate(data["kind"], tuple(data["targets"]), data.get("angle"))


def circuit_to_dict(circuit: Circuit) -> dict:
    return {
        "num_qubits": circuit.num_qubits,
        "layers": [
            {"duration": layer.duration,
             "gates": [gate_to_dict(g) for g in layer.gates]}
            for layer in circuit.layers
        ],
    }


def circuit_from_dict(data: dict) -> Circuit:
    layers = [Layer(tuple(gate_from_dict(g) for g in entry["gates"]),
                    entry["duration"])
              for entry in data["layers"]]
    return Circuit(data["num_qubits"], layers)


def dumps_circuit(circuit: Circuit) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=1, sort_keys=True)


def loads_circuit(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_circuit(circuit))
        fh.write("\n")


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return loads_circuit(fh.read())
