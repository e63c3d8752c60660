"""Phase-tracked Pauli strings, stabilizer generators and syndromes.

Phase convention: ``Y = i X Z``, equivalently ``X*Z = -i Y``.  All logical
operator identities in :mod:`fiveqec.code` derive from this single choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import PAULI_MATRICES, DensityMatrix

_LETTERS = "IXYZ"

# single-qubit products: (a, b) -> (phase, letter) for a*b with Y = iXZ
_PRODUCT = {}
for _a in _LETTERS:
    _PRODUCT[("I", _a)] = (1, _a)
    _PRODUCT[(_a, "I")] = (1, _a)
    _PRODUCT[(_a, _a)] = (1, "I")
_PRODUCT[("X", "Y")] = (1j, "Z")
_PRODUCT[("Y", "X")] = (-1j, "Z")
_PRODUCT[("Y", "Z")] = (1j, "X")
_PRODUCT[("Z", "Y")] = (-1j, "X")
_PRODUCT[("Z", "X")] = (1j, "Y")
_PRODUCT[("X", "Z")] = (-1j, "Y")

_PHASES = (1, -1, 1j, -1j)
_PHASE_LABEL = {1: "", -1: "-", 1j: "+i", -1j: "-i"}


def _canonical_phase(phase: complex) -> complex:
    for p in _PHASES:
        if abs(phase - p) < 1e-9:
            return p
    raise ValueError(f"phase {phase} not in {{1,-1,i,-i}}")


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator with a tracked phase in {1,-1,i,-i}."""

    letters: str
    phase: complex = 1

    def __post_init__(self):
        if any(c not in _LETTERS for c in self.letters):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        object.__setattr__(self, "phase", _canonical_phase(self.phase))

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(1 for c in self.letters if c != "I")

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.num_qubits != other.num_qubits:
            raise ValueError("length mismatch")
        phase = self.phase * other.phase
        letters = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PRODUCT[(a, b)]
            phase *= p
            letters.append(c)
        return PauliString("".join(letters), phase)

    def commutes(self, other: "PauliString") -> bool:
        if self.num_qubits != other.num_qubits:
            raise ValueError("length mismatch")
        clashes = sum(1 for a, b in zip(self.letters, other.letters)
                      if a != "I" and b != "I" and a != b)
        return clashes % 2 == 0

    def is_hermitian(self) -> bool:
        return self.phase in (1, -1)

    def matrix(self) -> np.ndarray:
        mats = [PAULI_MATRICES[c] for c in self.letters]
        return self.phase * reduce(np.kron, mats)

    def expectation(self, rho: DensityMatrix | np.ndarray) -> float:
        """Tr(rho * P); requires a Hermitian phase."""
        if not self.is_hermitian():
            raise ValueError(f"{self} has an imaginary phase; not an observable")
        mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
        if mat.shape[0] != 2 ** self.num_qubits:
            raise ValueError("dimension mismatch")
        val = complex(np.trace(mat @ self.matrix()))
        return float(val.real)

    def __str__(self) -> str:
        return _PHASE_LABEL[self.phase] + self.letters


def pauli(letters: str, phase: complex = 1) -> PauliString:
    return PauliString(letters, phase)


# ---------------------------------------------------------------------------
# the five-qubit code's stabilizer group

GENERATOR_STRINGS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


@dataclass(frozen=True)
class StabilizerSet:
    """Four commuting, independent generators on five qubits."""

    generators: tuple[PauliString, ...]

    def __post_init__(self):
        gens = self.generators
        if len(gens) != 4 or any(g.num_qubits != 5 for g in gens):
            raise ValueError("expected 4 generators on 5 qubits")
        if any(g.phase != 1 for g in gens):
            raise ValueError("generators must have phase +1")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if not a.commutes(b):
                    raise ValueError(f"{a} and {b} do not commute")
        products = set()
        for mask in range(1, 16):
            prod = PauliString("IIIII")
            for i in range(4):
                if mask >> i & 1:
                    prod = prod * gens[i]
            products.add(str(prod))
        if len(products) != 15 or "IIIII" in products:
            raise ValueError("generators are not independent")

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i: int) -> PauliString:
        return self.generators[i]

    def subset_product(self, mask: int) -> PauliString:
        """Product of the generators selected by the 4-bit mask (g1 = bit 0)."""
        prod = PauliString("IIIII")
        for i in range(4):
            if mask >> i & 1:
                prod = prod * self.generators[i]
        return prod


def five_qubit_generators() -> StabilizerSet:
    """g1..g4 of the five-qubit perfect code."""
    return StabilizerSet(tuple(PauliString(s) for s in GENERATOR_STRINGS))


def relabel_pauli(p: PauliString, sources: tuple[int, ...]) -> PauliString:
    """Letters rearranged so position ``w`` takes the letter of ``sources[w]``."""
    return PauliString("".join(p.letters[s] for s in sources), p.phase)


def relabeled_generators(sources: tuple[int, ...]) -> StabilizerSet:
    gens = tuple(relabel_pauli(g, sources) for g in five_qubit_generators())
    return StabilizerSet(gens)


def logical_pauli_string(axis: str) -> PauliString:
    """Transversal logical operator: the five-fold tensor power of the axis."""
    if axis not in "XYZ":
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    return PauliString(axis * 5)


# ---------------------------------------------------------------------------
# syndromes

Syndrome = tuple[int, int, int, int]

_ERROR_AXES = "XYZ"


def syndrome_of_error(error: PauliString,
                      gens: StabilizerSet | None = None) -> Syndrome:
    """Sign i is -1 iff the error anticommutes with generator i."""
    gens = gens or five_qubit_generators()
    return tuple(1 if error.commutes(g) else -1 for g in gens)


def single_qubit_errors() -> list[PauliString]:
    """The 15 weight-one Pauli errors, ordered by axis then qubit."""
    out = []
    for axis in _ERROR_AXES:
        for q in range(5):
            letters = ["I"] * 5
            letters[q] = axis
            out.append(PauliString("".join(letters)))
    return out


def two_qubit_errors() -> list[PauliString]:
    """The 90 weight-two Pauli errors."""
    out = []
    for a1 in _ERROR_AXES:
        for a2 in _ERROR_AXES:
            for q1 in range(5):
                for q2 in range(q1 + 1, 5):
                    letters = ["I"] * 5
                    letters[q1], letters[q2] = a1, a2
                    out.append(PauliString("".join(letters)))
    return out


def build_syndrome_table(gens: StabilizerSet | None = None
                         ) -> dict[str, Syndrome]:
    """Map each weight-one error to its syndrome; must be a bijection."""
    gens = gens or five_qubit_generators()
    table = {}
    for err in single_qubit_errors():
        table[err.letters] = syndrome_of_error(err, gens)
    values = set(table.values())
    if len(values) != 15 or (1, 1, 1, 1) in values:
        raise ValueError("single-qubit syndromes are not distinct/nontrivial")
    return table


# ---------------------------------------------------------------------------
# the 32-term stabilizer-group expansion of a logical projector


def fifth_stabilizer_coefficients(a: complex, b: complex
                                  ) -> tuple[float, float, float]:
    """(c_Z, c_X, c_Y) of the state-dependent fifth stabilizer.

    For the logical state a|0>_L + b|1>_L the rank-one projector difference
    |psi><psi| - |psi_perp><psi_perp| expands over the logical Paulis as
    c_Z Z_L + c_X X_L + c_Y Y_L with a unit-norm coefficient vector.
    """
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("amplitudes not normalized")
    cz = (abs(a) ** 2 - abs(b) ** 2)
    cx = 2 * (np.conj(a) * b).real
    cy = 2 * (np.conj(a) * b).imag
    return float(cz), float(cx), float(cy)


@dataclass(frozen=True)
class StabilizerTerm:
    """One term of the 32-term expansion: a real combination of Pauli strings.

    ``parts`` holds (coefficient, string) pairs with a unit-norm coefficient
    vector, so the term is Hermitian with eigenvalues in [-1, 1] and its
    expectation on the ideal logical state is +1.
    """

    label: str
    parts: tuple[tuple[float, PauliString], ...]

    def expectation(self, rho: DensityMatrix | np.ndarray) -> float:
        return sum(c * p.expectation(rho) for c, p in self.parts)

    def matrix(self) -> np.ndarray:
        return sum(c * p.matrix() for c, p in self.parts)


def expand_group(gens: StabilizerSet,
                 fifth: tuple[float, float, float]) -> list[StabilizerTerm]:
    """The 32 terms of the product of (identity + generator) over all five.

    ``fifth`` gives the fifth stabilizer as coefficients (c_Z, c_X, c_Y) on
    the transversal logical Paulis.  The weighted sum of the term matrices,
    divided by 32, is the projector onto the logical state.
    """
    cz, cx, cy = fifth
    if abs(cz ** 2 + cx ** 2 + cy ** 2 - 1.0) > 1e-9:
        raise ValueError("fifth-stabilizer coefficients not normalized")
    fifth_parts = [(c, logical_pauli_string(axis))
                   for c, axis in ((cz, "Z"), (cx, "X"), (cy, "Y"))
                   if abs(c) > 1e-15]
    terms = []
    for mask in range(16):
        base = gens.subset_product(mask)
        label = "g0" if mask == 0 else "".join(
            f"g{i + 1}" for i in range(4) if mask >> i & 1)
        terms.append(StabilizerTerm(label, ((1.0, base),)))
        parts = []
        for c, p in fifth_parts:
            prod = base * p
            # stabilizers commute with the logical Paulis, so the product is
            # Hermitian and the tracked phase is +-1; fold it into the weight
            if prod.phase not in (1, -1):
                raise AssertionError(f"non-Hermitian expansion term {prod}")
            parts.append((float(c * prod.phase.real), PauliString(prod.letters)))
        terms.append(StabilizerTerm(label + "g5" if mask else "g5",
                                    tuple(parts)))
    return terms
