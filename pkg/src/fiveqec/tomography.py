"""State/process tomography, code-space projection and fidelity evaluation.

Process matrices live in the operator basis {I, X, -iY, Z}, in which every
Pauli rotation has a real chi matrix and an ideal Pauli gate is a single
diagonal entry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import logical_one, logical_zero
from .core import DensityMatrix
from .noise import ReadoutModel, estimate_pauli_expectation
from .pauli import (StabilizerTerm, expand_group,
                    fifth_stabilizer_coefficients, five_qubit_generators)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# operator basis of the process matrix
CHI_BASIS = (np.eye(2, dtype=complex), _X, -1j * _Y, _Z)
CHI_BASIS_LABELS = ("I", "X", "-iY", "Z")

QPT_INPUT_LABELS = ("0", "1", "+", "+i")


def stabilizer_expansion(a: complex, b: complex) -> list[StabilizerTerm]:
    """The 32 stabilizer-group terms whose mean expectation is the fidelity."""
    fifth = fifth_stabilizer_coefficients(a, b)
    return expand_group(five_qubit_generators(), fifth)


def stabilizer_fidelity(rho: DensityMatrix, a: complex, b: complex) -> float:
    """Fidelity against a|0>_L + b|1>_L from the 32-term expansion.

    Equals the direct overlap <psi|rho|psi>; the expansion route is what a
    stabilizer-measurement experiment can evaluate.
    """
    terms = stabilizer_expansion(a, b)
    return sum(t.expectation(rho) for t in terms) / len(terms)


def syndrome_success_probability(expectations) -> float:
    """prod_i (|p_i| + 1)/2 over the four generator expectation values."""
    out = 1.0
    for p in expectations:
        if abs(p) > 1 + 1e-12:
            raise ValueError(f"expectation {p} outside [-1, 1]")
        out *= (abs(p) + 1.0) / 2.0
    return out


# ---------------------------------------------------------------------------
# code-space projection


def _logical_operators() -> dict[str, np.ndarray]:
    """I_L, X_L, Y_L, Z_L as rank-two operators built from the logical basis."""
    zero = logical_zero().amplitudes
    one = logical_one().amplitudes
    plus = (zero + one) / np.sqrt(2)
    minus = (zero - one) / np.sqrt(2)
    plus_i = (zero + 1j * one) / np.sqrt(2)
    minus_i = (zero - 1j * one) / np.sqrt(2)

    def proj(v):
        return np.outer(v, v.conj())

    return {
        "I": proj(zero) + proj(one),
        "X": proj(plus) - proj(minus),
        "Y": proj(plus_i) - proj(minus_i),
        "Z": proj(zero) - proj(one),
    }


_LOGICAL_OPS = None


def logical_operators() -> dict[str, np.ndarray]:
    global _LOGICAL_OPS
    if _LOGICAL_OPS is None:
        _LOGICAL_OPS = _logical_operators()
    return _LOGICAL_OPS


@dataclass(frozen=True)
class CodeSpaceProjection:
    """Raw logical-Pauli expectations and the normalized logical qubit."""

    p_identity: float
    p_x: float
    p_y: float
    p_z: float
    rho_logical: np.ndarray

    @property
    def bloch(self) -> tuple[float, float, float]:
        return (self.p_x / self.p_identity, self.p_y / self.p_identity,
                self.p_z / self.p_identity)

    def logical_fidelity(self, a: complex, b: complex) -> float:
        psi = np.array([a, b])
        return float(np.real(psi.conj() @ self.rho_logical @ psi))


def project_code_space(rho: DensityMatrix,
                       min_weight: float = 1e-9) -> CodeSpaceProjection:
    """Project a five-qubit state onto the code space.

    Raises when the code-space weight P_I is below ``min_weight`` (the
    normalized quantities are undefined there, e.g. right after an
    uncorrected error).
    """
    ops = logical_operators()
    p = {k: float(np.real(np.trace(rho.matrix @ op)))
         for k, op in ops.items()}
    if p["I"] <= min_weight:
        raise ValueError(f"state has no code-space weight (P_I = {p['I']:.3e})")
    bloch = np.array([p["X"], p["Y"], p["Z"]]) / p["I"]
    rho_l = 0.5 * (np.eye(2, dtype=complex)
                   + bloch[0] * _X + bloch[1] * _Y + bloch[2] * _Z)
    if np.linalg.norm(bloch) > 1 + 1e-9:
        rho_l = mle_physical(rho_l)
    return CodeSpaceProjection(p["I"], p["X"], p["Y"], p["Z"], rho_l)


# ---------------------------------------------------------------------------
# physicality restoration


def mle_physical(matrix: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) unit-trace PSD matrix to a Hermitian input.

    Eigenvalue truncation with redistribution: clip the most negative
    eigenvalues to zero and spread the deficit uniformly over the rest,
    which is the closest PSD spectrum under the trace constraint.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if not np.allclose(matrix, matrix.conj().T, atol=1e-9):
        raise ValueError("input must be Hermitian")
    vals, vecs = np.linalg.eigh(matrix)
    vals = vals.real / vals.real.sum()
    order = np.argsort(vals)  # ascending
    vals = vals[order]
    vecs = vecs[:, order]
    d = len(vals)
    accumulator = 0.0
    out = vals.copy()
    for i in range(d):
        remaining = d - i
        if out[i] + accumulator / remaining < 0:
            accumulator += out[i]
            out[i] = 0.0
        else:
            out[i:] += accumulator / remaining
            break
    return (vecs * out) @ vecs.conj().T


# ---------------------------------------------------------------------------
# single-qubit state tomography


def bloch_vector(rho2: np.ndarray) -> tuple[float, float, float]:
    return tuple(float(np.real(np.trace(rho2 @ s))) for s in (_X, _Y, _Z))


def rho_from_bloch(x: float, y: float, z: float) -> np.ndarray:
    return 0.5 * (np.eye(2, dtype=complex) + x * _X + y * _Y + z * _Z)


def qst_single_qubit(expectations: dict[str, float]) -> np.ndarray:
    """2x2 state from X/Y/Z expectation values, made physical by MLE."""
    missing = {"X", "Y", "Z"} - set(expectations)
    if missing:
        raise ValueError(f"missing basis data: {sorted(missing)}")
    rho = rho_from_bloch(expectations["X"], expectations["Y"],
                         expectations["Z"])
    return mle_physical(rho)


def sampled_qst_single_qubit(rho: DensityMatrix, shots: int,
                             readout: ReadoutModel | None = None,
                             rng=None) -> np.ndarray:
    """Shot-limited single-qubit QST with optional readout correction."""
    if rho.num_qubits != 1:
        raise ValueError("single-qubit state expected")
    expectations = {
        axis: estimate_pauli_expectation(rho, axis, shots, readout, rng)
        for axis in ("X", "Y", "Z")
    }
    return qst_single_qubit(expectations)


# ---------------------------------------------------------------------------
# process tomography


def qpt_single_qubit(outputs: list[np.ndarray],
                     make_physical: bool = True) -> np.ndarray:
    """4x4 chi matrix from the channel outputs for inputs |0>,|1>,|+>,|+i>.

    Linear inversion in the {I, X, -iY, Z} basis; optionally projected back
    to a PSD matrix of the same trace.
    """
    if len(outputs) != 4:
        raise ValueError("need outputs for the four standard inputs")
    r0, r1, rp, rpi = (np.asarray(o, dtype=complex) for o in outputs)
    e01 = rp + 1j * rpi - 0.5 * (1 + 1j) * (r0 + r1)
    e10 = rp - 1j * rpi - 0.5 * (1 - 1j) * (r0 + r1)
    s = np.block([[r0, e01], [e10, r1]])
    lam = 0.5 * np.block([[np.eye(2), _X], [_X, -np.eye(2)]])
    chi = lam @ s @ lam
    if make_physical:
        trace = np.trace(chi).real
        chi = mle_physical(chi) * trace
    return chi


def qpt_inputs() -> dict[str, np.ndarray]:
    """Density matrices of the four standard tomography inputs."""
    out = {}
    for label in QPT_INPUT_LABELS:
        amps = {"0": (1, 0), "1": (0, 1),
                "+": (1 / np.sqrt(2), 1 / np.sqrt(2)),
                "+i": (1 / np.sqrt(2), 1j / np.sqrt(2))}[label]
        v = np.array(amps, dtype=complex)
        out[label] = np.outer(v, v.conj())
    return out


def chi_of_unitary(u: np.ndarray) -> np.ndarray:
    """Exact chi matrix of a single-qubit unitary channel."""
    return chi_of_kraus([u])


def chi_of_kraus(kraus: list[np.ndarray]) -> np.ndarray:
    """Exact chi matrix of a channel given by Kraus operators."""
    chi = np.zeros((4, 4), dtype=complex)
    gram = np.array([[np.trace(a.conj().T @ b) / 2 for b in CHI_BASIS]
                     for a in CHI_BASIS])
    inv = np.linalg.inv(gram)
    for k in kraus:
        coeffs = np.array([np.trace(b.conj().T @ k) / 2 for b in CHI_BASIS])
        coeffs = inv @ coeffs
        chi += np.outer(coeffs, coeffs.conj())
    return chi


def process_fidelity(chi_exp: np.ndarray, chi_ideal: np.ndarray) -> float:
    """Trace overlap of two chi matrices (the ideal one pure, trace one)."""
    val = complex(np.trace(chi_ideal @ chi_exp))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
        raise ValueError(f"process fidelity came out complex: {val}")
    return float(val.real)


def chi_of_logical_pauli(axis: str) -> np.ndarray:
    """Ideal chi of a logical Pauli: one diagonal entry in the basis order."""
    chi = np.zeros((4, 4), dtype=complex)
    chi["IXYZ".index(axis), "IXYZ".index(axis)] = 1.0
    return chi


def chi_identity() -> np.ndarray:
    return chi_of_logical_pauli("I")


# ---------------------------------------------------------------------------
# sampled stabilizer fidelity


def sampled_stabilizer_fidelity(rho: DensityMatrix, a: complex, b: complex,
                                shots: int,
                                readout: ReadoutModel | None = None,
                                rng=None) -> float:
    """Shot-based estimate of the 32-term stabilizer fidelity."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    total = 0.0
    for term in stabilizer_expansion(a, b):
        est = 0.0
        for coeff, pstring in term.parts:
            est += coeff * estimate_pauli_expectation(
                rho, pstring.letters, shots, readout, rng)
        total += est
    return total / 32.0
