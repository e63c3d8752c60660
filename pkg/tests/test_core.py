"""Gate application, channels, partial trace and circuit composition."""
import numpy as np
import pytest

from fiveqec.core import (GATE_KINDS, Circuit, DensityMatrix, Gate, Layer,
                          StateVector, circuit_unitary,
                          equal_up_to_global_phase, partial_trace,
                          state_fidelity)


def kron_all(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def embed(u, targets, n):
    """Dense embedding oracle: permutation-free only for sorted targets."""
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    k = len(targets)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_col = 0
        for t in targets:
            sub_col = (sub_col << 1) | bits[t]
        for sub_row in range(2 ** k):
            amp = u[sub_row, sub_col]
            if amp == 0:
                continue
            nb = bits[:]
            for i, t in enumerate(targets):
                nb[t] = (sub_row >> (k - 1 - i)) & 1
            row = 0
            for b in nb:
                row = (row << 1) | b
            out[row, col] += amp
    return out


class TestGates:
    def test_hadamard_on_zero(self):
        sv = StateVector.from_ket("0").apply_gate(Gate("h", (0,)))
        assert np.allclose(sv.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_cz_phase_on_11(self):
        sv = StateVector.from_ket("11").apply_gate(Gate("cz", (0, 1)))
        expected = np.zeros(4)
        expected[3] = -1
        assert np.allclose(sv.amplitudes, expected)

    def test_zyz_rotation_matches_matrix_product(self):
        # independent oracle: multiply the three 2x2 matrices by hand
        sv = StateVector.from_ket("0")
        for kind, angle in (("rz", 0.5), ("ry", 0.5), ("rz", 0.5)):
            sv = sv.apply_gate(Gate(kind, (0,), angle))
        def rz(a):
            return np.diag([np.exp(-1j * a * np.pi / 2),
                            np.exp(1j * a * np.pi / 2)])
        def ry(a):
            h = a * np.pi / 2
            return np.array([[np.cos(h), -np.sin(h)],
                             [np.sin(h), np.cos(h)]])
        expected = rz(0.5) @ ry(0.5) @ rz(0.5) @ np.array([1, 0])
        assert np.allclose(sv.amplitudes, expected, atol=1e-12)

    def test_every_gate_kind_is_unitary(self):
        for kind in GATE_KINDS:
            angle = 0.37 if kind in ("rx", "ry", "rz") else None
            targets = (0, 1) if kind in ("cz", "cnot", "swap") else (0,)
            u = Gate(kind, targets, angle).matrix()
            assert np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-12), kind

    def test_gate_inverses(self):
        for kind in GATE_KINDS:
            angle = -1.2 if kind in ("rx", "ry", "rz") else None
            targets = (0, 1) if kind in ("cz", "cnot", "swap") else (0,)
            g = Gate(kind, targets, angle)
            prod = g.inverse().matrix() @ g.matrix()
            assert np.allclose(prod, np.eye(len(prod)), atol=1e-12), kind

    def test_gate_validation(self):
        with pytest.raises(ValueError):
            Gate("h", (0, 1))
        with pytest.raises(ValueError):
            Gate("cz", (1, 1))
        with pytest.raises(ValueError):
            Gate("ry", (0,))
        with pytest.raises(ValueError):
            Gate("frob", (0,))

    def test_out_of_range_target(self):
        with pytest.raises(ValueError):
            StateVector(2).apply_gate(Gate("x", (2,)))

    def test_application_matches_dense_embedding(self):
        # tensordot path against an explicit dense embedding oracle
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(2, 5))
            kind = rng.choice(["h", "s", "ry", "cz", "cnot", "swap"])
            angle = float(rng.uniform(0, 2)) if kind == "ry" else None
            k = 2 if kind in ("cz", "cnot", "swap") else 1
            targets = tuple(rng.choice(n, size=k, replace=False).tolist())
            gate = Gate(kind, targets, angle)
            amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
            amps /= np.linalg.norm(amps)
            got = StateVector(n, amps).apply_gate(gate).amplitudes
            want = embed(gate.matrix(), targets, n) @ amps
            assert np.allclose(got, want, atol=1e-12)


class TestChannels:
    def test_identity_channel(self):
        rho = DensityMatrix(1, np.array([[0.3, 0.1], [0.1, 0.7]]))
        out = rho.apply_channel([np.eye(2, dtype=complex)], 0)
        assert np.allclose(out.matrix, rho.matrix)

    def test_full_amplitude_damping(self):
        e1 = np.array([[1, 0], [0, 0]], dtype=complex)
        e2 = np.array([[0, 1], [0, 0]], dtype=complex)
        rng = np.random.default_rng(0)
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = m @ m.conj().T
        rho = DensityMatrix(1, rho / np.trace(rho))
        out = rho.apply_channel([e1, e2], 0)
        assert np.allclose(out.matrix, np.diag([1, 0]), atol=1e-12)

    def test_half_damping_on_excited_state(self):
        # hand evaluation of E1 rho E1+ + E2 rho E2+ at gamma = 0.5
        gamma = 0.5
        e1 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
        e2 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
        rho = DensityMatrix(1, np.diag([0, 1]).astype(complex))
        out = rho.apply_channel([e1, e2], 0)
        assert np.allclose(out.matrix, np.diag([0.5, 0.5]), atol=1e-12)

    def test_non_trace_preserving_rejected(self):
        bad = [np.array([[1, 0], [0, 0.5]], dtype=complex)]
        with pytest.raises(ValueError):
            DensityMatrix(1).apply_channel(bad, 0)


class TestPartialTrace:
    def test_product_state(self):
        rho = StateVector.from_ket("00").density_matrix()
        out = partial_trace(rho, (0,))
        assert np.allclose(out.matrix, np.diag([1, 0]))

    def test_bell_state_marginal(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = amps[3] = 1 / np.sqrt(2)
        rho = StateVector(2, amps).density_matrix()
        out = partial_trace(rho, (0,))
        assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved_on_random_states(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
            rho = m @ m.conj().T
            rho = DensityMatrix(3, rho / np.trace(rho))
            keep = tuple(sorted(rng.choice(3, size=int(rng.integers(1, 3)),
                                           replace=False).tolist()))
            out = partial_trace(rho, keep)
            assert abs(out.trace() - 1.0) < 1e-12

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(DensityMatrix(2), ())


class TestFidelityAndUnitary:
    def test_fidelity_basics(self):
        zero = StateVector.from_ket("0")
        one = StateVector.from_ket("1")
        rho0 = zero.density_matrix()
        assert state_fidelity(rho0, zero) == pytest.approx(1.0)
        assert state_fidelity(rho0, one) == pytest.approx(0.0, abs=1e-15)
        mixed = DensityMatrix(1, np.eye(2) / 2)
        plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
        assert state_fidelity(mixed, plus) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            state_fidelity(DensityMatrix(2), StateVector(1))

    def test_empty_circuit_unitary(self):
        assert np.allclose(circuit_unitary(Circuit(2)), np.eye(4))

    def test_single_cz_unitary(self):
        circ = Circuit(2, [Layer((Gate("cz", (0, 1)),))])
        assert np.allclose(circuit_unitary(circ), np.diag([1, 1, 1, -1]))

    def test_composition_order(self):
        rng = np.random.default_rng(3)
        def random_circuit(n, depth):
            layers = []
            for _ in range(depth):
                q = int(rng.integers(0, n))
                kind = rng.choice(["h", "s", "ry", "rz"])
                angle = float(rng.uniform(0, 2)) if kind in ("ry", "rz") else None
                layers.append(Layer((Gate(kind, (q,), angle),)))
                if rng.random() < 0.4:
                    q1, q2 = rng.choice(n, size=2, replace=False).tolist()
                    layers.append(Layer((Gate("cz", (int(q1), int(q2))),)))
            return Circuit(n, layers)
        a = random_circuit(3, 4)
        b = random_circuit(3, 4)
        combined = circuit_unitary(a + b)
        assert np.allclose(combined,
                           circuit_unitary(b) @ circuit_unitary(a),
                           atol=1e-10)

    def test_trace_and_purity_through_random_evolution(self):
        rng = np.random.default_rng(11)
        rho = DensityMatrix(3)
        for _ in range(20):
            q = int(rng.integers(0, 3))
            rho = rho.apply_gate(Gate("ry", (q,), float(rng.uniform(0, 2))))
            gamma = float(rng.uniform(0, 0.2))
            e1 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
            e2 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
            rho = rho.apply_channel([e1, e2], q)
            assert abs(rho.trace() - 1.0) < 1e-10
            assert rho.purity() <= 1 + 1e-10

    def test_layer_rejects_qubit_reuse(self):
        with pytest.raises(ValueError):
            Layer((Gate("h", (0,)), Gate("x", (0,))))

    def test_global_phase_comparison(self):
        u = np.diag([1, 1j]).astype(complex)
        assert equal_up_to_global_phase(np.exp(0.7j) * u, u)
        assert not equal_up_to_global_phase(np.diag([1, -1j]), u)


class TestQubitPermutation:
    def test_permute_density_matrix(self):
        rho = StateVector.from_ket("011").density_matrix()
        out = rho.permute_qubits((2, 0, 1))  # new p takes old sources[p]
        # old bits (0,1,1); new = (old2, old0, old1) = (1,0,1)
        expected = StateVector.from_ket("101").density_matrix()
        assert np.allclose(out.matrix, expected.matrix)
