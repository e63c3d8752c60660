"""Pauli algebra, stabilizer group structure and syndrome maps."""
import numpy as np
import pytest

from fiveqec.code import logical_amplitudes, logical_state
from fiveqec.pauli import (PauliString, build_syndrome_table, expand_group,
                           fifth_stabilizer_coefficients,
                           five_qubit_generators, logical_pauli_string,
                           relabel_pauli, relabeled_generators,
                           single_qubit_errors, syndrome_of_error,
                           two_qubit_errors)

GENS = five_qubit_generators()


class TestMultiplication:
    def test_self_product_is_identity(self):
        p = PauliString("XZYXI")
        out = p * p
        assert out.letters == "IIIII" and out.phase == 1

    def test_xz_convention(self):
        out = PauliString("X") * PauliString("Z")
        assert out.letters == "Y" and out.phase == -1j

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            PauliString("XX") * PauliString("X")

    def test_against_dense_matrices(self):
        # phase-tracked product must equal the literal matrix product
        rng = np.random.default_rng(42)
        letters = "IXYZ"
        for _ in range(200):
            n = int(rng.integers(1, 6))
            a = PauliString("".join(rng.choice(list(letters), size=n)))
            b = PauliString("".join(rng.choice(list(letters), size=n)))
            assert np.allclose((a * b).matrix(), a.matrix() @ b.matrix(),
                               atol=1e-12)

    def test_generator_products_match_dense(self):
        prod = GENS[0] * GENS[1]
        assert np.allclose(prod.matrix(), GENS[0].matrix() @ GENS[1].matrix())


class TestCommutation:
    def test_generators_commute_pairwise(self):
        for i, a in enumerate(GENS):
            for b in GENS.generators[i + 1:]:
                assert a.commutes(b)
                # dense commutator oracle
                comm = a.matrix() @ b.matrix() - b.matrix() @ a.matrix()
                assert np.allclose(comm, 0, atol=1e-12)

    def test_x_z_anticommute(self):
        assert not PauliString("X").commutes(PauliString("Z"))

    def test_identity_commutes_with_everything(self):
        eye = PauliString("IIIII")
        for err in single_qubit_errors() + two_qubit_errors():
            assert eye.commutes(err)

    def test_commutes_matches_dense_on_random_pairs(self):
        rng = np.random.default_rng(9)
        for _ in range(60):
            n = int(rng.integers(1, 5))
            a = PauliString("".join(rng.choice(list("IXYZ"), size=n)))
            b = PauliString("".join(rng.choice(list("IXYZ"), size=n)))
            comm = a.matrix() @ b.matrix() - b.matrix() @ a.matrix()
            assert a.commutes(b) == np.allclose(comm, 0, atol=1e-12)

    def test_generators_commute_with_logical_operators(self):
        for axis in "XZ":
            log = logical_pauli_string(axis)
            for g in GENS:
                assert g.commutes(log)


class TestSyndromes:
    def test_identity_error_trivial_syndrome(self):
        assert syndrome_of_error(PauliString("IIIII")) == (1, 1, 1, 1)

    def test_known_single_qubit_syndromes(self):
        assert syndrome_of_error(PauliString("XIIII")) == (1, 1, 1, -1)
        assert syndrome_of_error(PauliString("ZIIII")) == (-1, 1, -1, 1)

    def test_syndromes_match_dense_anticommutation(self):
        # oracle: sign from the dense (anti)commutator of error and generator
        for err in single_qubit_errors():
            expected = []
            for g in GENS:
                anti = err.matrix() @ g.matrix() + g.matrix() @ err.matrix()
                expected.append(-1 if np.allclose(anti, 0, atol=1e-12) else 1)
            assert syndrome_of_error(err) == tuple(expected)

    def test_table_is_bijective(self):
        table = build_syndrome_table()
        assert len(table) == 15
        values = set(table.values())
        assert len(values) == 15
        assert (1, 1, 1, 1) not in values
        # together with the trivial syndrome they exhaust all 16 patterns
        assert values | {(1, 1, 1, 1)} == {
            tuple(1 - 2 * ((m >> i) & 1) for i in range(4))
            for m in range(16)}

    def test_every_weight_two_error_detected(self):
        syndromes = [syndrome_of_error(e) for e in two_qubit_errors()]
        assert len(syndromes) == 90
        assert all(min(s) == -1 for s in syndromes)

    def test_weight_two_syndromes_collide(self):
        # detectable but not correctable: some pair shares a syndrome
        syndromes = [syndrome_of_error(e) for e in two_qubit_errors()]
        assert len(set(syndromes)) < len(syndromes)


class TestRelabeling:
    def test_relabeled_generator_strings(self):
        sources = (0, 4, 1, 3, 2)
        gens = relabeled_generators(sources)
        assert [g.letters for g in gens] == ["XIZXZ", "IXXZZ", "XZIZX",
                                             "ZZXXI"]

    def test_relabeling_is_conjugation(self):
        # permutation-matrix oracle for one generator
        sources = (0, 4, 1, 3, 2)
        perm = np.zeros((32, 32))
        for idx in range(32):
            bits = [(idx >> (4 - q)) & 1 for q in range(5)]
            nb = [bits[sources[w]] for w in range(5)]
            j = sum(b << (4 - w) for w, b in enumerate(nb))
            perm[j, idx] = 1
        for g in GENS:
            relabeled = relabel_pauli(g, sources)
            assert np.allclose(relabeled.matrix(),
                               perm @ g.matrix() @ perm.T, atol=1e-12)


class TestGroupExpansion:
    def test_term_count_and_identity_term(self):
        terms = expand_group(GENS, (1.0, 0.0, 0.0))
        assert len(terms) == 32
        g0 = [t for t in terms if t.label == "g0"]
        assert len(g0) == 1
        assert g0[0].parts[0][1].letters == "IIIII"

    def test_magic_state_fifth_coefficients(self):
        a, b = logical_amplitudes("T")
        cz, cx, cy = fifth_stabilizer_coefficients(a, b)
        assert cz == pytest.approx(0.0, abs=1e-12)
        assert cx == pytest.approx(np.sqrt(2) / 2)
        assert cy == pytest.approx(np.sqrt(2) / 2)

    def test_unnormalized_coefficients_rejected(self):
        with pytest.raises(ValueError):
            expand_group(GENS, (1.0, 1.0, 0.0))

    @pytest.mark.parametrize("label", ["0", "T", "+i"])
    def test_weighted_sum_is_logical_projector(self, label):
        a, b = logical_amplitudes(label)
        terms = expand_group(GENS, fifth_stabilizer_coefficients(a, b))
        total = sum(t.matrix() for t in terms) / 32.0
        psi = logical_state(a, b).amplitudes
        projector = np.outer(psi, psi.conj())
        assert np.allclose(total, projector, atol=1e-10)

    def test_expectations_on_ideal_state_are_one(self):
        a, b = logical_amplitudes("T")
        rho = np.outer(logical_state(a, b).amplitudes,
                       logical_state(a, b).amplitudes.conj())
        for term in expand_group(GENS, fifth_stabilizer_coefficients(a, b)):
            assert term.expectation(rho) == pytest.approx(1.0, abs=1e-10)

    def test_g1g2_expectation_on_magic_state(self):
        a, b = logical_amplitudes("T")
        psi = logical_state(a, b).amplitudes
        rho = np.outer(psi, psi.conj())
        prod = GENS[0] * GENS[1]
        # dense trace oracle
        dense = float(np.real(np.trace(rho @ prod.matrix())))
        assert prod.expectation(rho) == pytest.approx(dense, abs=1e-12)
        assert dense == pytest.approx(1.0, abs=1e-10)


class TestObservables:
    def test_expectation_requires_hermitian_phase(self):
        rho = np.eye(2) / 2
        with pytest.raises(ValueError):
            PauliString("X", 1j).expectation(rho)

    def test_maximally_mixed_expectations(self):
        rho = np.eye(32) / 32
        assert PauliString("ZIIII").expectation(rho) == pytest.approx(0.0)
        for g in GENS:
            assert g.expectation(rho) == pytest.approx(0.0, abs=1e-12)

    def test_text_rendering(self):
        assert str(PauliString("XZZXI")) == "XZZXI"
        assert str(PauliString("Y", -1)) == "-Y"
        assert str(PauliString("XZ", 1j)) == "+iXZ"
