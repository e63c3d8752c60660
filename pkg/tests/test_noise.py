"""Decoherence channels, device parameters, sampling and readout."""
import numpy as np
import pytest

from fiveqec.code import encode, logical_amplitudes, logical_state
from fiveqec.core import DensityMatrix, StateVector, state_fidelity
from fiveqec.noise import (DeviceParams, GateTiming, NoiseParams,
                           ReadoutModel, confusion_correct, decoherence_kraus,
                           estimate_pauli_expectation, paper_device,
                           pure_dephasing_time, sample_measurement)
from fiveqec.pauli import five_qubit_generators


class TestKraus:
    def test_zero_time_is_identity_channel(self):
        kraus = decoherence_kraus(30e-6, 5e-6, 0.0)
        assert np.allclose(kraus[0], np.eye(2))
        for e in kraus[1:]:
            assert np.allclose(e, 0)

    def test_trace_preserving_for_random_parameters(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            t1 = rng.uniform(1e-6, 100e-6)
            tphi = rng.uniform(1e-6, 100e-6)
            t = rng.uniform(0, min(t1, tphi / 2) * 0.9)
            kraus = decoherence_kraus(t1, tphi, t)
            total = sum(e.conj().T @ e for e in kraus)
            assert np.allclose(total, np.eye(2), atol=1e-12)

    def test_decay_probability_arithmetic(self):
        # gamma = t / T1 with the default scale factor
        kraus = decoherence_kraus(30e-6, 1e3, 30e-9)
        gamma = 1 - abs(kraus[0][1, 1]) ** 2  # dephasing part negligible
        assert gamma == pytest.approx(0.001, rel=1e-6)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            decoherence_kraus(1e-9, 1e-6, 1e-6)  # gamma > 1


class TestDephasingTime:
    def test_pure_dephasing_conversion(self):
        # direct arithmetic: 1/(1/5.5 - 1/55) microseconds
        tphi = pure_dephasing_time(27.5e-6, 5.5e-6)
        assert tphi == pytest.approx(1.0 / (1 / 5.5e-6 - 1 / 55e-6))
        assert tphi == pytest.approx(6.1111e-6, rel=1e-4)

    def test_t2star_passthrough(self):
        assert pure_dephasing_time(27.5e-6, 5.5e-6, "t2star") == 5.5e-6

    def test_diverges_as_t2_approaches_limit(self):
        t1 = 10e-6
        tphi = pure_dephasing_time(t1, 2 * t1 * (1 - 1e-9))
        assert tphi > 1.0  # seconds; effectively infinite

    def test_no_pure_dephasing_rejected(self):
        with pytest.raises(ValueError):
            pure_dephasing_time(10e-6, 20e-6)


class TestDeviceParams:
    def test_paper_profile_shape(self):
        dev = paper_device()
        assert dev.num_qubits == 5
        assert sorted(dev.chain) == [0, 1, 2, 3, 4]

    def test_validation(self):
        with pytest.raises(ValueError):
            DeviceParams(t1=(1e-6,), t2_star=(3e-6,), f00=(0.9,), f11=(0.9,),
                         chain=(0,))  # T2* > 2 T1
        with pytest.raises(ValueError):
            DeviceParams(t1=(1e-6,), t2_star=(1e-6,), f00=(0.4,), f11=(0.9,),
                         chain=(0,))

    def test_long_t2_variant(self):
        dev = paper_device().with_t2_equal_t1()
        assert dev.t2_star == dev.t1


class TestNoisyEvolution:
    def test_trace_preserved_through_noisy_encoder(self):
        params = NoiseParams(paper_device())
        rho = encode(*logical_amplitudes("T"), params)
        assert abs(rho.trace() - 1.0) < 1e-10
        assert rho.is_physical()

    def test_zero_noise_limit_matches_ideal(self):
        huge = DeviceParams(t1=(1e6,) * 5, t2_star=(1e6,) * 5,
                            f00=(1.0,) * 5, f11=(1.0,) * 5)
        params = NoiseParams(huge)
        a, b = logical_amplitudes("T")
        rho = encode(a, b, params)
        assert state_fidelity(rho, logical_state(a, b)) == pytest.approx(
            1.0, abs=1e-9)

    def test_fidelity_monotone_in_decay_rates(self):
        # shrink all coherence times together; fidelity must not increase
        a, b = logical_amplitudes("T")
        last = 1.0
        for scale in (8.0, 4.0, 2.0, 1.0, 0.5):
            dev = DeviceParams(
                t1=tuple(t * scale for t in paper_device().t1),
                t2_star=tuple(t * scale for t in paper_device().t2_star),
                f00=paper_device().f00, f11=paper_device().f11)
            fid = state_fidelity(encode(a, b, NoiseParams(dev)),
                                 logical_state(a, b))
            assert fid <= last + 1e-10
            last = fid

    def test_timing_controls_duration(self):
        from fiveqec.code import build_encoder
        fast = build_encoder("optimized", GateTiming(10e-9, 10e-9))
        slow = build_encoder("optimized", GateTiming(50e-9, 80e-9))
        assert fast.duration() < slow.duration()


class TestSampling:
    def test_ground_state_all_shots_zero(self):
        rho = StateVector.from_ket("00000").density_matrix()
        counts = sample_measurement(rho, "ZZZZZ", 500, rng=1)
        assert counts[0] == 500

    def test_readout_error_rate_on_ground_state(self):
        readout = ReadoutModel((0.98,), (0.9,))
        rho = DensityMatrix(1)
        counts = sample_measurement(rho, "Z", 200_000, readout, rng=3)
        frac_one = counts[1] / counts.sum()
        # expected 0.02, binomial three-sigma band
        assert abs(frac_one - 0.02) < 3 * np.sqrt(0.02 * 0.98 / 200_000)

    def test_generator_expectation_estimate(self):
        rho = encode(*logical_amplitudes("0"))
        g1 = five_qubit_generators()[0]
        est = estimate_pauli_expectation(rho, g1.letters, 10_000, rng=11)
        assert abs(est - 1.0) < 0.03

    def test_determinism(self):
        rho = encode(*logical_amplitudes("+"), NoiseParams(paper_device()))
        c1 = sample_measurement(rho, "XXXXX", 1000, rng=42)
        c2 = sample_measurement(rho, "XXXXX", 1000, rng=42)
        assert np.array_equal(c1, c2)

    def test_shots_validation(self):
        with pytest.raises(ValueError):
            sample_measurement(DensityMatrix(1), "Z", 0)


class TestReadoutCorrection:
    def test_perfect_readout_is_identity(self):
        readout = ReadoutModel((1.0,) * 2, (1.0,) * 2)
        probs = np.array([0.1, 0.2, 0.3, 0.4])
        assert np.allclose(readout.correct(probs), probs)

    def test_exact_inversion_in_vector_limit(self):
        readout = ReadoutModel((0.98, 0.93, 0.96), (0.83, 0.88, 0.91))
        rng = np.random.default_rng(5)
        truth = rng.dirichlet(np.ones(8))
        corrupted = readout.apply(truth)
        recovered = readout.correct(corrupted)
        assert np.allclose(recovered, truth, atol=1e-12)

    def test_finite_shot_recovery(self):
        readout = ReadoutModel((0.982, 0.932), (0.831, 0.874))
        truth = np.array([0.5, 0.0, 0.0, 0.5])
        corrupted = readout.apply(truth)
        rng = np.random.default_rng(17)
        counts = rng.multinomial(10_000, corrupted)
        recovered = confusion_correct(counts, readout)
        assert np.max(np.abs(recovered - truth)) < 0.02
        assert recovered.sum() == pytest.approx(1.0, abs=1e-9)

    def test_empty_counts_rejected(self):
        with pytest.raises(ValueError):
            confusion_correct(np.zeros(4), ReadoutModel((0.9,) * 2,
                                                        (0.9,) * 2))
