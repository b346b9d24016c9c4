import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussact.activation import (
    ActivationParams,
    BracketError,
    CircuitSpec,
    TMSStep,
    build_activation_circuit,
    eac_channel,
    eac_environment_photons,
    eac_noise_m,
    extract_induced_channel,
    optimal_gprime,
    rejected_af_channel,
)
from gaussact.channels import (
    DEGENERATE,
    PHASE_CONJUGATION,
    RANDOM_DISPLACEMENT,
    amplification,
    classify,
    phase_conjugation,
    q_lower_bound,
)
from gaussact.symplectic import SQUEEZE, symplectic_residual
from oracles import activation_mode_coefficients, n_e_scan, noise_m_scan

gain = st.floats(min_value=1.0 + 1e-9, max_value=5.0)
gain_ge1 = st.floats(min_value=1.0, max_value=5.0)
params = st.builds(ActivationParams, gain, gain_ge1, gain_ge1)


class TestParams:
    @pytest.mark.parametrize("args", [(1.0, 1.0, 1.0), (2.0, 0.9, 1.0), (2.0, 1.0, 0.5)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            ActivationParams(*args)


class TestNoise:
    def test_no_entangler(self):
        # m = G'' + (G'' - 1) G
        assert eac_noise_m(ActivationParams(2.0, 1.0, 2.0)) == pytest.approx(4.0, abs=1e-14)

    @pytest.mark.parametrize("Gp", [1.0, 1.7, 6.0])
    def test_no_anti_squeezer(self, Gp):
        assert eac_noise_m(ActivationParams(2.3, Gp, 1.0)) == pytest.approx(2 * Gp - 1, rel=1e-14)

    def test_quantum_limited_point(self):
        assert eac_noise_m(ActivationParams(1.8, 10.0, 2.0)) == pytest.approx(0.2, abs=1e-14)

    @settings(max_examples=300, deadline=None)
    @given(gain, gain_ge1, gain_ge1)
    def test_matches_hand_expansion(self, G, Gp, Gpp):
        ann, cre = activation_mode_coefficients(G, Gp, Gpp)["alpha_out"]
        # alpha_out = t b + c_alpha alpha + c_idler a^dagger
        assert cre[0] == 0 and ann[1] == 0 and cre[2] == 0
        expected = ann[2] ** 2 + cre[1] ** 2
        assert eac_noise_m(ActivationParams(G, Gp, Gpp)) == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(params)
    def test_cptp_bound(self, p):
        assert eac_noise_m(p) >= abs(1 - p.tau) - 1e-12


class TestEACChannel:
    def test_tau_one_line(self):
        for Gp in (1.0, 3.0, 17.0):
            inv = classify(eac_channel(ActivationParams(1.8, Gp, 2.25)))
            assert inv.tau == pytest.approx(1.0, abs=1e-12)
            assert inv.class_label == RANDOM_DISPLACEMENT

    def test_noise_cancellation_point(self):
        ch = eac_channel(ActivationParams(1.8, 10.0, 2.0))
        inv = classify(ch)
        assert inv.tau == pytest.approx(0.8, abs=1e-14)
        assert inv.n_e == pytest.approx(0.0, abs=1e-12)
        assert q_lower_bound(ch) == pytest.approx(2.0, abs=1e-9)

    def test_no_anti_squeezer_is_degenerate(self):
        ch = eac_channel(ActivationParams(2.0, 3.0, 1.0))
        np.testing.assert_array_equal(ch.T, np.zeros((2, 2)))
        assert classify(ch).class_label == DEGENERATE
        assert q_lower_bound(ch) == 0.0

    def test_transfer_matrix(self):
        p = ActivationParams(2.5, 1.3, 3.0)
        ch = eac_channel(p)
        np.testing.assert_allclose(ch.T, -math.sqrt(1.5 * 2.0) * np.eye(2), rtol=1e-15)
        np.testing.assert_array_equal(ch.d, [0.0, 0.0])

    @settings(max_examples=200, deadline=None)
    @given(params)
    def test_det_transfer_nonnegative(self, p):
        ch = eac_channel(p)
        assert ch.tau == pytest.approx((p.G - 1) * (p.G_pp - 1), rel=1e-12, abs=1e-15)
        assert ch.tau >= 0


class TestCircuit:
    def test_layout(self):
        c = build_activation_circuit(ActivationParams(2.0, 3.0, 4.0))
        assert c.n_modes == 3
        assert c.input_occupations == (0.0, 0.0, 0.0)
        assert [(s.gain, s.sign, s.modes) for s in c.ops] == [
            (3.0, "squeeze", (1, 2)),
            (2.0, "squeeze", (1, 0)),
            (4.0, "anti_squeeze", (1, 2)),
        ]

    def test_trivial_squeezers(self):
        c = build_activation_circuit(ActivationParams(2.0, 1.0, 1.0))
        ch = extract_induced_channel(c, 0, 1)
        pc = phase_conjugation(2.0)
        np.testing.assert_allclose(ch.T, pc.T, atol=1e-15)
        np.testing.assert_allclose(ch.N, pc.N, atol=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(params)
    def test_total_map_symplectic(self, p):
        assert symplectic_residual(build_activation_circuit(p).symplectic().matrix) < 1e-11

    @settings(max_examples=200, deadline=None)
    @given(params)
    def test_commutator_preserved(self, p):
        # for alpha_out = t b + c_alpha alpha + c_idler a^dagger:
        # t^2 + c_alpha^2 - c_idler^2 = 1, read off the symplectic rows
        S = build_activation_circuit(p).symplectic().matrix
        dets = [np.linalg.det(S[4:6, 2 * k : 2 * k + 2]) for k in range(3)]
        assert sum(dets) == pytest.approx(1.0, abs=1e-10)
        assert dets[1] <= 1e-12  # conjugated idler contributes with a minus sign
        assert dets[0] == pytest.approx(p.tau, rel=1e-10, abs=1e-12)

    def test_invalid_circuits(self):
        with pytest.raises(ValueError):
            CircuitSpec(2, (0.0,), ())
        with pytest.raises(ValueError):
            CircuitSpec(2, (0.0, 0.0), (TMSStep(2.0, SQUEEZE, (0, 0)),))
        with pytest.raises(ValueError):
            CircuitSpec(2, (0.0, -1.0), ())
        with pytest.raises(ValueError):
            CircuitSpec(2, (0.0, 0.0), (TMSStep(0.5, SQUEEZE, (0, 1)),))


class TestExtraction:
    def test_empty_circuit(self):
        ch = extract_induced_channel(CircuitSpec(2, (0.0, 0.0), ()), 0, 0)
        np.testing.assert_array_equal(ch.T, np.eye(2))
        np.testing.assert_array_equal(ch.N, np.zeros((2, 2)))

    def test_bad_modes(self):
        with pytest.raises(ValueError):
            extract_induced_channel(CircuitSpec(2, (0.0, 0.0), ()), 0, 2)

    @settings(max_examples=300, deadline=None)
    @given(params)
    def test_matches_closed_form(self, p):
        numeric = extract_induced_channel(build_activation_circuit(p), 0, 2)
        closed = eac_channel(p)
        np.testing.assert_allclose(numeric.T, closed.T, atol=1e-10)
        np.testing.assert_allclose(numeric.N, closed.N, atol=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(params, st.lists(st.floats(0, 3), min_size=3, max_size=3))
    def test_thermal_environment(self, p, occ):
        c = build_activation_circuit(p)
        hot = CircuitSpec(3, tuple(occ), c.ops)
        ch = extract_induced_channel(hot, 0, 2)
        ann, cre = activation_mode_coefficients(p.G, p.G_p, p.G_pp)["alpha_out"]
        expected = (2 * occ[2] + 1) * ann[2] ** 2 + (2 * occ[1] + 1) * cre[1] ** 2
        np.testing.assert_allclose(ch.N, expected * np.eye(2), rtol=1e-9, atol=1e-12)


class TestRejectedChannel:
    def test_determinant(self):
        ch = rejected_af_channel(ActivationParams(2.0, 3.0, 2.0))
        assert ch.tau == pytest.approx(-2.0, rel=1e-12)
        t = math.sqrt(2.0 * 1.0)
        np.testing.assert_allclose(ch.T, np.diag([t, -t]), atol=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(params)
    def test_phase_conjugating(self, p):
        ch = rejected_af_channel(p)
        inv = classify(ch)
        assert inv.class_label == PHASE_CONJUGATION
        assert inv.tau == pytest.approx(-p.G_pp * (p.G - 1), rel=1e-10)
        assert q_lower_bound(ch) == 0.0

    @pytest.mark.parametrize("G, Gp", [(1.5, 1.0), (2.0, 3.0), (4.0, 1.2)])
    def test_without_anti_squeezer(self, G, Gp):
        # the idler enters thermalised by the entangler, with G' - 1 photons
        ch = rejected_af_channel(ActivationParams(G, Gp, 1.0))
        ref = phase_conjugation(G, Gp - 1)
        np.testing.assert_allclose(ch.T, ref.T, atol=1e-12)
        np.testing.assert_allclose(ch.N, ref.N, rtol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(params)
    def test_noise_matches_hand_expansion(self, p):
        ann, cre = activation_mode_coefficients(p.G, p.G_p, p.G_pp)["a_f"]
        noise = ann[1] ** 2 + cre[2] ** 2
        np.testing.assert_allclose(rejected_af_channel(p).N, noise * np.eye(2), rtol=1e-10)


class TestOptimalGprime:
    def test_dense_scan_oracle(self):
        grid = np.arange(1.0, 50.0 + 1e-12, 1e-4)
        values = n_e_scan(1.8, 2.0, grid)
        scan_best = grid[np.argmin(values)]
        assert scan_best == pytest.approx(10.0, abs=1e-4)
        gp, n_e = optimal_gprime(1.8, 2.0)
        assert gp == pytest.approx(10.0, abs=1e-3)
        assert abs(gp - scan_best) < 2e-4
        assert n_e < 1e-9
        assert n_e <= values.min() + 1e-10

    @pytest.mark.parametrize("G, Gpp", [(1.5, 2.0), (2.5, 2.0), (1.2, 4.0), (3.0, 1.4), (1.8, 3.0)])
    def test_matches_scan(self, G, Gpp):
        tau = (G - 1) * (Gpp - 1)
        gp, n_e = optimal_gprime(G, Gpp)
        grid = np.linspace(max(1.0, gp - 1.0), gp + 1.0, 200001)
        values = n_e_scan(G, Gpp, grid)
        assert n_e <= values.min() + 1e-10
        # noise reaches the quantum limit |1 - tau|
        m = eac_noise_m(ActivationParams(G, gp, Gpp))
        assert m == pytest.approx(abs(1 - tau), abs=1e-9)
        assert n_e == pytest.approx(0.0, abs=1e-9)

    def test_near_unit_anti_squeezer(self):
        gp, n_e = optimal_gprime(1.8, 1.0 + 1e-7)
        assert gp == pytest.approx(1.0, abs=1e-5)
        assert n_e < 1e-9

    def test_tau_one_rejected(self):
        with pytest.raises(ValueError):
            optimal_gprime(2.0, 2.0)

    def test_boundary_noise_vanishes_along_tau_one(self):
        values = noise_m_scan(2.0, 2.0, np.array([10.0, 1e3, 1e6]))
        assert np.all(np.diff(values) < 0)
        assert values[-1] < 1e-5

    def test_bracket_exhaustion(self):
        with pytest.raises(BracketError) as info:
            optimal_gprime(1.8, 2.2499, g_max=1e3)
        assert info.value.bracket[1] > info.value.bracket[0]

    def test_rejects_unit_anti_squeezer(self):
        with pytest.raises(ValueError):
            optimal_gprime(1.8, 1.0)


class TestFigureClaims:
    def test_peak_height(self):
        for G in (1.5, 1.8, 2.5):
            tau = (G - 1) * 1.0
            gp, _ = optimal_gprime(G, 2.0)
            q = q_lower_bound(eac_channel(ActivationParams(G, gp, 2.0)))
            assert q == pytest.approx(max(0.0, math.log2(abs(tau / (1 - tau)))), abs=1e-8)

    def test_no_cloning_guard(self):
        for G in (1.5, 1.8, 2.5):
            for Gp in np.arange(1.0, 30.0 + 1e-9, 0.1):
                q = q_lower_bound(eac_channel(ActivationParams(G, Gp, 2.0)))
                q_amp = q_lower_bound(amplification(G, Gp - 1))
                assert not (q > 0 and q_amp > 0)

    def test_argmax_is_argmin(self):
        grid = np.linspace(1.0, 30.0, 600)
        for G in (1.5, 1.8, 2.5):
            qs = [q_lower_bound(eac_channel(ActivationParams(G, gp, 2.0))) for gp in grid]
            ne = [eac_environment_photons(ActivationParams(G, gp, 2.0)) for gp in grid]
            if max(qs) > 0:
                assert int(np.argmax(qs)) == int(np.argmin(ne))

    def test_environment_photons_tau_one(self):
        with pytest.raises(ValueError):
            eac_environment_photons(ActivationParams(2.0, 3.0, 2.0))
