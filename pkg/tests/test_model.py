import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqpulse import model
from sqpulse.errors import ParameterError
from sqpulse.model import PulseParams, QubitSpec
from sqpulse.numerics import matrix_exp

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)
squeezing = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)
fractions = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def params(r=0.0, phi=0.0, kappa_tau=1e-4, **kw):
    return PulseParams.from_kappa_tau(kappa_tau, r=r, phi=phi, **kw)


class TestPulseParams:
    def test_derived_quantities(self):
        p = PulseParams(r=1.0, kappa_over_gamma=1e-3, gamma_tau=0.1)
        assert p.kappa_tau == pytest.approx(1e-4)
        assert p.lam == pytest.approx(math.cosh(1.0) * 1e-2)
        assert p.coupling == pytest.approx(1e-2)
        # |alpha| g tau = pi / 2
        assert p.alpha_abs * p.coupling == pytest.approx(math.pi / 2)
        assert p.dim == 12

    def test_lambda_guard(self):
        with pytest.raises(ParameterError, match="lambda"):
            PulseParams(r=3.0, kappa_over_gamma=1e-2, gamma_tau=0.1)

    def test_unsafe_lambda_warns(self):
        with pytest.warns(RuntimeWarning):
            p = PulseParams(r=3.0, kappa_over_gamma=1e-2, gamma_tau=0.1, unsafe_lambda=True)
        assert p.lambda_exceeded

    def test_markovian_guard(self):
        with pytest.raises(ParameterError, match="Markovian"):
            PulseParams(kappa_over_gamma=0.5, gamma_tau=2.0, lambda_max=10)

    @pytest.mark.parametrize("kw", [{"r": -0.1}, {"gamma_tau": 0.0}, {"n_max": 1}, {"n_max": 2.5},
                                    {"kappa_over_gamma": -1e-3}, {"phi": math.nan}])
    def test_invalid(self, kw):
        with pytest.raises(ParameterError):
            PulseParams(**kw)

    def test_zero_kappa_allowed(self):
        p = PulseParams(kappa_over_gamma=0.0)
        assert p.lam == 0 and math.isinf(p.alpha_abs)


class TestQubitSpec:
    @pytest.mark.parametrize("text,expected", [
        ("g", [1, 0]),
        ("e", [0, 1]),
        ("eq:0", [1 / math.sqrt(2), 1 / math.sqrt(2)]),
        ("eq:pi/2", [1j / math.sqrt(2), 1 / math.sqrt(2)]),
        ("bloch:pi:0", [1, 0]),
    ])
    def test_parse_amplitudes(self, text, expected):
        q = QubitSpec.parse(text)
        np.testing.assert_allclose(q.amplitudes(), expected, atol=1e-15)
        assert q.label == text

    @pytest.mark.parametrize("bad", ["x", "eq:", "bloch:1", "eq:foo"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            QubitSpec.parse(bad)

    @given(angles)
    def test_equatorial_bloch_vector(self, theta_a):
        v = QubitSpec.equatorial(theta_a).bloch_vector()
        np.testing.assert_allclose(v, [math.cos(theta_a), math.sin(theta_a), 0], atol=1e-12)

    @given(st.floats(0, math.pi), angles)
    def test_general_bloch_vector(self, polar, az):
        v = QubitSpec.general(polar, az).bloch_vector()
        expected = [math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar)]
        np.testing.assert_allclose(v, expected, atol=1e-12)

    def test_axial_sextet(self):
        vs = np.array([q.bloch_vector() for q in model.axial_states()])
        np.testing.assert_allclose(vs.sum(axis=0), 0, atol=1e-12)
        np.testing.assert_allclose(np.abs(vs).sum(axis=1), 1, atol=1e-12)
        assert model.axial_states()[-1].bloch_vector()[2] == pytest.approx(-1)


class TestW:
    def test_coherent_light_is_jaynes_cummings(self):
        p = params(r=0.0, phi=0.7)
        a = model.lowering(p.n_max)
        jc = np.kron(model.SIGMA_PLUS, a) - np.kron(model.SIGMA_MINUS, a.conj().T)
        np.testing.assert_allclose(model.build_W(p), jc, atol=0)

    @given(squeezing, angles)
    def test_phase_period_pi(self, r, phi):
        w1 = model.build_W(params(r=r, phi=phi))
        w2 = model.build_W(params(r=r, phi=phi + math.pi))
        np.testing.assert_allclose(w1, w2, atol=1e-14)

    @given(squeezing, angles)
    def test_antihermitian(self, r, phi):
        w = model.build_W(params(r=r, phi=phi))
        np.testing.assert_allclose(w.conj().T, -w, atol=1e-15)


class TestHamiltonian:
    def test_zero_kappa_is_classical_drive(self):
        p = PulseParams(kappa_over_gamma=0.0)
        expected = 1j * (math.pi / 2) * np.kron(model.SIGMA_PLUS - model.SIGMA_MINUS, np.eye(6))
        np.testing.assert_allclose(model.build_H_S(p), expected, atol=0)

    def test_coherent_light_form(self):
        p = params(r=0.0, kappa_tau=1e-4)
        a = model.lowering(p.n_max)
        expected = 1j * (math.pi / 2) * np.kron(model.SIGMA_PLUS - model.SIGMA_MINUS, np.eye(6))
        expected += 1j * 1e-2 * (np.kron(model.SIGMA_PLUS, a) - np.kron(model.SIGMA_MINUS, a.conj().T))
        np.testing.assert_allclose(model.build_H_S(p), expected, atol=1e-15)

    @given(squeezing, angles, angles, st.floats(1e-6, 1e-3))
    def test_hermitian(self, r, phi, theta, kt):
        h = model.build_H_S(params(r=r, phi=phi, theta=theta, kappa_tau=kt))
        assert np.max(np.abs(h - h.conj().T)) <= 1e-12


class TestClassicalRotation:
    def test_identity_at_zero(self):
        np.testing.assert_allclose(model.classical_rotation(0.0), np.eye(2))

    def test_pi_pulse(self):
        u = model.classical_rotation(1.0)
        np.testing.assert_allclose(u @ [1, 0], [0, 1], atol=1e-15)
        np.testing.assert_allclose(u @ [0, 1], [-1, 0], atol=1e-15)

    @given(fractions)
    def test_paper_form(self, xi):
        u = model.classical_rotation(xi)
        c, s = math.cos(math.pi * xi / 2), math.sin(math.pi * xi / 2)
        np.testing.assert_allclose(u @ [1, 0], [c, s], atol=1e-15)
        np.testing.assert_allclose(u @ [0, 1], [-s, c], atol=1e-15)

    @given(fractions, fractions, angles, angles)
    def test_group_property_and_unitarity(self, x1, x2, theta, angle):
        u = model.classical_rotation
        np.testing.assert_allclose(u(x1, theta, angle) @ u(x2, theta, angle),
                                   u(x1 + x2, theta, angle), atol=1e-12)
        m = u(x1, theta, angle)
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)

    @given(fractions, angles, angles)
    def test_matches_matrix_exponential(self, xi, theta, angle):
        gen = model.drive_generator(theta, angle) * xi
        np.testing.assert_allclose(model.classical_rotation(xi, theta, angle), matrix_exp(gen), atol=1e-12)


class TestTargetState:
    p = PulseParams()

    def test_ground_goes_to_excited(self):
        np.testing.assert_allclose(model.target_state(QubitSpec.ground(), self.p), [0, 1], atol=1e-15)

    def test_y_state(self):
        eta = model.target_state(QubitSpec.equatorial(math.pi / 2), self.p)
        np.testing.assert_allclose(eta, np.array([-1, 1j]) / math.sqrt(2), atol=1e-15)

    def test_x_state(self):
        eta = model.target_state(QubitSpec.equatorial(0.0), self.p)
        np.testing.assert_allclose(eta, np.array([-1, 1]) / math.sqrt(2), atol=1e-15)
