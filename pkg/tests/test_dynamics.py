import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqpulse import analytic, dynamics, metrics, model
from sqpulse.errors import CutoffError, PositivityError
from sqpulse.model import PulseParams, QubitSpec
from sqpulse.numerics import matrix_exp, partial_trace
from sqpulse.validation import random_valid_params

G = QubitSpec.ground()


def params(r=0.0, phi=0.0, kappa_tau=1e-4, **kw):
    return PulseParams.from_kappa_tau(kappa_tau, r=r, phi=phi, **kw)


def test_classical_pulse_flips_ground():
    p = PulseParams(kappa_over_gamma=0.0)
    psi = dynamics.evolve_state(G, p)
    np.testing.assert_allclose(np.abs(psi[p.n_max + 1]), 1, atol=1e-12)
    assert metrics.tangle_pure(psi).value < 1e-20


def test_coherent_tangle_equals_kappa_tau():
    psi = dynamics.evolve_state(G, params(kappa_tau=1e-4))
    assert metrics.tangle_pure(psi).value == pytest.approx(1e-4, rel=0.01)


@given(st.floats(0, 1.5), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
@settings(max_examples=30, deadline=None)
def test_unitary_norm_preserved(r, phi, theta):
    p = params(r=r, phi=phi, theta=theta, kappa_tau=1e-4)
    psi0 = dynamics.product_state(QubitSpec.equatorial(0.3), p.n_max)
    u = matrix_exp(-1j * model.build_H_S(p))
    assert abs(np.linalg.norm(u @ psi0) - 1) < 1e-12


@pytest.mark.parametrize("r,phi", [(0.0, 0.0), (0.8, 0.0), (0.8, math.pi / 2), (0.5, 0.4)])
def test_first_order_term_matches_closed_form(r, phi):
    p = params(r=r, phi=phi, kappa_tau=1e-4)
    series = dynamics.perturbative_propagator(p)
    psi0 = dynamics.product_state(G, p.n_max)
    first = series.U1 @ psi0 * p.lam
    amp_e1, amp_g1 = analytic.first_order_amplitudes(r, phi, p.lam)
    n = p.n_max + 1
    # classical pi pulse sends |g> to +|e>
    np.testing.assert_allclose((series.U0 @ psi0)[n], 1, atol=1e-14)
    np.testing.assert_allclose(first[n + 1], amp_e1, atol=1e-12)
    np.testing.assert_allclose(first[1], amp_g1, atol=1e-12)


def test_second_order_truncation_scales_as_cube():
    lams, errs = [], []
    for kt in np.geomspace(1e-6, 1e-3, 6):
        p = params(r=0.5, phi=0.3, kappa_tau=kt)
        psi0 = dynamics.product_state(QubitSpec.equatorial(1.0), p.n_max)
        exact = dynamics.evolve_unitary(psi0, p)
        approx = dynamics.perturbative_propagator(p).apply(psi0, normalize=False)
        lams.append(p.lam)
        errs.append(np.linalg.norm(exact - approx))
    assert dynamics.order_scaling_exponent(lams, errs) == pytest.approx(3, abs=0.1)


def test_lindblad_without_reservoir_matches_unitary():
    p = params(r=0.7, phi=0.2, kappa_tau=1e-3, reservoir=False)
    q = QubitSpec.equatorial(0.9)
    rho = dynamics.evolve_state(q, p, "lindblad")
    psi = dynamics.evolve_state(q, p, "unitary")
    np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-10)


def test_lindblad_trace_and_positivity_on_random_points():
    rng = np.random.default_rng(7)
    for p in random_valid_params(rng, 8):
        q = QubitSpec.general(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        rho = dynamics.evolve_state(q, p, "lindblad")
        assert abs(np.trace(rho) - 1) < 1e-10
        assert np.linalg.eigvalsh(rho)[0] > -1e-9


def test_lindblad_step_halving():
    p = PulseParams(r=1.16, phi=math.pi / 2, kappa_over_gamma=1e-3, gamma_tau=0.1)
    q = QubitSpec.equatorial(math.pi / 2)
    a = partial_trace(dynamics.evolve_state(q, p, "lindblad", 1000), (2, 6))
    b = partial_trace(dynamics.evolve_state(q, p, "lindblad", 2000), (2, 6))
    assert np.max(np.abs(a - b)) < 1e-8


def test_decay_only_relaxes_excited_population():
    # no drive at all: exp(-gamma_tau) survival of |e>
    p = PulseParams(kappa_over_gamma=0.0, gamma_tau=0.5, rotation_angle=0.0)
    rho = dynamics.evolve_state(QubitSpec.excited(), p, "lindblad")
    atom = partial_trace(rho, (2, p.n_max + 1))
    assert atom[1, 1].real == pytest.approx(math.exp(-0.5), rel=1e-10)


def test_rk4_step_map_matches_exponential():
    p = params(r=0.5, kappa_tau=1e-3)
    gen = dynamics.lindblad_generator(p)
    h = 1e-3
    assert np.max(np.abs(dynamics.rk4_step_map(gen, h) - matrix_exp(h * gen))) < 1e-12


def test_cutoff_error_when_truncation_too_small():
    with pytest.warns(RuntimeWarning):
        p = PulseParams.from_kappa_tau(0.05, r=3.0, n_max=2, unsafe_lambda=True)
    with pytest.raises(CutoffError):
        dynamics.evolve_state(G, p)


def test_check_density_rejects_negative_matrix():
    with pytest.raises(PositivityError):
        dynamics.check_density(np.diag([1.1, -0.1]).astype(complex))


def test_check_density_rejects_bad_trace():
    with pytest.raises(PositivityError):
        dynamics.check_density(np.eye(2) * 0.6)


def test_lindblad_rejects_too_few_steps():
    with pytest.raises(ValueError):
        dynamics.evolve_state(G, params(), "lindblad", steps=50)


def test_unknown_engine():
    with pytest.raises(ValueError, match="engine"):
        dynamics.evolve_state(G, params(), "odeint")


def test_photon_distribution_of_product_state():
    psi = dynamics.product_state(G, 4)
    np.testing.assert_allclose(dynamics.photon_distribution(psi, 4), [1, 0, 0, 0, 0])
    rho = dynamics.as_density(psi)
    np.testing.assert_allclose(dynamics.photon_distribution(rho, 4), [1, 0, 0, 0, 0])
