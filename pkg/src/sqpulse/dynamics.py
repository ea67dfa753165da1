"""Time evolution of the joint atom-pulse state over one pulse.

Three engines share the Hamiltonian from :mod:`sqpulse.model`:

* :func:`evolve_unitary` exponentiates the Hamiltonian (reservoir off);
* :func:`perturbative_propagator` builds the first terms of the series in
  ``lambda`` by ordered quadrature;
* :func:`evolve_lindblad` integrates the master equation with free-space
  decay acting on the atom.
"""

from dataclasses import dataclass

import numpy as np

from . import model
from .errors import ConvergenceError, CutoffError, DimensionError, PositivityError
from .numerics import eig_hermitian, matrix_exp

CUTOFF_TOL = 1e-8
POSITIVITY_TOL = 1e-9
DEFAULT_STEPS = 2000


def product_state(q, n_max):
    """``|sigma> ⊗ |0>`` for the qubit spec ``q``."""
    vac = np.zeros(n_max + 1, dtype=np.complex128)
    vac[0] = 1
    return np.kron(q.amplitudes(), vac)


def as_density(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def photon_distribution(state, n_max):
    """Photon-number populations of a joint pure state or density matrix."""
    a = np.asarray(state, dtype=np.complex128)
    n = n_max + 1
    if a.ndim == 1:
        if a.size != 2 * n:
            raise DimensionError(f"state of length {a.size} does not match n_max={n_max}")
        return np.sum(np.abs(a.reshape(2, n)) ** 2, axis=0)
    if a.shape != (2 * n, 2 * n):
        raise DimensionError(f"density of shape {a.shape} does not match n_max={n_max}")
    return np.einsum("ijij->j", a.reshape(2, n, 2, n)).real


def check_cutoff(state, n_max, tol=CUTOFF_TOL):
    top = photon_distribution(state, n_max)[-1]
    if top > tol:
        raise CutoffError(
            f"population {top:.3e} in |n={n_max}> exceeds {tol:.0e}; increase n_max"
        )


def evolve_unitary(initial, p):
    """Closed-system evolution ``exp(-i H_S) |initial>`` over the pulse."""
    psi0 = np.asarray(initial, dtype=np.complex128)
    if psi0.shape != (p.dim,):
        raise DimensionError(f"initial state of shape {psi0.shape}, expected ({p.dim},)")
    norm0 = np.linalg.norm(psi0)
    if abs(norm0 - 1) > 1e-12:
        raise ValueError(f"initial state is not normalized (norm {norm0:.15g})")
    psi = matrix_exp(-1j * model.build_H_S(p)) @ psi0
    psi /= np.linalg.norm(psi)
    check_cutoff(psi, p.n_max)
    return psi


@dataclass(frozen=True)
class PropagatorExpansion:
    """Terms of ``U = U0 + lam U1 + lam^2 U2 + O(lam^3)``."""

    U0: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    lam: float
    panels: int

    def propagator(self, order=2):
        terms = (self.U0, self.U1, self.U2)[: order + 1]
        return sum(self.lam**k * u for k, u in enumerate(terms))

    def apply(self, initial, order=2, normalize=True):
        psi = self.propagator(order) @ np.asarray(initial, dtype=np.complex128)
        if normalize:
            psi = psi / np.linalg.norm(psi)
        return psi


def _gauss_panels(nodes, panels, a=0.0, b=1.0):
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return xs, ws


def _series_terms(p, W, nodes, panels):
    eye_f = np.eye(p.n_max + 1)

    def u0(xi):
        return np.kron(model.classical_rotation(xi, p.theta, p.rotation_angle), eye_f)

    xs, ws = _gauss_panels(nodes, panels)
    u1 = np.zeros_like(W)
    u2 = np.zeros_like(W)
    for x1, w1 in zip(xs, ws):
        left = u0(1 - x1) @ W
        u1 += w1 * (left @ u0(x1))
        # inner ordered integral over 0 <= xi2 <= xi1
        ys, vs = _gauss_panels(nodes, panels, 0.0, x1)
        inner = np.zeros_like(W)
        for x2, w2 in zip(ys, vs):
            inner += w2 * (u0(x1 - x2) @ W @ u0(x2))
        u2 += w1 * (left @ inner)
    return u1, u2


def perturbative_propagator(p, quadrature_nodes=8, tol=1e-10, max_panels=64):
    """Series terms of the pulse propagator in powers of ``lambda``.

    ``U1`` and ``U2`` are the single and ordered double integrals of the
    interaction-picture coupling, evaluated by composite Gauss-Legendre
    quadrature with ``quadrature_nodes`` points per panel. Panels are doubled
    until no entry moves by more than ``tol``.
    """
    W = model.build_W(p)
    U0 = np.kron(model.classical_rotation(1.0, p.theta, p.rotation_angle), np.eye(p.n_max + 1))
    panels = 1
    u1, u2 = _series_terms(p, W, quadrature_nodes, panels)
    while True:
        if panels * 2 > max_panels:
            raise ConvergenceError(f"series quadrature not converged at {panels} panels")
        panels *= 2
        v1, v2 = _series_terms(p, W, quadrature_nodes, panels)
        delta = max(np.max(np.abs(v1 - u1)), np.max(np.abs(v2 - u2)))
        u1, u2 = v1, v2
        if delta < tol:
            break
    return PropagatorExpansion(U0=U0, U1=u1, U2=u2, lam=p.lam, panels=panels)


def lindblad_generator(p):
    """Superoperator of the master equation acting on row-major ``vec(rho)``.

    Uses ``vec(A rho B) = (A ⊗ B^T) vec(rho)``. The decay operator is
    ``sigma_minus ⊗ 1`` with rate ``gamma_tau`` per pulse.
    """
    H = model.build_H_S(p)
    d = H.shape[0]
    eye = np.eye(d)
    gen = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    if p.reservoir:
        L = np.kron(model.SIGMA_MINUS, np.eye(p.n_max + 1))
        LdL = L.conj().T @ L
        gen = gen + p.gamma_tau * (
            np.kron(L, L.conj()) - 0.5 * np.kron(LdL, eye) - 0.5 * np.kron(eye, LdL.T)
        )
    return gen


def rk4_step_map(generator, h):
    """One classical Runge-Kutta step for ``dv/dt = G v`` with constant ``G``.

    For a linear time-independent right-hand side the four stages collapse to
    the degree-4 Taylor polynomial of ``exp(h G)``.
    """
    hg = h * generator
    step = np.eye(generator.shape[0], dtype=np.complex128)
    term = step.copy()
    for k in range(1, 5):
        term = term @ hg / k
        step = step + term
    return step


def check_density(rho, trace_tol=1e-10, herm_tol=1e-10, pos_tol=POSITIVITY_TOL):
    """Raise if ``rho`` is not a valid density matrix; return its spectrum."""
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise PositivityError(f"trace {tr:.15g} deviates from 1 by more than {trace_tol:.0e}")
    defect = float(np.max(np.abs(rho - rho.conj().T)))
    if defect > herm_tol:
        raise PositivityError(f"Hermiticity defect {defect:.3e} exceeds {herm_tol:.0e}")
    values, _ = eig_hermitian(rho, tol=herm_tol)
    if values[0] < -pos_tol:
        raise PositivityError(
            f"minimum eigenvalue {values[0]:.3e} below -{pos_tol:.0e}; reduce the step size"
        )
    return values


def evolve_lindblad(initial, p, steps=DEFAULT_STEPS):
    """Integrate the master equation over the pulse with fixed-step RK4.

    Parameters
    ----------
    initial : array_like
        Joint density matrix at the start of the pulse.
    p : PulseParams
    steps : int
        Number of equal steps across ``0 <= t <= 1``; at least 100.

    Returns
    -------
    numpy.ndarray
        Density matrix at the end of the pulse.
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    rho0 = np.asarray(initial, dtype=np.complex128)
    d = p.dim
    if rho0.shape != (d, d):
        raise DimensionError(f"initial density of shape {rho0.shape}, expected {(d, d)}")
    check_density(rho0)
    step = rk4_step_map(lindblad_generator(p), 1.0 / steps)
    vec = np.linalg.matrix_power(step, steps) @ rho0.reshape(-1)
    rho = vec.reshape(d, d)
    check_density(rho)
    check_cutoff(rho, p.n_max)
    return rho


def order_scaling_exponent(lams, errors):
    """Least-squares slope of ``log(error)`` against ``log(lambda)``."""
    x = np.log(np.asarray(lams, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


ENGINES = ("unitary", "lindblad", "perturbative")


def evolve_state(q, p, engine="unitary", steps=DEFAULT_STEPS):
    """Final joint state for initial atom ``q`` and vacuum pulse.

    Returns a state vector for the ``unitary`` and ``perturbative`` engines
    and a density matrix for ``lindblad``.
    """
    psi0 = product_state(q, p.n_max)
    if engine == "unitary":
        return evolve_unitary(psi0, p)
    if engine == "lindblad":
        return evolve_lindblad(as_density(psi0), p, steps)
    if engine == "perturbative":
        psi = perturbative_propagator(p).apply(psi0)
        check_cutoff(psi, p.n_max)
        return psi
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
