"""Atom-pulse tangle, gate fidelity and error probabilities."""

from dataclasses import dataclass

import numpy as np

from . import dynamics, model
from .errors import DimensionError, TruncationError
from .numerics import ATOM, eig_hermitian, partial_trace

DISCARD_TOL = 1e-6
SIGMA_YY = np.kron(model.SIGMA_Y, model.SIGMA_Y)


@dataclass(frozen=True)
class TangleValue:
    value: float
    method: str
    truncation_discard: float = 0.0

    def __float__(self):
        return self.value


def _split_dims(size):
    if size % 2:
        raise DimensionError(f"joint dimension {size} is not 2 x (n_max + 1)")
    return 2, size // 2


def tangle_pure(psi, tol=1e-10):
    """Tangle ``2 (1 - Tr rho_A^2)`` of a pure qubit-field state."""
    psi = np.asarray(psi, dtype=np.complex128)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > tol:
        raise ValueError(f"state is not normalized (norm {norm:.15g})")
    dims = _split_dims(psi.size)
    rho_a = partial_trace(np.outer(psi, psi.conj()), dims, keep=ATOM)
    purity = np.trace(rho_a @ rho_a).real
    return TangleValue(value=max(0.0, 2 * (1 - purity)), method="pure-formula")


def project_two_qubit(rho):
    """Restrict a joint density matrix to photon numbers ``{0, 1}``.

    Returns the renormalized 4x4 block in the order ``g0, g1, e0, e1`` and the
    population that was dropped.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    _, n = _split_dims(rho.shape[0])
    idx = [0, 1, n, n + 1]
    block = rho[np.ix_(idx, idx)]
    kept = np.trace(block).real
    return block / kept, max(0.0, 1.0 - kept)


def wootters_concurrence(rho4):
    """Concurrence of a two-qubit density matrix.

    The decreasing square-rooted spectrum of ``rho (yy) rho* (yy)`` is taken
    from the Hermitian similar matrix ``sqrt(rho) (yy) rho* (yy) sqrt(rho)``.
    """
    rho4 = np.asarray(rho4, dtype=np.complex128)
    if rho4.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 density matrix, got {rho4.shape}")
    vals, vecs = eig_hermitian(rho4)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    flipped = SIGMA_YY @ rho4.conj() @ SIGMA_YY
    m = root @ flipped @ root
    mu = np.sqrt(np.clip(eig_hermitian(0.5 * (m + m.conj().T))[0], 0, None))[::-1]
    return max(0.0, mu[0] - mu[1] - mu[2] - mu[3])


def tangle_mixed(rho, discard_tol=DISCARD_TOL):
    """Squared concurrence of the joint state projected onto ``n <= 1``."""
    rho = np.asarray(rho, dtype=np.complex128)
    dynamics.check_density(rho)
    block, discard = project_two_qubit(rho)
    if discard > discard_tol:
        raise TruncationError(
            f"{discard:.3e} of the population lies outside the n <= 1 subspace "
            f"(limit {discard_tol:.0e})"
        )
    c = wootters_concurrence(block)
    return TangleValue(value=c * c, method="wootters-mixed", truncation_discard=discard)


def atom_density(state):
    """Reduced atomic density matrix of a joint state vector or matrix."""
    a = np.asarray(state, dtype=np.complex128)
    rho = np.outer(a, a.conj()) if a.ndim == 1 else a
    return partial_trace(rho, _split_dims(rho.shape[0]), keep=ATOM)


def error_probability(rho_atom, eta, tol=1e-10):
    """``1 - <eta| rho_A |eta>``."""
    rho_atom = np.asarray(rho_atom, dtype=np.complex128)
    eta = np.asarray(eta, dtype=np.complex128)
    if rho_atom.shape != (2, 2) or eta.shape != (2,):
        raise DimensionError("error_probability needs a 2x2 density matrix and a 2-vector")
    if abs(np.linalg.norm(eta) - 1) > tol:
        raise ValueError("target state is not normalized")
    if abs(np.trace(rho_atom) - 1) > tol:
        raise ValueError("atomic density matrix does not have unit trace")
    vals, _ = eig_hermitian(rho_atom, tol=tol)
    if vals[0] < -tol:
        raise ValueError("atomic density matrix is not positive")
    fidelity = np.vdot(eta, rho_atom @ eta).real
    return float(min(1.0, max(0.0, 1.0 - fidelity)))


def gate_error(q, p, engine="unitary", steps=dynamics.DEFAULT_STEPS, state=None):
    """Error of the pi pulse on initial atom ``q``; reuses ``state`` if given."""
    if state is None:
        state = dynamics.evolve_state(q, p, engine, steps)
    return error_probability(atom_density(state), model.target_state(q, p))


def tangle(state):
    """Tangle of a final joint state, choosing the pure or mixed route."""
    state = np.asarray(state)
    if state.ndim == 1:
        return tangle_pure(state)
    return tangle_mixed(state)


def average_error(p, engine="unitary", steps=dynamics.DEFAULT_STEPS):
    """Gate error averaged over the six Bloch-axis initial states."""
    errors = [gate_error(q, p, engine, steps) for q in model.axial_states()]
    return float(np.mean(errors))
