"""Bloch-vector picture of the pulse with Gaussian quadrature noise.

The mean field drives a rotation about an equatorial axis. Field
fluctuations add a random, per-pulse static component to the drive whose
two quadratures have squeezing-dependent widths. This model only
corroborates orderings and trends of the quantum engines.
"""

import math
from dataclasses import dataclass

import numpy as np

CHUNK = 10_000


@dataclass(frozen=True)
class NoiseDraw:
    """Quadrature fluctuations ``dx1`` (amplitude) and ``dx2`` (phase)."""

    dx1: np.ndarray
    dx2: np.ndarray


def quadrature_covariance(r, phi):
    """Covariance of ``(dX1, dX2)`` in the squeezed vacuum ``S(r e^{2i phi})|0>``.

    The quadrature at angle ``phi`` has variance ``e^{-2r}``; vacuum variance is 1.
    """
    c, s = math.cos(phi), math.sin(phi)
    rot = np.array([[c, -s], [s, c]])
    return rot @ np.diag([math.exp(-2 * r), math.exp(2 * r)]) @ rot.T


def draw_noise(r, phi, size, rng):
    cov = quadrature_covariance(r, phi)
    xy = rng.multivariate_normal(np.zeros(2), cov, size=size, method="cholesky")
    return NoiseDraw(dx1=xy[:, 0], dx2=xy[:, 1])


def drive_axis(theta):
    """Unit rotation axis in the equatorial plane at angle ``theta`` from +y."""
    return np.array([math.sin(theta), math.cos(theta), 0.0])


def rotate(s, omega, t=1.0):
    """Solve ``ds/dt = -omega x s`` for constant ``omega`` (Rodrigues formula).

    Broadcasts over leading axes of ``s`` and ``omega``.
    """
    s = np.asarray(s, dtype=float)
    omega = np.asarray(omega, dtype=float)
    rate = np.linalg.norm(omega, axis=-1, keepdims=True)
    safe = np.where(rate > 0, rate, 1.0)
    k = omega / safe
    ang = -rate * t
    cos, sin = np.cos(ang), np.sin(ang)
    kdot = np.sum(k * s, axis=-1, keepdims=True)
    out = s * cos + np.cross(k, s) * sin + k * kdot * (1 - cos)
    return np.where(rate > 0, out, s)


def bloch_trajectory(initial, omega, steps=1000):
    """Bloch vector after precessing about ``omega`` for the whole pulse.

    Each of the ``steps`` sub-intervals is an exact axis-angle rotation, so
    the result does not depend on ``steps`` beyond roundoff.
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    s = np.asarray(initial, dtype=float)
    h = 1.0 / steps
    for _ in range(steps):
        s = rotate(s, omega, h)
    return s


def _chunk_errors(s0, target, omega0, zeta, r, phi, size, seed_seq, noise_scale):
    rng = np.random.default_rng(seed_seq)
    noise = draw_noise(r, phi, size, rng)
    kick = zeta * noise_scale * np.stack([noise.dx2, noise.dx1, np.zeros(size)], axis=-1)
    final = rotate(np.broadcast_to(s0, kick.shape), omega0 + kick)
    return 1 - 0.5 * (1 + final @ target)


def noisy_obe_error(q, p, samples=100_000, seed=0, noise_scale=1.0):
    """Monte-Carlo gate error of the noisy Bloch equation.

    Parameters
    ----------
    q : QubitSpec
        Initial atomic state.
    p : PulseParams
        Only ``r``, ``phi``, ``theta``, ``rotation_angle`` and ``kappa_tau``
        enter.
    samples : int
        Number of pulses, each with one static noise draw; at least 1000.
    seed : int
        Root seed. Sample chunks of fixed size get child seeds, so the result
        is independent of how chunks are scheduled.
    noise_scale : float
        Multiplies the fluctuations; 0 gives the noiseless classical gate.

    Returns
    -------
    tuple of float
        Mean error and its standard error.
    """
    if samples < 1000:
        raise ValueError(f"samples must be >= 1000, got {samples}")
    s0 = q.bloch_vector()
    omega0 = p.rotation_angle * drive_axis(p.theta)
    target = rotate(s0, omega0)
    zeta = p.coupling
    n_chunks = -(-samples // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    errors = np.concatenate(
        [
            _chunk_errors(
                s0, target, omega0, zeta, p.r, p.phi,
                min(CHUNK, samples - i * CHUNK), child, noise_scale,
            )
            for i, child in enumerate(children)
        ]
    )
    return float(errors.mean()), float(errors.std(ddof=1) / math.sqrt(samples))
