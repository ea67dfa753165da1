"""Leading-order closed forms used as oracles for the numerical engines.

All expressions are valid to order ``lambda^2`` with the mean-field phase
``theta = 0`` and a pi pulse.
"""

import cmath
import math

import numpy as np

AMPLITUDE_SQUEEZED = 0.0
PHASE_SQUEEZED = math.pi / 2


def _branch_sign(phi):
    """+1 for amplitude squeezing (phi = 0), -1 for phase squeezing (phi = pi/2)."""
    if math.isclose(phi, AMPLITUDE_SQUEEZED, abs_tol=1e-12):
        return 1
    if math.isclose(phi, PHASE_SQUEEZED, abs_tol=1e-12):
        return -1
    raise ValueError(f"closed form only available for phi in {{0, pi/2}}, got {phi}")


def tangle_poles(r, phi, kappa_tau):
    """Tangle for an initial ground or excited atom.

    ``[1 + (s/c)^2 - 2 (s/c) cos 2phi] c^2 kappa tau``; equals
    ``exp(-+2r) kappa tau`` on the two squeezing branches.
    """
    s, c = math.sinh(r), math.cosh(r)
    q = s / c
    return (1 + q * q - 2 * q * math.cos(2 * phi)) * c * c * kappa_tau


def tangle_equatorial(theta_a, r, phi, kappa_tau):
    """Tangle for the equatorial state at angle ``theta_a`` from +x.

    The bracket times ``exp(-i theta_a)`` is ``2 pi cos(theta_a) e^{-+r} +
    4 e^{+-r}``, so the squared form is real; roundoff imaginary parts are
    dropped.
    """
    sign = _branch_sign(phi)
    z = cmath.exp(1j * theta_a)
    bracket = math.pi * (1 + z * z) * math.exp(-sign * r) + 4 * z * math.exp(sign * r)
    value = bracket**2 / (z * z) / (4 * math.pi**2) * kappa_tau
    return value.real


AVG_COEFF_SAME = 0.0675
AVG_COEFF_OPPOSITE = 0.1665


def avg_error_analytic(r, phi, kappa_tau):
    """State-averaged gate error ``(0.0675 e^{+-2r} + 0.1665 e^{-+2r}) kappa tau``."""
    sign = _branch_sign(phi)
    return (
        AVG_COEFF_SAME * math.exp(2 * sign * r) + AVG_COEFF_OPPOSITE * math.exp(-2 * sign * r)
    ) * kappa_tau


def avg_error_crossing():
    """Squeezing at which the amplitude-squeezed average error returns to its r=0 value.

    With ``x = exp(2r)`` the condition ``a x + b/x = a + b`` has roots
    ``x = 1`` and ``x = b / a``.
    """
    return 0.5 * math.log(AVG_COEFF_OPPOSITE / AVG_COEFF_SAME)


def avg_error_minimum():
    """``(r, value / kappa tau)`` at the minimum of the amplitude-squeezed branch."""
    a, b = AVG_COEFF_SAME, AVG_COEFF_OPPOSITE
    return 0.25 * math.log(b / a), 2 * math.sqrt(a * b)


def first_order_amplitudes(r, phi, lam):
    """Order-``lambda`` amplitudes of ``|e,1>`` and ``|g,1>`` starting from ``|g,0>``."""
    q = cmath.exp(-2j * phi) * math.tanh(r)
    amp_e1 = -lam / math.pi * (q + 1)
    amp_g1 = lam / 2 * (q - 1)
    return amp_e1, amp_g1


def first_order_state(r, phi, lam, n_max):
    """``|e,0>`` plus the order-``lambda`` correction, unnormalized."""
    n = n_max + 1
    psi = np.zeros(2 * n, dtype=np.complex128)
    amp_e1, amp_g1 = first_order_amplitudes(r, phi, lam)
    psi[n] = 1
    psi[n + 1] = amp_e1
    psi[1] = amp_g1
    return psi
