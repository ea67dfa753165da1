"""Pulse parameters, qubit states and the working Hamiltonian.

Everything is expressed in the displaced and squeezed frame in which the
pulse mode starts in the vacuum. Time is measured in units of the pulse
duration, so the pulse occupies ``0 <= t <= 1`` and energies are in units of
``hbar / tau``.
"""

import math
import re
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError

# atom basis (g, e); sigma_plus = |e><g|
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=np.complex128)

DEFAULT_LAMBDA_MAX = 0.15
DEFAULT_N_MAX = 5


def lowering(n_max):
    """Truncated annihilation operator on Fock states ``0 .. n_max``."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(np.complex128)


@dataclass(frozen=True)
class PulseParams:
    """Physical knobs of one squeezed-light pulse.

    Attributes
    ----------
    r, phi : float
        Squeezing magnitude and phase; the squeezing parameter is
        ``r * exp(2i phi)``.
    theta : float
        Phase of the mean field. The classical rotation axis lies in the
        equatorial plane at angle ``theta`` from the y axis.
    kappa_over_gamma : float
        Decay rate into the paraxial pulse-mode family over the free-space rate.
    gamma_tau : float
        Pulse duration in units of the free-space lifetime.
    rotation_angle : float
        Pulse area; ``pi`` for a pi pulse.
    n_max : int
        Highest photon number kept in the pulse mode.
    lambda_max, unsafe_lambda :
        Perturbative guard. ``lambda > lambda_max`` raises unless
        ``unsafe_lambda`` is set, in which case it only warns.
    reservoir : bool
        Whether the master equation includes free-space decay. Switching it
        off keeps ``kappa * tau`` fixed and sets the dissipator to zero.
    """

    r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    kappa_over_gamma: float = 1e-3
    gamma_tau: float = 0.1
    rotation_angle: float = math.pi
    n_max: int = DEFAULT_N_MAX
    lambda_max: float = DEFAULT_LAMBDA_MAX
    unsafe_lambda: bool = False
    reservoir: bool = True

    def __post_init__(self):
        for name in ("r", "phi", "theta", "kappa_over_gamma", "gamma_tau", "rotation_angle"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.r < 0:
            raise ParameterError(f"squeezing magnitude r must be >= 0, got {self.r}")
        if self.kappa_over_gamma < 0:
            raise ParameterError("kappa_over_gamma must be >= 0")
        if self.gamma_tau <= 0:
            raise ParameterError(f"gamma_tau must be > 0, got {self.gamma_tau}")
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ParameterError(f"n_max must be an integer >= 2, got {self.n_max}")
        if self.kappa_tau >= 1:
            raise ParameterError(
                f"kappa*tau = {self.kappa_tau:.3g} violates the Markovian condition kappa*tau < 1"
            )
        if self.lam > self.lambda_max:
            msg = f"lambda = {self.lam:.4g} exceeds lambda_max = {self.lambda_max:g}"
            if not self.unsafe_lambda:
                raise ParameterError(msg + " (pass unsafe_lambda to override)")
            warnings.warn(msg, RuntimeWarning, stacklevel=3)

    @classmethod
    def from_kappa_tau(cls, kappa_tau, gamma_tau=0.1, **kwargs):
        """Build from ``kappa * tau`` directly at a given ``gamma_tau``."""
        return cls(kappa_over_gamma=kappa_tau / gamma_tau, gamma_tau=gamma_tau, **kwargs)

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def kappa_tau(self):
        return self.kappa_over_gamma * self.gamma_tau

    @property
    def s(self):
        return math.sinh(self.r)

    @property
    def c(self):
        return math.cosh(self.r)

    @property
    def lam(self):
        """Perturbative coupling ``cosh(r) sqrt(kappa tau)``."""
        return self.c * math.sqrt(self.kappa_tau)

    @property
    def coupling(self):
        """Atom-pulse coupling ``g = sqrt(kappa / tau)`` in units of ``1/tau``."""
        return math.sqrt(self.kappa_tau)

    @property
    def alpha_abs(self):
        """Mean-field amplitude fixed by the pulse area, ``area / (2 g tau)``."""
        if self.coupling == 0:
            return math.inf
        return self.rotation_angle / (2 * self.coupling)

    @property
    def lambda_exceeded(self):
        return self.lam > self.lambda_max

    @property
    def dim(self):
        return 2 * (self.n_max + 1)


_EQ = re.compile(r"^eq:(?P<a>[^:]+)$")
_BLOCH = re.compile(r"^bloch:(?P<p>[^:]+):(?P<a>[^:]+)$")


@dataclass(frozen=True)
class QubitSpec:
    """Initial atomic state given as Bloch-sphere data.

    ``kind`` is ``"ground"``, ``"excited"``, ``"equatorial"`` (uses
    ``theta_a``: the state ``(exp(i theta_a)|g> + |e>)/sqrt 2`` at angle
    ``theta_a`` from +x) or ``"general"`` (``polar`` measured from the
    excited pole, ``azimuth`` from +x).
    """

    kind: str
    theta_a: float = 0.0
    polar: float = 0.0
    azimuth: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in ("ground", "excited", "equatorial", "general"):
            raise ValueError(f"unknown qubit kind {self.kind!r}")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self):
        if self.kind == "ground":
            return "g"
        if self.kind == "excited":
            return "e"
        if self.kind == "equatorial":
            return f"eq:{self.theta_a:.12g}"
        return f"bloch:{self.polar:.12g}:{self.azimuth:.12g}"

    @classmethod
    def ground(cls):
        return cls("ground")

    @classmethod
    def excited(cls):
        return cls("excited")

    @classmethod
    def equatorial(cls, theta_a):
        return cls("equatorial", theta_a=float(theta_a))

    @classmethod
    def general(cls, polar, azimuth):
        return cls("general", polar=float(polar), azimuth=float(azimuth))

    @classmethod
    def parse(cls, text):
        """Parse ``g``, ``e``, ``eq:THETA_A`` or ``bloch:POLAR:AZIMUTH``.

        Angles accept expressions such as ``pi/2`` or ``-3*pi/4``.
        """
        from .config import parse_angle

        t = text.strip()
        if t == "g":
            return cls("ground", label=t)
        if t == "e":
            return cls("excited", label=t)
        m = _EQ.match(t)
        if m:
            return cls("equatorial", theta_a=parse_angle(m["a"]), label=t)
        m = _BLOCH.match(t)
        if m:
            return cls("general", polar=parse_angle(m["p"]), azimuth=parse_angle(m["a"]), label=t)
        raise ValueError(f"cannot parse qubit state {text!r}")

    def amplitudes(self):
        """Normalized amplitudes in the ``(g, e)`` basis."""
        if self.kind == "ground":
            return np.array([1, 0], dtype=np.complex128)
        if self.kind == "excited":
            return np.array([0, 1], dtype=np.complex128)
        if self.kind == "equatorial":
            return np.array([np.exp(1j * self.theta_a), 1], dtype=np.complex128) / math.sqrt(2)
        half = self.polar / 2
        return np.array(
            [math.sin(half) * np.exp(1j * self.azimuth), math.cos(half)], dtype=np.complex128
        )

    def bloch_vector(self):
        return bloch_vector(self.amplitudes())


def bloch_vector(psi):
    """Bloch vector of a qubit pure state; +z is the excited level."""
    psi = np.asarray(psi, dtype=np.complex128)
    rho = np.outer(psi, psi.conj())
    return np.array([np.trace(rho @ s).real for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def axial_states():
    """The six Bloch-axis states ``+x, -x, +y, -y, +z, -z``."""
    return [
        QubitSpec("equatorial", theta_a=0.0, label="+x"),
        QubitSpec("equatorial", theta_a=math.pi, label="-x"),
        QubitSpec("equatorial", theta_a=math.pi / 2, label="+y"),
        QubitSpec("equatorial", theta_a=-math.pi / 2, label="-y"),
        QubitSpec("excited", label="+z"),
        QubitSpec("ground", label="-z"),
    ]


def build_W(p):
    """Dimensionless operator of the atom coupled to the field fluctuations."""
    a = lowering(p.n_max)
    ad = a.conj().T
    ratio = p.s / p.c
    return np.kron(SIGMA_PLUS, a - np.exp(-2j * p.phi) * ratio * ad) - np.kron(
        SIGMA_MINUS, ad - np.exp(2j * p.phi) * ratio * a
    )


def drive_generator(theta, angle):
    """Anti-Hermitian 2x2 generator ``(angle/2)(e^{i theta} s+ - e^{-i theta} s-)``."""
    return (angle / 2) * (np.exp(1j * theta) * SIGMA_PLUS - np.exp(-1j * theta) * SIGMA_MINUS)


def build_H_S(p):
    """Working Hamiltonian in units of ``hbar / tau``."""
    drive = np.kron(drive_generator(p.theta, p.rotation_angle), np.eye(p.n_max + 1))
    return 1j * p.lam * build_W(p) + 1j * drive


def classical_rotation(xi, theta=0.0, angle=math.pi):
    """Propagator of the mean field alone over the fraction ``xi`` of the pulse.

    The generator squares to ``-(angle/2)^2 I``, so the exponential is
    ``cos(x) I + sin(x) M`` with ``M`` the unit generator.
    """
    x = angle * xi / 2
    unit = np.exp(1j * theta) * SIGMA_PLUS - np.exp(-1j * theta) * SIGMA_MINUS
    return math.cos(x) * np.eye(2, dtype=np.complex128) + math.sin(x) * unit


def target_state(q, p):
    """Image of the initial atomic state under the ideal classical pulse."""
    psi = classical_rotation(1.0, p.theta, p.rotation_angle) @ q.amplitudes()
    return psi / np.linalg.norm(psi)
