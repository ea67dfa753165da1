"""Single-qubit pi pulses driven by squeezed light: entanglement and gate error."""

from .analytic import avg_error_analytic, first_order_amplitudes, tangle_equatorial, tangle_poles
from .dynamics import evolve_lindblad, evolve_state, evolve_unitary, perturbative_propagator
from .metrics import average_error, error_probability, gate_error, tangle_mixed, tangle_pure
from .model import PulseParams, QubitSpec, build_H_S, build_W, classical_rotation, target_state

__version__ = "0.1.0"
