"""Small dense complex linear algebra used by every engine.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. All routines are
pure and check operand shapes instead of relying on broadcasting.

Joint atom-field operators use one fixed basis ordering: the atom index is
slow, the Fock index fast, atom levels ordered ``(g, e)`` and photon numbers
``0 .. n_max``.
"""

import numpy as np
import scipy.linalg

from .errors import DimensionError

ATOM = "atom"
FIELD = "field"


def as_matrix(a):
    """Return ``a`` as a 2-D complex128 array, rejecting other ranks."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {m.shape}")
    return m


def _require_square(m):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")


def dagger(a):
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a, b):
    """Kronecker product ``a ⊗ b`` with the left factor as the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def matrix_exp(a):
    """Matrix exponential by scaling and squaring with Padé approximants."""
    m = as_matrix(a)
    _require_square(m)
    return scipy.linalg.expm(m)


def partial_trace(rho, dims, keep=ATOM):
    """Reduce a bipartite operator to one subsystem.

    Parameters
    ----------
    rho : array_like
        Operator on the ``dims[0] * dims[1]`` dimensional product space.
    dims : tuple of int
        ``(d_A, d_B)`` with A the slow index.
    keep : {"atom", "field"}
        Which factor survives. ``"atom"`` keeps A.

    Returns
    -------
    numpy.ndarray
        ``d_A x d_A`` or ``d_B x d_B`` reduced matrix.
    """
    m = as_matrix(rho)
    d_a, d_b = (int(d) for d in dims)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionError(
            f"operator of shape {m.shape} does not match dims {(d_a, d_b)}"
        )
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == ATOM:
        return np.einsum("ijkj->ik", t)
    if keep == FIELD:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be {ATOM!r} or {FIELD!r}, got {keep!r}")


def hermiticity_defect(a):
    """Largest entry of ``|A - A†|``."""
    m = as_matrix(a)
    _require_square(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def eig_hermitian(a, tol=1e-10):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and the matrix whose columns are the
    corresponding orthonormal eigenvectors.
    """
    m = as_matrix(a)
    _require_square(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    # symmetrise so roundoff-level anti-Hermitian parts do not leak into eigh
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    return values, vectors


def operator_norm(a):
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(as_matrix(a), ord=2))


def frobenius_norm(a):
    return float(np.linalg.norm(as_matrix(a)))
