"""Dense complex linear algebra on small Hilbert spaces.

Operators are plain ``numpy`` complex arrays of shape ``(dim, dim)``; stacks of
operators (one per loop sample) carry a leading batch axis. Units: hbar = 1.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, NotHermitian

HERMITIAN_RTOL = 1e-12


class EigenSystem(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvectors.

    ``vectors[:, k]`` belongs to ``values[k]``. For batched input the leading
    axes are preserved: ``values[..., k]`` and ``vectors[..., :, k]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def maxnorm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_error(h: np.ndarray) -> float:
    return maxnorm(h - dagger(h))


def check_hermitian(h: np.ndarray) -> None:
    h = np.asarray(h)
    if h.shape[-1] != h.shape[-2]:
        raise NotHermitian(f"operator is not square: shape {h.shape}")
    err = hermiticity_error(h)
    if err > HERMITIAN_RTOL * max(1.0, maxnorm(h)):
        raise NotHermitian(f"max |A - A^dagger| = {err:.3e}")


def eig_hermitian(h: np.ndarray) -> EigenSystem:
    """Eigen-decomposition of one Hermitian operator or a stack of them.

    Degenerate eigenvectors come back with whatever mixing LAPACK picks; no
    gauge is implied.
    """
    h = np.asarray(h, dtype=complex)
    check_hermitian(h)
    # symmetrize away the sub-tolerance antihermitian part before LAPACK
    h = 0.5 * (h + dagger(h))
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EigenSystem(values, vectors)


def step_propagator(h: np.ndarray, dt: float) -> np.ndarray:
    """``exp(-i h dt)`` through the eigenbasis of ``h`` (batched over leading axes)."""
    if not np.isfinite(dt):
        raise ValueError(f"dt must be finite, got {dt!r}")
    values, vectors = eig_hermitian(h)
    phases = np.exp(-1j * values * dt)
    return (vectors * phases[..., None, :]) @ dagger(vectors)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    eye = np.eye(u.shape[-1])
    return maxnorm(dagger(u) @ u - eye) <= tol


def polar_unitary(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unitary polar factor of ``m`` and its singular values."""
    w, s, vh = np.linalg.svd(m)
    return w @ vh, s
