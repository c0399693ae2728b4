"""Angular-momentum matrices, product-space embeddings and coupled bases.

Basis convention: states of a single momentum are ordered by descending
projection ``m = j, j-1, ..., -j``. Product spaces use ``numpy.kron`` ordering
(first factor slowest).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import DimMismatch, InvalidSpin
from .operators import dagger, kron


def as_spin(j) -> Fraction:
    """Validate ``j`` as a nonnegative half-integer and return it exactly."""
    try:
        twice = float(j) * 2.0
    except (TypeError, ValueError) as exc:
        raise InvalidSpin(f"spin must be a number, got {j!r}") from exc
    n = round(twice)
    if not np.isfinite(twice) or abs(twice - n) > 1e-9 or n < 0:
        raise InvalidSpin(f"2j must be a nonnegative integer, got j={j!r}")
    return Fraction(n, 2)


def spin_dim(j) -> int:
    return int(2 * as_spin(j)) + 1


def m_values(j) -> np.ndarray:
    j = float(as_spin(j))
    return j - np.arange(spin_dim(j))


@dataclass(frozen=True)
class SpinOps:
    j: Fraction
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray

    @property
    def dim(self) -> int:
        return self.jz.shape[0]

    def casimir(self) -> np.ndarray:
        return self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz


def spin_ops(j) -> SpinOps:
    j = as_spin(j)
    m = m_values(j)
    jf = float(j)
    # <m+1| J+ |m> sits one above the diagonal in descending-m order
    ladder = np.sqrt(jf * (jf + 1) - m[1:] * (m[1:] + 1))
    jplus = np.diag(ladder.astype(complex), k=1)
    jminus = dagger(jplus)
    jx = 0.5 * (jplus + jminus)
    jy = -0.5j * (jplus - jminus)
    jz = np.diag(m.astype(complex))
    return SpinOps(j, jx, jy, jz, jplus, jminus)


def embed(op: np.ndarray, slot: int, dims: Sequence[int]) -> np.ndarray:
    """Place ``op`` in tensor slot ``slot`` with identities elsewhere."""
    dims = [int(d) for d in dims]
    if not 0 <= slot < len(dims):
        raise DimMismatch(f"slot {slot} out of range for dims {dims}")
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[slot], dims[slot]):
        raise DimMismatch(f"operator shape {op.shape} does not fit slot of dim {dims[slot]}")
    out = np.eye(1, dtype=complex)
    for i, d in enumerate(dims):
        out = kron(out, op if i == slot else np.eye(d))
    return out


def axis_projection(ops: SpinOps, theta: float, phi: float) -> np.ndarray:
    """Component of the momentum along the unit vector at polar ``theta``, azimuth ``phi``.

    Array-valued ``phi`` gives a stack of operators.
    """
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    cx = np.multiply.outer(st * np.cos(phi), ops.jx)
    cy = np.multiply.outer(st * np.sin(phi), ops.jy)
    return cx + cy + np.cos(theta) * ops.jz


@dataclass(frozen=True)
class CoupledBasis:
    """Unitary from the uncoupled product basis to coupled ``|J, M>`` states.

    Rows of ``u`` are coupled states (J descending, M descending within J)
    written in the uncoupled basis; ``labels[i] = (J, M)`` for row ``i``.
    """

    j1: Fraction
    j2: Fraction
    u: np.ndarray
    labels: tuple[tuple[Fraction, Fraction], ...]

    def to_coupled(self, op: np.ndarray) -> np.ndarray:
        return self.u @ op @ dagger(self.u)

    def row(self, J, M) -> int:
        return self.labels.index((Fraction(J), Fraction(M)))


def coupled_basis(j1, j2) -> CoupledBasis:
    """Clebsch-Gordan transform built by lowering from each J's top state.

    Condon-Shortley: the top state ``|J, J>`` has a positive coefficient on the
    uncoupled configuration ``m1 = j1``.
    """
    j1, j2 = as_spin(j1), as_spin(j2)
    a, b = spin_ops(j1), spin_ops(j2)
    dims = [a.dim, b.dim]
    lower = embed(a.jminus, 0, dims) + embed(b.jminus, 1, dims)
    m_tot = np.add.outer(m_values(j1), m_values(j2)).ravel()
    m1 = np.repeat(m_values(j1), b.dim)

    rows: list[np.ndarray] = []
    labels: list[tuple[Fraction, Fraction]] = []
    J = j1 + j2
    while J >= abs(j1 - j2):
        sector = np.flatnonzero(np.isclose(m_tot, float(J)))
        basis = np.eye(len(m_tot), dtype=complex)[:, sector]
        if rows:
            taken = np.conj(np.array(rows)[:, sector])
            coeff = null_space(taken)
            top = basis @ coeff
        else:
            top = basis
        # exactly one new top state per J in the Clebsch-Gordan series
        top = top[:, 0]
        lead = np.flatnonzero((np.isclose(m1, float(j1))) & np.isclose(m_tot, float(J)))
        top = top * np.exp(-1j * np.angle(top[lead[0]]))
        top = top.real.astype(complex) if np.allclose(top.imag, 0) else top
        top /= np.linalg.norm(top)

        state = top
        M = J
        while True:
            rows.append(state)
            labels.append((J, M))
            if M == -J:
                break
            norm = np.sqrt(float(J * (J + 1) - M * (M - 1)))
            state = (lower @ state) / norm
            M -= 1
        J -= 1
    # row i holds the bra <J, M| so that u @ op @ u^dagger is the coupled-basis matrix
    u = np.conj(np.array(rows))
    return CoupledBasis(j1, j2, u, tuple(labels))
