"""Band tracking, abelian Berry phases and non-abelian holonomies on a field loop.

The loop Hamiltonian is diagonalized at every sample; eigenvalues are grouped
into degenerate blocks, and each block's eigenframe is parallel-transported
around the loop. The transported frame at ``phi = 2 pi`` differs from the
starting frame by the holonomy (a phase for a one-dimensional block, a unitary
for a degenerate one).

A single loop fixes a Berry phase only modulo ``2 pi``. The unwrapped value is
taken on the branch continuously connected to the collapsed cone
(``theta = 0``, where every phase vanishes): a coarse ladder of cone angles
selects the branch and the fine loop supplies the digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.linalg import expm, logm

from . import _kernels
from .errors import (
    BlockInstability,
    DegenerateBand,
    NotProjectionEigenstate,
    TrackingFailure,
)
from .operators import EigenSystem, dagger, eig_hermitian, polar_unitary
from .systems import FieldLoop, SystemSpec, hamiltonian, loop_samples, total_projection

DEG_RTOL = 1e-8
MIN_OVERLAP = 0.9
PROJECTION_TOL = 1e-6
DEFAULT_SAMPLES = 2048
# continuation ladder: loop resolution and the per-rung phase budget
_AUX_SAMPLES = 128
_MAX_RUNG_PHASE = 0.5 * np.pi


def solid_angle(theta: float) -> float:
    """Solid angle of a cone with half-angle ``theta``."""
    return 2.0 * np.pi * (1.0 - np.cos(theta))


def predicted_phase(m: float, theta: float) -> float:
    return -float(m) * solid_angle(theta)


def wrap_phase(x):
    """Reduce to ``(-pi, pi]``."""
    y = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    return float(y) if np.ndim(y) == 0 else y


def round_half_integer(x: float) -> float:
    return round(2.0 * x) / 2.0


@dataclass(frozen=True)
class Block:
    """Degenerate eigenvalue block, possibly split by the conserved axis projection.

    ``bands`` are ascending-energy indices of the eigen-solver output;
    ``projection`` is set when the block was split by the total momentum along
    the field axis.
    """

    bands: tuple[int, ...]
    dim: int
    energy: float
    projection: float | None = None


@dataclass(frozen=True, eq=False)
class LoopSpectrum:
    spec: SystemSpec
    loop: FieldLoop
    energies: np.ndarray = field(repr=False)
    blocks: tuple[Block, ...]
    frames: tuple[np.ndarray, ...] = field(repr=False)
    min_overlap: tuple[float, ...]
    resolved: bool = False

    @cached_property
    def continued_phases(self) -> np.ndarray:
        key = [(b.bands, b.dim, b.projection) for b in self.blocks]
        phases, signature = _continued_phases(self.spec, self.loop.theta, self.loop.direction, self.resolved)
        if signature != key:
            raise BlockInstability("block structure differs from the continuation ladder")
        return phases.copy()


def diagonalize_loop(spec: SystemSpec, loop: FieldLoop) -> EigenSystem:
    return eig_hermitian(hamiltonian(spec, loop.theta, loop.phis))


def cluster_blocks(values: np.ndarray, tol: float) -> list[tuple[int, ...]]:
    """Group ascending eigenvalues whose neighbours lie within ``tol``."""
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [tuple(g) for g in groups]


def degeneracy_tol(energies: np.ndarray) -> float:
    spread = float(np.max(energies) - np.min(energies))
    return DEG_RTOL * max(1.0, spread)


def _check_blocks(energies: np.ndarray, groups: list[tuple[int, ...]], tol: float) -> None:
    for g in groups:
        spread = energies[:, g[-1]] - energies[:, g[0]]
        if np.any(spread > tol):
            k = int(np.argmax(spread))
            raise BlockInstability(f"block {g} splits by {spread[k]:.3e} at sample {k}")
    for a, b in zip(groups, groups[1:]):
        gap = energies[:, b[0]] - energies[:, a[-1]]
        if np.any(gap <= tol):
            k = int(np.argmin(gap))
            raise BlockInstability(f"blocks {a} and {b} merge at sample {k} (gap {gap[k]:.3e})")


def _split_by_projection(spec, loop, raw, energy):
    """Split a degenerate frame path by the conserved total projection along the field."""
    proj = total_projection(spec, loop.theta, loop.phis)
    reduced = dagger(raw) @ proj @ raw
    vals, vecs = np.linalg.eigh(0.5 * (reduced + dagger(reduced)))
    if np.max(np.ptp(vals, axis=0)) > PROJECTION_TOL:
        raise BlockInstability("axis projection inside a degenerate block drifts along the loop")
    groups = cluster_blocks(vals[0], PROJECTION_TOL)
    pieces = []
    # largest projection first
    for g in reversed(groups):
        sub = raw @ vecs[:, :, list(g)]
        pieces.append((sub, round_half_integer(float(np.mean(vals[0, list(g)])))))
    return pieces


def build_loop_spectrum(
    spec: SystemSpec,
    loop: FieldLoop,
    energies: np.ndarray,
    vectors: np.ndarray,
    resolve: bool = False,
) -> LoopSpectrum:
    """Group, optionally split, and parallel-transport precomputed eigensystems.

    ``vectors[k, :, i]`` is the eigenvector of ``energies[k, i]`` at sample
    ``k``. Any per-sample phase or block-unitary mixing of the input drops out
    of every gauge-invariant output.
    """
    tol = degeneracy_tol(energies)
    groups = cluster_blocks(energies[0], tol)
    _check_blocks(energies, groups, tol)

    blocks: list[Block] = []
    raw_frames: list[np.ndarray] = []
    for g in groups:
        raw = vectors[:, :, list(g)]
        energy = float(np.mean(energies[:, list(g)]))
        if resolve and len(g) > 1:
            for sub, m in _split_by_projection(spec, loop, raw, energy):
                blocks.append(Block(g, sub.shape[2], energy, m))
                raw_frames.append(sub)
        else:
            blocks.append(Block(g, len(g), energy))
            raw_frames.append(raw)

    frames, overlaps = [], []
    for b, raw in zip(blocks, raw_frames):
        transported, smin = _kernels.transport(raw)
        worst = float(smin.min())
        if worst < MIN_OVERLAP:
            k = int(np.argmin(smin))
            raise TrackingFailure(
                f"block {b.bands}: overlap singular value {worst:.3f} between samples {k} and {k + 1};"
                " loop too coarse"
            )
        frames.append(transported)
        overlaps.append(worst)
    return LoopSpectrum(spec, loop, energies, tuple(blocks), tuple(frames), tuple(overlaps), resolve)


def track_bands(spec: SystemSpec, loop: FieldLoop, resolve: bool = False) -> LoopSpectrum:
    """Diagonalize along ``loop`` and build the parallel-transported spectrum.

    With ``resolve=True`` degenerate blocks are split into eigenspaces of the
    total momentum along the field axis, which commutes with every supported
    Hamiltonian.
    """
    es = diagonalize_loop(spec, loop)
    return build_loop_spectrum(spec, loop, es.values, es.vectors, resolve=resolve)


def _frame_holonomy(frames: np.ndarray) -> np.ndarray:
    u = dagger(frames[0]) @ frames[-1]
    return polar_unitary(u)[0]


def wilson_line(ls: LoopSpectrum, block: int, extrapolate: bool = True) -> np.ndarray:
    """Holonomy of one block in its sample-0 frame.

    The discrete Wilson loop carries an error series in even powers of
    ``1/n_samples``; with ``extrapolate`` the leading term is removed using
    the half-resolution loop made of every other sample.
    """
    frames = ls.frames[block]
    full = _frame_holonomy(frames)
    if not extrapolate or ls.loop.n_samples % 2:
        return full
    half_frames, _ = _kernels.transport(frames[::2])
    half = _frame_holonomy(half_frames)
    correction = logm(dagger(half) @ full)
    # generator of a unitary is anti-Hermitian; drop roundoff
    correction = 0.5 * (correction - dagger(correction))
    return polar_unitary(full @ expm(correction / 3.0))[0]


def _band_fine_phase(ls: LoopSpectrum, block: int) -> float:
    return float(np.angle(wilson_line(ls, block)[0, 0]))


def _block_signature(ls: LoopSpectrum):
    return [(b.bands, b.dim, b.projection) for b in ls.blocks]


@lru_cache(maxsize=256)
def _continued_phases(spec: SystemSpec, theta: float, direction: int, resolved: bool):
    """Unwrapped phase per block by continuation in the cone angle from theta = 0.

    Returns the phases (NaN for blocks of dimension > 1) and the block
    signature they refer to.
    """
    ref = track_bands(spec, loop_samples(theta, _AUX_SAMPLES, direction), resolved)
    signature = _block_signature(ref)
    one_dim = np.array([b.dim == 1 for b in ref.blocks])
    total = np.where(one_dim, 0.0, np.nan)
    if theta == 0.0:
        return total, signature
    jmax = max(float(spec.total_spin_max), 0.5)
    dtheta = min(0.1, _MAX_RUNG_PHASE / (2.0 * np.pi * jmax))
    rungs = np.linspace(0.0, theta, max(2, math.ceil(theta / dtheta)) + 1)[1:]
    prev = np.zeros(len(ref.blocks))
    ref_energy = np.array([b.energy for b in ref.blocks])
    for th in rungs:
        aux = ref if th == theta else track_bands(spec, loop_samples(th, _AUX_SAMPLES, direction), resolved)
        aux_energy = np.array([b.energy for b in aux.blocks])
        if _block_signature(aux) != signature or not np.allclose(
            aux_energy, ref_energy, atol=1e-6 * max(1.0, np.ptp(ref_energy))
        ):
            raise BlockInstability(f"block structure changes between theta={th:.4f} and theta={theta:.4f}")
        cur = np.array(
            [np.angle(_frame_holonomy(f)[0, 0]) if b.dim == 1 else 0.0 for b, f in zip(aux.blocks, aux.frames)]
        )
        total = total + wrap_phase(cur - prev)
        prev = cur
    total.setflags(write=False)
    return total, signature


def berry_phase_band(ls: LoopSpectrum, band: int) -> float:
    """Unwrapped Berry phase of a one-dimensional block.

    Modulo ``2 pi`` this is minus the summed step phases of the closed,
    parallel-transported frame path; the branch is the one reached
    continuously from the collapsed cone.
    """
    b = ls.blocks[band]
    if b.dim != 1:
        raise DegenerateBand(f"block {band} has dimension {b.dim}; use wz_holonomy")
    fine = _band_fine_phase(ls, band)
    coarse = float(ls.continued_phases[band])
    return fine + 2.0 * np.pi * round((coarse - fine) / (2.0 * np.pi))


def step_phases(ls: LoopSpectrum, band: int) -> np.ndarray:
    """Per-step phases ``Im log <v_k|v_k+1>`` in a smooth single-valued gauge.

    The gauge is the parallel-transported frame with the discrete loop phase
    spread evenly over the steps, so every entry is ``O(1/n_samples)``. Their
    negated sum is the unextrapolated Wilson-loop phase on the branch of
    ``berry_phase_band``.
    """
    v = ls.frames[band][:, :, 0]
    unwrapped = berry_phase_band(ls, band)
    raw = float(np.angle(np.vdot(v[0], v[-1])))
    gamma = unwrapped + wrap_phase(raw - unwrapped)
    n = ls.loop.n_samples
    smooth = v * np.exp(-1j * gamma * np.arange(n + 1) / n)[:, None]
    smooth[-1] = smooth[0]
    return np.angle(np.einsum("ki,ki->k", np.conj(smooth[:-1]), smooth[1:]))


def wz_holonomy(ls: LoopSpectrum, block: int) -> tuple[np.ndarray, np.ndarray]:
    """Wilczek-Zee holonomy of a block and its eigenphases in ``(-pi, pi]`` (mod 2 pi)."""
    u = wilson_line(ls, block)
    phases = wrap_phase(np.angle(np.linalg.eigvals(u)))
    return u, np.sort(np.atleast_1d(phases))[::-1]


def m_label(ls: LoopSpectrum, band: int) -> float:
    """Projection of the total momentum on the field axis for a one-dimensional block."""
    b = ls.blocks[band]
    if b.dim != 1:
        raise DegenerateBand(f"block {band} has dimension {b.dim}")
    v0 = ls.frames[band][0][:, 0]
    proj = total_projection(ls.spec, ls.loop.theta, ls.loop.phis[0])
    m = float(np.real(np.vdot(v0, proj @ v0)))
    rounded = round_half_integer(m)
    if abs(m - rounded) > PROJECTION_TOL:
        raise NotProjectionEigenstate(f"<S_z'> = {m:.9f} is not a half-integer")
    return rounded


@dataclass
class BandPhase:
    block: int
    energy: float
    m_label: float
    berry_phase: float
    predicted_phase: float


@dataclass
class BlockHolonomy:
    block: int
    energy: float
    holonomy: np.ndarray
    eigenphases: np.ndarray


@dataclass
class HolonomyResult:
    theta: float
    n_samples: int
    bands: list[BandPhase]
    blocks: list[BlockHolonomy]


def holonomy_result(ls: LoopSpectrum) -> HolonomyResult:
    bands, blocks = [], []
    for i, b in enumerate(ls.blocks):
        if b.dim == 1:
            m = m_label(ls, i)
            predicted = ls.loop.direction * predicted_phase(m, ls.loop.theta)
            bands.append(BandPhase(i, b.energy, m, berry_phase_band(ls, i), predicted))
        else:
            u, ph = wz_holonomy(ls, i)
            blocks.append(BlockHolonomy(i, b.energy, u, ph))
    return HolonomyResult(ls.loop.theta, ls.loop.n_samples, bands, blocks)


def wz_projection_phases(ls: LoopSpectrum, block: int) -> list[tuple[float, float | None]]:
    """Holonomy phases in the basis that diagonalizes the field-axis projection.

    Returns ``(m, phase)`` per projection eigenvector of the block at sample 0.
    ``phase`` is ``None`` when the holonomy mixes that vector with others
    (non-abelian case), i.e. when ``|<m|U|m>|`` falls short of 1.
    """
    u = wilson_line(ls, block)
    f = ls.frames[block][0]
    proj = total_projection(ls.spec, ls.loop.theta, ls.loop.phis[0])
    reduced = dagger(f) @ proj @ f
    vals, vecs = np.linalg.eigh(0.5 * (reduced + dagger(reduced)))
    out = []
    for m, w in sorted(zip(vals, vecs.T), key=lambda t: -t[0]):
        diag = np.vdot(w, u @ w)
        phase = wrap_phase(np.angle(diag)) if abs(abs(diag) - 1.0) < 1e-8 else None
        out.append((round_half_integer(float(m)), phase))
    return out


def block_projections(ls: LoopSpectrum, block: int) -> np.ndarray:
    """Eigenvalues of the field-axis projection restricted to a block at sample 0."""
    f = ls.frames[block][0]
    proj = total_projection(ls.spec, ls.loop.theta, ls.loop.phis[0])
    reduced = dagger(f) @ proj @ f
    return np.sort(np.linalg.eigvalsh(0.5 * (reduced + dagger(reduced))))[::-1]
