"""Brute-force time evolution over one drive period.

The field azimuth advances as ``phi = omega t``. The state starts in an
instantaneous eigenvector at ``phi = 0`` and is stepped with exact
piecewise-constant propagators sampled at step midpoints. The geometric phase
is what remains of ``arg <n(0)|psi(T)>`` after removing the dynamical phase
``-E_n T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .berry import DEFAULT_SAMPLES, track_bands, wrap_phase
from .errors import DegenerateBand, NonAdiabatic
from .operators import step_propagator
from .systems import SystemSpec, hamiltonian, loop_samples

ADIABATIC_MIN_OVERLAP = 0.99
GAP_DIVISOR = 500.0
STEPS_PER_SAMPLE = 20
_CHUNK = 2048


@dataclass
class EvolutionRun:
    spec: SystemSpec
    theta: float
    omega: float
    n_steps: int
    initial_band: int
    initial_state: np.ndarray = field(repr=False)
    final_state: np.ndarray = field(repr=False)
    overlap: complex
    energy: float
    norm_drift: float

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    @property
    def adiabatic(self) -> bool:
        return abs(self.overlap) >= ADIABATIC_MIN_OVERLAP


def band_gap(spec: SystemSpec, theta: float, band: int, n_samples: int = 64) -> float:
    """Smallest energy separation of ``band`` from every other block along the loop."""
    ls = track_bands(spec, loop_samples(theta, n_samples))
    b = ls.blocks[band]
    others = [i for i in range(ls.energies.shape[1]) if i not in b.bands]
    if not others:
        return np.inf
    mine = ls.energies[:, list(b.bands)].mean(axis=1)
    return float(np.min(np.abs(ls.energies[:, others] - mine[:, None])))


def evolve_loop(
    spec: SystemSpec,
    theta: float,
    omega: float | None = None,
    n_steps: int | None = None,
    initial_band: int = 0,
    *,
    allow_nonadiabatic: bool = False,
) -> EvolutionRun:
    """Evolve the ``initial_band`` eigenstate through one period ``2 pi / omega``.

    ``omega`` defaults to the band's minimal gap over 500; ``n_steps`` to
    20 steps per default loop sample.
    """
    ls = track_bands(spec, loop_samples(theta, 64))
    block = ls.blocks[initial_band]
    if block.dim != 1:
        raise DegenerateBand(f"block {initial_band} has dimension {block.dim}")
    if omega is None:
        omega = band_gap(spec, theta, initial_band) / GAP_DIVISOR
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if n_steps is None:
        n_steps = STEPS_PER_SAMPLE * DEFAULT_SAMPLES
    if n_steps < 1000:
        raise ValueError(f"need at least 1000 steps, got {n_steps}")

    psi0 = ls.frames[initial_band][0][:, 0].copy()
    period = 2.0 * np.pi / omega
    dt = period / n_steps
    psi = psi0
    drift = 0.0
    for start in range(0, n_steps, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n_steps))
        phis = omega * (k + 0.5) * dt
        u = step_propagator(hamiltonian(spec, theta, phis), dt)
        psi, d = _kernels.propagate(u, psi)
        drift = max(drift, d)

    overlap = complex(np.vdot(psi0, psi))
    run = EvolutionRun(
        spec, float(theta), float(omega), int(n_steps), initial_band, psi0, psi, overlap, block.energy, drift
    )
    if not run.adiabatic and not allow_nonadiabatic:
        raise NonAdiabatic(f"|<n(0)|psi(T)>| = {abs(overlap):.4f} < {ADIABATIC_MIN_OVERLAP}; lower omega")
    return run


def extract_geometric_phase(run: EvolutionRun) -> float:
    """Geometric phase modulo 2 pi, in ``(-pi, pi]``."""
    return wrap_phase(np.angle(run.overlap) + run.energy * run.period)
