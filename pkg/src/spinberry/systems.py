"""Parameterized Hamiltonians and the closed azimuthal field loop.

Units: hbar = 1 and mu_B = 1, so G, K, B0 and all energies are pure numbers.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import InvalidSpec, InvalidSpin, TooFewSamples
from .spin_algebra import SpinOps, as_spin, axis_projection, embed, spin_ops

KINDS = ("two_momenta", "quadrupole")

# Signed g-factors in the convention H_Z = -B.(g1 S1 + g2 S2) with a single
# magneton for both particles; the heavy partner's g is rescaled by m_e/m.
_G_ELECTRON = -2.00231930436
_G_POSITRON = 2.00231930436
_PROTON_SCALED = 5.5856946893 / 1836.15267343
_ANTIMUON_SCALED = 2.0023318418 / 206.7682830

PRESETS: dict[str, dict] = {
    "hydrogen": {"j1": 0.5, "j2": 0.5, "g1": _G_ELECTRON, "g2": _PROTON_SCALED},
    "positronium": {"j1": 0.5, "j2": 0.5, "g1": _G_ELECTRON, "g2": _G_POSITRON},
    "muonium": {"j1": 0.5, "j2": 0.5, "g1": _G_ELECTRON, "g2": _ANTIMUON_SCALED},
    # orbital L = 1 (g = -1) with the electron spin
    "spin-orbit": {"j1": 1.0, "j2": 0.5, "g1": -1.0, "g2": _G_ELECTRON},
}


@dataclass(frozen=True)
class SystemSpec:
    """Declarative description of one physical system.

    ``two_momenta`` uses ``j1, j2, G, g1, g2, B0``; ``quadrupole`` uses ``j, K``.
    A single spin is ``two_momenta`` with ``j2 = 0``.
    """

    kind: str = "two_momenta"
    j1: float = 0.5
    j2: float = 0.5
    G: float = 1.0
    g1: float = 2.0
    g2: float = -1.0
    B0: float = 1.0
    j: float = 1.0
    K: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"kind must be one of {KINDS}, got {self.kind!r}")
        try:
            if self.kind == "two_momenta":
                as_spin(self.j1)
                as_spin(self.j2)
            else:
                as_spin(self.j)
        except InvalidSpin as exc:
            raise InvalidSpec(str(exc)) from exc
        for name in ("G", "g1", "g2", "B0", "K"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidSpec(f"{name} must be finite")
        if self.B0 < 0:
            raise InvalidSpec(f"B0 must be >= 0, got {self.B0}")
        if self.kind == "quadrupole" and as_spin(self.j) < 1:
            raise InvalidSpec("quadrupole coupling vanishes identically for j < 1")

    @property
    def dims(self) -> list[int]:
        if self.kind == "two_momenta":
            return [int(2 * as_spin(self.j1)) + 1, int(2 * as_spin(self.j2)) + 1]
        return [int(2 * as_spin(self.j)) + 1]

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def total_spin_max(self) -> Fraction:
        if self.kind == "two_momenta":
            return as_spin(self.j1) + as_spin(self.j2)
        return as_spin(self.j)

    def to_dict(self) -> dict:
        keys = ("j1", "j2", "G", "g1", "g2", "B0") if self.kind == "two_momenta" else ("j", "K")
        d = asdict(self)
        return {"kind": self.kind, **{k: d[k] for k in keys}}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemSpec":
        allowed = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - allowed
        if unknown:
            raise InvalidSpec(f"unknown SystemSpec keys: {sorted(unknown)}")
        kw = {k: (v if k == "kind" else float(v)) for k, v in data.items()}
        return cls(**kw)

    @classmethod
    def from_json(cls, path: str | Path) -> "SystemSpec":
        with open(path) as fh:
            data = json.load(fh)
        return cls.from_dict({k: v for k, v in data.items() if k in cls.__dataclass_fields__})

    @classmethod
    def preset(cls, name: str, G: float = 1.0, B0: float = 1.0) -> "SystemSpec":
        if name not in PRESETS:
            raise InvalidSpec(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return cls(kind="two_momenta", G=G, B0=B0, **PRESETS[name])


@dataclass(frozen=True)
class FieldLoop:
    """Closed azimuthal loop at fixed cone angle.

    ``phis[k] = direction * 2 pi k / n_samples``; ``direction = -1`` traverses
    the cone clockwise.
    """

    theta: float
    n_samples: int
    phis: np.ndarray = field(repr=False)
    direction: int = 1

    @property
    def degenerate(self) -> bool:
        """The cone has collapsed to a point (theta = 0 or pi)."""
        return bool(np.isclose(np.sin(self.theta), 0.0, atol=1e-15))

    def reversed(self) -> "FieldLoop":
        return loop_samples(self.theta, self.n_samples, direction=-self.direction)

    def halved(self) -> "FieldLoop":
        """Every other sample of this loop (requires an even sample count)."""
        if self.n_samples % 2:
            raise TooFewSamples("halving needs an even n_samples")
        return FieldLoop(self.theta, self.n_samples // 2, self.phis[::2], self.direction)


def loop_samples(theta: float, n_samples: int, direction: int = 1) -> FieldLoop:
    if n_samples < 8:
        raise TooFewSamples(f"need at least 8 samples, got {n_samples}")
    if not 0.0 <= theta <= np.pi:
        raise InvalidSpec(f"theta must lie in [0, pi], got {theta}")
    if direction not in (1, -1):
        raise InvalidSpec("direction must be +1 or -1")
    phis = direction * 2.0 * np.pi * np.arange(n_samples + 1) / n_samples
    phis[-1] = direction * 2.0 * np.pi
    phis.setflags(write=False)
    return FieldLoop(float(theta), int(n_samples), phis, direction)


def field_vector(b0: float, theta: float, phi: float) -> np.ndarray:
    if b0 < 0:
        raise InvalidSpec(f"b0 must be >= 0, got {b0}")
    st = np.sin(theta)
    return b0 * np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


@lru_cache(maxsize=64)
def _component_ops(kind: str, spins: tuple) -> tuple:
    if kind == "two_momenta":
        a, b = spin_ops(spins[0]), spin_ops(spins[1])
        dims = [a.dim, b.dim]
        s1 = tuple(embed(m, 0, dims) for m in (a.jx, a.jy, a.jz))
        s2 = tuple(embed(m, 1, dims) for m in (b.jx, b.jy, b.jz))
        return s1, s2
    ops = spin_ops(spins[0])
    return ((ops.jx, ops.jy, ops.jz),)


def _spins(spec: SystemSpec) -> tuple:
    if spec.kind == "two_momenta":
        return (as_spin(spec.j1), as_spin(spec.j2))
    return (as_spin(spec.j),)


def total_ops(spec: SystemSpec) -> SpinOps:
    """Total angular momentum of the system on its full Hilbert space."""
    comps = _component_ops(spec.kind, _spins(spec))
    jx, jy, jz = (sum(c[i] for c in comps) for i in range(3))
    jplus = jx + 1j * jy
    return SpinOps(spec.total_spin_max, jx, jy, jz, jplus, jplus.conj().T)


def total_projection(spec: SystemSpec, theta: float, phi: float) -> np.ndarray:
    return axis_projection(total_ops(spec), theta, phi)


def _xyz(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return st * np.cos(phi), st * np.sin(phi), np.cos(theta) * np.ones_like(phi)


def two_momenta_hamiltonian(spec: SystemSpec, theta, phi) -> np.ndarray:
    """``G S1.S2 - B0 n.(g1 S1 + g2 S2)``; ``phi`` may be an array (batched output)."""
    if spec.kind != "two_momenta":
        raise InvalidSpec("two_momenta_hamiltonian needs kind='two_momenta'")
    s1, s2 = _component_ops(spec.kind, _spins(spec))
    hyperfine = spec.G * sum(a @ b for a, b in zip(s1, s2))
    zeeman = [spec.g1 * a + spec.g2 * b for a, b in zip(s1, s2)]
    n = _xyz(theta, phi)
    h = hyperfine - spec.B0 * sum(np.multiply.outer(ni, zi) for ni, zi in zip(n, zeeman))
    return np.asarray(h, dtype=complex)


def quadrupole_hamiltonian(spec: SystemSpec, theta, phi) -> np.ndarray:
    """``K (J_z'^2 - J^2 / 3)`` with ``z'`` the rotating gradient axis."""
    if spec.kind != "quadrupole":
        raise InvalidSpec("quadrupole_hamiltonian needs kind='quadrupole'")
    (j,) = _component_ops(spec.kind, _spins(spec))
    n = _xyz(theta, phi)
    jzp = sum(np.multiply.outer(ni, ji) for ni, ji in zip(n, j))
    jj = float(as_spin(spec.j))
    casimir = jj * (jj + 1) * np.eye(j[0].shape[0])
    return np.asarray(spec.K * (jzp @ jzp - casimir / 3.0), dtype=complex)


def hamiltonian(spec: SystemSpec, theta, phi) -> np.ndarray:
    if spec.kind == "two_momenta":
        return two_momenta_hamiltonian(spec, theta, phi)
    return quadrupole_hamiltonian(spec, theta, phi)
