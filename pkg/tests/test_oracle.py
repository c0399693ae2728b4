import numpy as np
import pytest

from spinberry.berry import berry_phase_band, m_label, track_bands, wrap_phase
from spinberry.errors import UnsupportedKind
from spinberry.oracle import (
    expected_phases,
    printed_spin1_half_energies,
    printed_two_spin_eigensystem,
    table_kind,
    two_spin_coupling_constants,
    two_spin_transcription_report,
)
from spinberry.systems import SystemSpec, loop_samples


def test_table_kinds():
    assert table_kind(SystemSpec()) == "two_spin"
    assert table_kind(SystemSpec.preset("spin-orbit")) == "spin1_half"
    assert table_kind(SystemSpec(j1=0.5, j2=1.0)) == "spin1_half"
    assert table_kind(SystemSpec(kind="quadrupole", j=1)) == "quadrupole_j1"
    assert table_kind(SystemSpec(kind="quadrupole", j=2)) is None
    with pytest.raises(UnsupportedKind):
        expected_phases("three_spin", 0.3)


def test_tables_follow_projection_law():
    theta = 0.8
    omega = 2 * np.pi * (1 - np.cos(theta))
    for kind in ("two_spin", "spin1_half"):
        for row in expected_phases(kind, theta).rows:
            assert abs(row.phase + row.m_label * omega) <= 1e-12
    quad = {r.label: r for r in expected_phases("quadrupole_j1", theta).rows}
    for label in ("chi+", "chi-"):
        assert quad[label].mod_2pi
        assert abs(wrap_phase(quad[label].phase + quad[label].m_label * omega)) <= 1e-12
    assert quad["chi0"].disputed and not quad["chi+"].disputed


def test_printed_states_are_normalized_rows():
    sol = printed_two_spin_eigensystem(1.0, -0.4, 0.3, 0.7, 0.2)
    assert np.allclose(np.linalg.norm(sol.states, axis=1), 1.0)
    assert sol.states.shape == (4, 4)


def test_printed_stretched_state_is_an_eigenvector():
    spec = SystemSpec(G=1.0, g1=2.0, g2=-1.0, B0=0.5)
    rows = {r["state"]: r for r in two_spin_transcription_report(spec, 0.7, 0.3)}
    n1 = rows["n1"]
    # the printed vector is exact; any residual is the printed energy offset
    stretched = spec.G / 4 - spec.B0 * (spec.g1 + spec.g2) / 2
    assert abs(n1["rayleigh_energy"] - stretched) <= 1e-12
    assert abs(n1["residual"] - abs(n1["printed_energy"] - n1["rayleigh_energy"])) <= 1e-12


def test_transcription_report_fields_are_finite():
    for name in ("hydrogen", "positronium", "muonium"):
        spec = SystemSpec.preset(name, G=1.0, B0=0.7)
        for row in two_spin_transcription_report(spec, 1.1, 0.0):
            assert all(np.isfinite(v) for k, v in row.items() if k != "state")


def test_coupling_constants():
    eta, gp, gm = two_spin_coupling_constants(SystemSpec(G=1.5, g1=2, g2=-1, B0=2))
    assert (eta, gp, gm) == (1.5, -1.0, -3.0)


def test_spin1_half_energies_domain():
    assert printed_spin1_half_energies(1.0, -0.5, -1.0) is not None
    # k^2 < 0 when the printed ratio changes sign
    assert printed_spin1_half_energies(1.0, 1.0, -0.5) is None


def test_two_spin_table_against_engine():
    theta = 1.1
    spec = SystemSpec.preset("hydrogen", G=1.0, B0=1.0)
    ls = track_bands(spec, loop_samples(theta, 1024), resolve=True)
    computed = sorted((m_label(ls, i), berry_phase_band(ls, i)) for i in range(len(ls.blocks)))
    printed = sorted((r.m_label, r.phase) for r in expected_phases("two_spin", theta).rows)
    assert np.allclose(np.array(computed), np.array(printed), atol=1e-6)
