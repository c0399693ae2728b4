import numpy as np
import pytest

from spinberry.adiabatic import band_gap, evolve_loop, extract_geometric_phase
from spinberry.berry import solid_angle, wrap_phase
from spinberry.errors import DegenerateBand, NonAdiabatic
from spinberry.systems import SystemSpec


def test_spin_half_gap_is_zeeman_splitting(spin_half):
    assert abs(band_gap(spin_half, 1.0, 0) - 2.0) <= 1e-12


def test_spin_half_phase_and_norm(spin_half):
    theta = np.pi / 3
    run = evolve_loop(spin_half, theta, omega=2.0 / 250, n_steps=8192)
    assert run.adiabatic
    assert run.norm_drift <= 1e-10
    # ground band has m = +1/2 (g > 0 aligns the moment against S)
    expected = wrap_phase(-0.5 * solid_angle(theta))
    assert abs(wrap_phase(extract_geometric_phase(run) - expected)) <= 1e-2


def test_midpoint_stepping_is_second_order(spin_half):
    phases = [
        extract_geometric_phase(evolve_loop(spin_half, 1.0, omega=0.02, n_steps=n)) for n in (2048, 4096, 8192)
    ]
    ratio = abs(phases[0] - phases[1]) / abs(phases[1] - phases[2])
    assert 3.5 < ratio < 4.5


def test_fast_drive_is_flagged(spin_half):
    with pytest.raises(NonAdiabatic):
        evolve_loop(spin_half, np.pi / 2, omega=5.0, n_steps=2000)
    run = evolve_loop(spin_half, np.pi / 2, omega=5.0, n_steps=2000, allow_nonadiabatic=True)
    assert not run.adiabatic


def test_degenerate_block_rejected():
    with pytest.raises(DegenerateBand):
        evolve_loop(SystemSpec(kind="quadrupole", j=1), 1.0, omega=0.01, n_steps=2000, initial_band=1)


def test_argument_validation(spin_half):
    with pytest.raises(ValueError):
        evolve_loop(spin_half, 1.0, omega=-1.0, n_steps=2000)
    with pytest.raises(ValueError):
        evolve_loop(spin_half, 1.0, omega=0.1, n_steps=10)
