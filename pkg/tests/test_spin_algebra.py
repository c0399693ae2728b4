from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import S
from sympy.physics.quantum.cg import CG

from spinberry.errors import DimMismatch, InvalidSpin
from spinberry.operators import eig_hermitian, maxnorm
from spinberry.spin_algebra import axis_projection, coupled_basis, embed, m_values, spin_ops

half_integers = st.integers(0, 8).map(lambda n: n / 2)


def test_spin_half_matrices():
    ops = spin_ops(0.5)
    assert np.allclose(ops.jz, np.diag([0.5, -0.5]))
    assert np.count_nonzero(ops.jplus) == 1 and ops.jplus[0, 1] == 1


def test_spin_one_ladder():
    assert np.allclose(np.diag(spin_ops(1).jplus, k=1), [np.sqrt(2), np.sqrt(2)])


@pytest.mark.parametrize("j", [-0.5, 0.25, 1.3, "x"])
def test_invalid_spin(j):
    with pytest.raises(InvalidSpin):
        spin_ops(j)


@settings(max_examples=20, deadline=None)
@given(j=half_integers)
def test_angular_momentum_algebra(j):
    o = spin_ops(j)
    assert maxnorm(o.jx @ o.jy - o.jy @ o.jx - 1j * o.jz) <= 1e-12
    assert maxnorm(o.jy @ o.jz - o.jz @ o.jy - 1j * o.jx) <= 1e-12
    assert maxnorm(o.jz @ o.jx - o.jx @ o.jz - 1j * o.jy) <= 1e-12
    assert maxnorm(o.casimir() - j * (j + 1) * np.eye(o.dim)) <= 1e-12
    assert maxnorm(o.jplus - (o.jx + 1j * o.jy)) <= 1e-15
    assert maxnorm(o.jminus - o.jplus.conj().T) == 0


def test_embed_conventions():
    jz = spin_ops(0.5).jz
    assert np.allclose(embed(jz, 0, [2, 2]), np.diag([0.5, 0.5, -0.5, -0.5]))
    assert np.allclose(embed(jz, 1, [2, 2]), np.diag([0.5, -0.5, 0.5, -0.5]))
    assert np.array_equal(embed(np.eye(3), 1, [2, 3, 2]), np.eye(12))


def test_embed_slots_commute(rng):
    dims = [2, 3]
    for _ in range(5):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        ea, eb = embed(a, 0, dims), embed(b, 1, dims)
        assert maxnorm(ea @ eb - eb @ ea) <= 1e-12


def test_embed_dim_mismatch():
    with pytest.raises(DimMismatch):
        embed(np.eye(2), 0, [3, 2])
    with pytest.raises(DimMismatch):
        embed(np.eye(2), 2, [2, 2])


def test_singlet_row():
    cb = coupled_basis(0.5, 0.5)
    row = cb.u[cb.row(0, 0)]
    assert np.allclose(row, [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0], atol=1e-15)


def test_stretched_state():
    cb = coupled_basis(1, 0.5)
    row = cb.u[cb.row(Fraction(3, 2), Fraction(3, 2))]
    assert np.array_equal(row, np.eye(6)[0].astype(complex))


@pytest.mark.parametrize("j1,j2", [(0.5, 0.5), (1, 0.5), (1.5, 1), (1, 1), (2, 1.5), (0.5, 0)])
def test_coupled_basis_against_sympy(j1, j2):
    cb = coupled_basis(j1, j2)
    ma, mb = m_values(j1), m_values(j2)
    cols = [(a, b) for a in ma for b in mb]
    for (J, M), row in zip(cb.labels, cb.u):
        expected = [
            float(CG(S(2 * j1) / 2, S(int(2 * a)) / 2, S(2 * j2) / 2, S(int(2 * b)) / 2, S(J.numerator) / J.denominator,
                     S(M.numerator) / M.denominator).doit())
            for a, b in cols
        ]
        assert np.allclose(row, expected, atol=1e-12), (J, M)


@pytest.mark.parametrize("j1,j2", [(0.5, 0.5), (1, 0.5), (1.5, 1.5)])
def test_coupled_basis_invariants(j1, j2):
    cb = coupled_basis(j1, j2)
    a, b = spin_ops(j1), spin_ops(j2)
    dims = [a.dim, b.dim]
    tot = [embed(x, 0, dims) + embed(y, 1, dims) for x, y in ((a.jx, b.jx), (a.jy, b.jy), (a.jz, b.jz))]
    s2 = sum(t @ t for t in tot)
    assert maxnorm(cb.u.conj().T @ cb.u - np.eye(cb.u.shape[0])) <= 1e-10
    Js = np.array([float(J) for J, _ in cb.labels])
    Ms = np.array([float(M) for _, M in cb.labels])
    assert maxnorm(cb.to_coupled(s2) - np.diag(Js * (Js + 1))) <= 1e-10
    assert maxnorm(cb.to_coupled(tot[2]) - np.diag(Ms)) <= 1e-10
    series = sorted({float(J) for J in Js})
    assert series == list(np.arange(abs(j1 - j2), j1 + j2 + 0.5, 1.0))
    assert len(Js) == (2 * j1 + 1) * (2 * j2 + 1)


def test_hyperfine_split_in_coupled_basis():
    cb = coupled_basis(0.5, 0.5)
    o = spin_ops(0.5)
    dot = sum(embed(x, 0, [2, 2]) @ embed(x, 1, [2, 2]) for x in (o.jx, o.jy, o.jz))
    expected = np.diag([0.25, 0.25, 0.25, -0.75])
    assert maxnorm(cb.to_coupled(dot) - expected) <= 1e-12


def test_axis_projection_special_directions():
    o = spin_ops(1)
    assert np.array_equal(axis_projection(o, 0.0, 0.7), o.jz)
    assert maxnorm(axis_projection(o, np.pi / 2, 0.0) - o.jx) <= 1e-15


@settings(max_examples=20, deadline=None)
@given(j=half_integers, theta=st.floats(0, np.pi), phi=st.floats(0, 2 * np.pi))
def test_axis_projection_spectrum(j, theta, phi):
    vals = eig_hermitian(axis_projection(spin_ops(j), theta, phi)).values
    assert np.allclose(vals, np.sort(m_values(j)), atol=1e-12)


def test_axis_projection_batched():
    o = spin_ops(1.5)
    phis = np.array([0.1, 0.2])
    stack = axis_projection(o, 0.4, phis)
    assert stack.shape == (2, 4, 4)
    assert np.allclose(stack[1], axis_projection(o, 0.4, 0.2))
