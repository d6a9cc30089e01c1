import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fracfp.errors import SingularSystemError
from fracfp.fem1d import (
    TriDiagMatrix,
    apply_dirichlet,
    assemble_convection,
    assemble_load,
    assemble_mass,
    assemble_stiffness,
    solve_tridiag,
)
from fracfp.meshing import SpaceGrid


def _const(c):
    return lambda x, t: np.full_like(x, c, dtype=float)


def _random_tridiag(rng, m, dominance=1.0):
    sub = rng.uniform(-1, 1, m - 1)
    sup = rng.uniform(-1, 1, m - 1)
    diag = rng.uniform(0.1, 1, m) + dominance * 2.0
    diag *= rng.choice([-1.0, 1.0], m)
    return TriDiagMatrix(sub, diag, sup)


# matrix type ----------------------------------------------------------------


@settings(deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_matvec_matches_dense(m, seed):
    rng = np.random.default_rng(seed)
    A = TriDiagMatrix(rng.standard_normal(m - 1), rng.standard_normal(m), rng.standard_normal(m - 1))
    x = rng.standard_normal(m)
    assert np.allclose(A @ x, A.to_dense() @ x, rtol=1e-13, atol=1e-13)
    assert np.array_equal(A.T.to_dense(), A.to_dense().T)
    assert np.allclose((A + A.scaled(2.0)).to_dense(), 3.0 * A.to_dense())
    assert np.allclose((A - A).to_dense(), 0.0)
    assert A.norm_inf() == pytest.approx(np.abs(A.to_dense()).sum(axis=1).max())


def test_band_lengths_checked():
    with pytest.raises(ValueError):
        TriDiagMatrix([1.0], [1.0, 2.0, 3.0], [1.0, 1.0])


# mass and stiffness ---------------------------------------------------------


def test_mass_interior_row():
    M = assemble_mass(SpaceGrid(0, 1, 2))
    assert M.sub[0] == pytest.approx(1 / 12)
    assert M.diag[1] == pytest.approx(1 / 3)
    assert M.sup[1] == pytest.approx(1 / 12)


@given(st.floats(-100, 100), st.floats(1e-2, 100), st.integers(2, 3000))
def test_mass_total_is_domain_length(a, length, nx):
    g = SpaceGrid(a, a + length, nx)
    ones = np.ones(g.size)
    assert ones @ assemble_mass(g).matvec(ones) == pytest.approx(g.b - g.a, rel=1e-12)


def test_mass_total_full_domain():
    g = SpaceGrid(-5, 15, 20480)
    ones = np.ones(g.size)
    assert ones @ assemble_mass(g).matvec(ones) == pytest.approx(20.0, rel=1e-13)


def test_mass_spd():
    M = assemble_mass(SpaceGrid(0, 1, 8)).to_dense()
    assert np.array_equal(M, M.T)
    assert np.linalg.eigvalsh(M).min() > 0


def test_stiffness_interior_row():
    K = assemble_stiffness(SpaceGrid(0, 1, 4))
    assert (K.sub[1], K.diag[2], K.sup[2]) == (-4.0, 8.0, -4.0)
    assert np.array_equal(K.sub, K.sup)


def test_stiffness_annihilates_constants():
    g = SpaceGrid(-5, 15, 100)
    Ku = assemble_stiffness(g).matvec(np.full(g.size, 3.7))
    assert np.allclose(Ku, 0.0, atol=1e-11)


def test_stiffness_on_quadratic():
    g = SpaceGrid(0, 1, 16)
    Ku = assemble_stiffness(g).matvec(g.nodes**2)
    assert np.allclose(Ku[1:-1], -2.0 * g.h, rtol=1e-10)


# convection -----------------------------------------------------------------


def _hat(grid, i):
    x = grid.nodes
    h = grid.h

    def phi(s):
        return max(0.0, 1.0 - abs(s - x[i]) / h)

    def dphi(s):
        if x[i] - h < s < x[i]:
            return 1.0 / h
        if x[i] < s < x[i] + h:
            return -1.0 / h
        return 0.0

    return phi, dphi


def _dense_convection(grid, F, t):
    # C[i, j] = integral of F phi_j phi_i', cell by cell so the kinks are exact
    m = grid.size
    C = np.zeros((m, m))
    for i in range(m):
        _, dphi_i = _hat(grid, i)
        for j in range(max(0, i - 1), min(m, i + 2)):
            phi_j, _ = _hat(grid, j)
            total = 0.0
            for c in range(grid.nx):
                lo, hi = grid.nodes[c], grid.nodes[c + 1]
                val, _ = integrate.quad(
                    lambda s: float(F(np.array(s), t)) * phi_j(s) * dphi_i(s),
                    lo, hi, epsabs=1e-14, epsrel=1e-12,
                )
                total += val
            C[i, j] = total
    return C


def test_convection_constant_force_row():
    C = assemble_convection(SpaceGrid(0, 1, 4), _const(1.0), 0.0)
    # row i: C[i,i-1] = integral of phi_{i-1} phi_i' = +1/2, C[i,i+1] = -1/2
    assert C.sub[1] == pytest.approx(0.5)
    assert C.diag[2] == pytest.approx(0.0, abs=1e-15)
    assert C.sup[2] == pytest.approx(-0.5)


def test_convection_zero_force():
    C = assemble_convection(SpaceGrid(0, 1, 4), _const(0.0), 0.3)
    assert not C.to_dense().any()


@pytest.mark.parametrize(
    "F",
    [lambda x, t: x, lambda x, t: 2.0 - 3.0 * x + 0.0 * t, lambda x, t: x + t],
)
def test_convection_matches_dense_quadrature_for_affine_force(F):
    g = SpaceGrid(0, 1, 4)
    C = assemble_convection(g, F, 0.7).to_dense()
    assert np.allclose(C, _dense_convection(g, F, 0.7), rtol=0, atol=1e-12)


def test_convection_trig_force_close_to_dense_quadrature():
    g = SpaceGrid(-5, 15, 40)
    F = lambda x, t: np.sin(x) + t  # noqa: E731
    C = assemble_convection(g, F, 0.2).to_dense()
    # two-point Gauss error per entry is O(h^5) relative to |F''''|
    assert np.allclose(C, _dense_convection(g, F, 0.2), atol=g.h**5)


@given(st.floats(-10, 10), st.integers(3, 50))
def test_convection_antisymmetric_for_constant_force(c, nx):
    C = assemble_convection(SpaceGrid(-1, 2, nx), _const(c), 0.0)
    S = C.to_dense() + C.to_dense().T
    assert np.allclose(S[1:-1, :], 0.0, atol=1e-13 * (1 + abs(c)))


@pytest.mark.parametrize(
    "F", [lambda x, t: np.sin(x) + t, lambda x, t: np.sin(t) + x, lambda x, t: np.exp(x)]
)
def test_convection_column_sums_vanish(F):
    g = SpaceGrid(-5, 15, 300)
    C = assemble_convection(g, F, 1.3)
    col = np.ones(g.size) @ C.to_dense()
    assert np.allclose(col, 0.0, atol=1e-12)


# load -----------------------------------------------------------------------


def test_load_zero():
    assert not assemble_load(SpaceGrid(0, 1, 4), _const(0.0), 0.0).any()


def test_load_constant():
    g = SpaceGrid(0, 1, 4)
    b = assemble_load(g, _const(1.0), 0.0)
    assert np.allclose(b[1:-1], g.h)
    assert np.allclose(b[[0, -1]], g.h / 2)


@pytest.mark.parametrize("f", [lambda x, t: x, lambda x, t: 3 - 2 * x + 0 * t])
def test_load_exact_for_linear_source(f):
    g = SpaceGrid(0, 1, 4)
    b = assemble_load(g, f, 0.0)
    assert np.allclose(b, assemble_mass(g).matvec(f(g.nodes, 0.0)), rtol=1e-14, atol=1e-15)


# Dirichlet ------------------------------------------------------------------


def test_dirichlet_on_identity():
    m = 6
    I = TriDiagMatrix(np.zeros(m - 1), np.ones(m), np.zeros(m - 1))
    A, b = apply_dirichlet(I, np.arange(1.0, m + 1))
    assert np.array_equal(A.to_dense(), np.eye(m))
    assert b[0] == 0 and b[-1] == 0
    assert np.array_equal(b[1:-1], np.arange(2.0, m))


@settings(deadline=None)
@given(st.integers(3, 60), st.integers(0, 2**32 - 1))
def test_dirichlet_solution_vanishes_on_boundary(m, seed):
    rng = np.random.default_rng(seed)
    A, b = apply_dirichlet(_random_tridiag(rng, m), rng.standard_normal(m))
    x = solve_tridiag(A, b)
    assert x[0] == 0.0 and x[-1] == 0.0


@given(st.integers(3, 40), st.integers(0, 2**32 - 1))
def test_dirichlet_keeps_symmetry(m, seed):
    rng = np.random.default_rng(seed)
    off = rng.standard_normal(m - 1)
    A, _ = apply_dirichlet(TriDiagMatrix(off, rng.standard_normal(m), off.copy()), np.zeros(m))
    D = A.to_dense()
    assert np.array_equal(D, D.T)


def test_dirichlet_does_not_mutate_input():
    A = assemble_stiffness(SpaceGrid(0, 1, 4))
    rhs = np.ones(5)
    before = A.to_dense().copy()
    apply_dirichlet(A, rhs)
    assert np.array_equal(A.to_dense(), before)
    assert np.array_equal(rhs, np.ones(5))


# Thomas solver --------------------------------------------------------------


def test_solve_identity():
    rhs = np.array([1.0, -2.0, 3.5, 0.0])
    I = TriDiagMatrix(np.zeros(3), np.ones(4), np.zeros(3))
    assert np.array_equal(solve_tridiag(I, rhs), rhs)


def test_solve_three_by_three():
    A = TriDiagMatrix([-1.0, -1.0], [2.0, 2.0, 2.0], [-1.0, -1.0])
    assert np.allclose(solve_tridiag(A, [1.0, 0.0, 1.0]), [1.0, 1.0, 1.0], rtol=1e-15)


@pytest.mark.parametrize("m", [2, 10, 1000, 4096])
def test_solve_random_dominant(m):
    rng = np.random.default_rng(m)
    A = _random_tridiag(rng, m)
    b = rng.standard_normal(m)
    x = solve_tridiag(A, b)
    assert np.max(np.abs(A @ x - b)) <= 1e-10 * np.max(np.abs(b))
    assert np.max(np.abs(A @ x - b)) <= 1e-10 * (A.norm_inf() * np.abs(x).max() + np.abs(b).max())


@settings(deadline=None)
@given(st.integers(2, 300), st.integers(0, 2**32 - 1))
def test_solve_residual_property(m, seed):
    rng = np.random.default_rng(seed)
    A = _random_tridiag(rng, m)
    b = rng.standard_normal(m)
    x = solve_tridiag(A, b)
    assert np.max(np.abs(A @ x - b)) <= 1e-10 * np.max(np.abs(b))


def test_solve_zero_pivot():
    A = TriDiagMatrix([1.0], [0.0, 1.0], [1.0])
    with pytest.raises(SingularSystemError):
        solve_tridiag(A, [1.0, 1.0])


def test_solve_singular_later_row():
    # second pivot: 1 - 1*1/1 = 0
    A = TriDiagMatrix([1.0, 0.0], [1.0, 1.0, 1.0], [1.0, 0.0])
    with pytest.raises(SingularSystemError, match="row 1"):
        solve_tridiag(A, [1.0, 1.0, 1.0])


def test_solve_near_zero_pivot_relative():
    A = TriDiagMatrix([0.0], [1e-20, 1.0], [0.0])
    with pytest.raises(SingularSystemError):
        solve_tridiag(A, [1.0, 1.0])


def test_solve_size_mismatch():
    with pytest.raises(ValueError):
        solve_tridiag(TriDiagMatrix([0.0], [1.0, 1.0], [0.0]), [1.0, 2.0, 3.0])
