"""P1 finite elements on a uniform 1D grid.

All operators are tridiagonal.  Convection and load integrals use two-point
Gauss quadrature per cell, which is exact for integrands up to cubic degree
(so for affine forces and affine sources).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystemError
from .meshing import SpaceGrid

_GAUSS_X = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])
_GAUSS_W = np.array([0.5, 0.5])


@dataclass(frozen=True)
class TriDiagMatrix:
    """Square tridiagonal matrix stored by bands.

    ``sub[i]`` is entry (i+1, i) and ``sup[i]`` is entry (i, i+1).
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        sub, diag, sup = (np.asarray(v, dtype=float) for v in (self.sub, self.diag, self.sup))
        m = diag.size
        if sub.size != m - 1 or sup.size != m - 1:
            raise ValueError(
                f"band lengths {sub.size}, {m}, {sup.size} do not form a tridiagonal matrix"
            )
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "sup", sup)

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.sup * x[1:]
        y[1:] += self.sub * x[:-1]
        return y

    __matmul__ = matvec

    def transpose(self) -> TriDiagMatrix:
        return TriDiagMatrix(self.sup.copy(), self.diag.copy(), self.sub.copy())

    @property
    def T(self) -> TriDiagMatrix:
        return self.transpose()

    def scaled(self, c: float) -> TriDiagMatrix:
        return TriDiagMatrix(c * self.sub, c * self.diag, c * self.sup)

    def __add__(self, other: TriDiagMatrix) -> TriDiagMatrix:
        return TriDiagMatrix(self.sub + other.sub, self.diag + other.diag, self.sup + other.sup)

    def __sub__(self, other: TriDiagMatrix) -> TriDiagMatrix:
        return TriDiagMatrix(self.sub - other.sub, self.diag - other.diag, self.sup - other.sup)

    def __rmul__(self, c: float) -> TriDiagMatrix:
        return self.scaled(float(c))

    def norm_inf(self) -> float:
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.sup)
        rows[1:] += np.abs(self.sub)
        return float(rows.max())

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sup, 1) + np.diag(self.sub, -1)


def _cell_quadrature(grid: SpaceGrid, fn, t: float):
    """Values of ``fn`` at the two Gauss points of every cell, shape (nx, 2)."""
    x0 = grid.nodes[:-1, None]
    xq = x0 + grid.h * _GAUSS_X[None, :]
    vals = np.broadcast_to(np.asarray(fn(xq, t), dtype=float), xq.shape)
    return vals


def assemble_mass(grid: SpaceGrid) -> TriDiagMatrix:
    h, m = grid.h, grid.size
    diag = np.full(m, 2.0 * h / 3.0)
    diag[0] = diag[-1] = h / 3.0
    off = np.full(m - 1, h / 6.0)
    return TriDiagMatrix(off, diag, off.copy())


def assemble_stiffness(grid: SpaceGrid) -> TriDiagMatrix:
    h, m = grid.h, grid.size
    diag = np.full(m, 2.0 / h)
    diag[0] = diag[-1] = 1.0 / h
    off = np.full(m - 1, -1.0 / h)
    return TriDiagMatrix(off, diag, off.copy())


def assemble_convection(grid: SpaceGrid, F, t: float) -> TriDiagMatrix:
    """``C[i, j] = integral of F(x, t) * phi_j(x) * phi_i'(x) dx``.

    This is the matrix of the form ``(psi, F dzeta/dx)`` with ``psi = phi_j``
    and test function ``zeta = phi_i``.  Its column sums vanish, which is
    what makes the scheme conservative.
    """
    h = grid.h
    fq = _cell_quadrature(grid, F, t)
    # on a cell: phi_L = 1 - s, phi_R = s, phi_L' = -1/h, phi_R' = 1/h
    int_fl = h * (fq * _GAUSS_W * (1.0 - _GAUSS_X)).sum(axis=1)
    int_fr = h * (fq * _GAUSS_W * _GAUSS_X).sum(axis=1)
    m = grid.size
    diag = np.zeros(m)
    diag[:-1] += -int_fl / h   # (L, L)
    diag[1:] += int_fr / h     # (R, R)
    sup = -int_fr / h          # (L, R): phi_R against phi_L'
    sub = int_fl / h           # (R, L): phi_L against phi_R'
    return TriDiagMatrix(sub, diag, sup)


def assemble_load(grid: SpaceGrid, f, t: float) -> np.ndarray:
    """Load vector ``b_i = integral of f(x, t) * phi_i(x) dx``."""
    h = grid.h
    fq = _cell_quadrature(grid, f, t)
    int_fl = h * (fq * _GAUSS_W * (1.0 - _GAUSS_X)).sum(axis=1)
    int_fr = h * (fq * _GAUSS_W * _GAUSS_X).sum(axis=1)
    b = np.zeros(grid.size)
    b[:-1] += int_fl
    b[1:] += int_fr
    return b


def apply_dirichlet(A: TriDiagMatrix, rhs) -> tuple[TriDiagMatrix, np.ndarray]:
    """Homogeneous Dirichlet conditions at both ends by row replacement.

    Boundary rows become identity rows with zero right-hand side, and the
    couplings of the neighbouring interior rows into the boundary nodes are
    dropped (they multiply a known zero), so a symmetric interior block stays
    symmetric.
    """
    sub, diag, sup = A.sub.copy(), A.diag.copy(), A.sup.copy()
    b = np.array(rhs, dtype=float, copy=True)
    diag[0] = diag[-1] = 1.0
    sup[0] = 0.0
    sub[-1] = 0.0
    if diag.size > 2:
        sub[0] = 0.0    # row 1 -> node 0
        sup[-1] = 0.0   # row m-2 -> node m-1
    b[0] = b[-1] = 0.0
    return TriDiagMatrix(sub, diag, sup), b


def solve_tridiag(A: TriDiagMatrix, rhs, pivot_tol: float = 1e-14) -> np.ndarray:
    """Thomas algorithm, no pivoting.

    Raises :class:`SingularSystemError` when a pivot falls below
    ``pivot_tol`` relative to the matrix inf-norm.
    """
    m = A.size
    d = np.asarray(rhs, dtype=float)
    if d.size != m:
        raise ValueError(f"rhs has length {d.size}, matrix is {m}x{m}")
    scale = A.norm_inf() or 1.0
    tol = pivot_tol * scale
    a = A.sub.tolist()
    b = A.diag.tolist()
    c = A.sup.tolist()
    rhs_l = d.tolist()
    cp = [0.0] * m
    dp = [0.0] * m

    piv = b[0]
    if abs(piv) < tol:
        raise SingularSystemError("zero pivot in row 0")
    cp[0] = c[0] / piv if m > 1 else 0.0
    dp[0] = rhs_l[0] / piv
    for i in range(1, m):
        piv = b[i] - a[i - 1] * cp[i - 1]
        if abs(piv) < tol:
            raise SingularSystemError(f"zero pivot in row {i}")
        if i < m - 1:
            cp[i] = c[i] / piv
        dp[i] = (rhs_l[i] - a[i - 1] * dp[i - 1]) / piv

    x = [0.0] * m
    x[-1] = dp[-1]
    for i in range(m - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.array(x)
