r"""Time marching for both model variants.

The memory term couples every step to the whole history, so a run keeps all
levels in one preallocated array.  Per step the work is O(n * nx) vector
operations plus a fixed number of tridiagonal products and one tridiagonal
solve, i.e. O(N^2 nx) for a run.  No fast-convolution shortcut is used.

Writing ``A(t) = D K - C(t)`` for the spatial operator, the
Riemann-Liouville step solves

.. math::

    \Big[\frac{M}{\Delta t_n} + c_0 A(t_n)\Big]\psi_n
    = \frac{M\psi_{n-1}}{\Delta t_n}
      - A(t_n)\Big[\sum_{j\ge 1} c_j(\psi_{n-j}-\psi_{n-j-1})
                   - c_0\psi_{n-1} + g_\alpha(t_n)\psi_0\Big] + b_f(t_n),

with ``c_j = w_{n-j-1,n} / Gamma(1+alpha)`` built from the L1 weights of
order alpha.  ``A`` is frozen at ``t_n`` for every history term.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import StepError
from .fem1d import (
    TriDiagMatrix,
    apply_dirichlet,
    assemble_convection,
    assemble_load,
    assemble_mass,
    assemble_stiffness,
    solve_tridiag,
)
from .fracops import g_kernel, gamma_fn
from .meshing import _weight_row
from .models import ProblemSpec, Variant


class History:
    """All computed time levels ``psi_0 .. psi_n``, stored row-wise."""

    def __init__(self, initial, capacity: int):
        initial = np.asarray(initial, dtype=float)
        self._data = np.empty((capacity + 1, initial.size))
        self._data[0] = initial
        self._len = 1

    def append(self, level) -> None:
        if self._len >= self._data.shape[0]:
            raise IndexError("history is full")
        self._data[self._len] = level
        self._len += 1

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, idx):
        return self.levels[idx]

    @property
    def levels(self) -> np.ndarray:
        """Read-only view of the completed levels, shape (n+1, nx+1)."""
        view = self._data[: self._len]
        view.flags.writeable = False
        return view


@dataclass
class StepRecord:
    n: int
    t: float
    mass: float
    l2_norm: float
    max_value: float
    min_value: float


@dataclass
class RunReport:
    records: list[StepRecord]
    history: History
    wall_time: float = 0.0
    spec: ProblemSpec | None = field(default=None, repr=False)

    @property
    def levels(self) -> np.ndarray:
        return self.history.levels


def _spatial_operator(spec: ProblemSpec, K: TriDiagMatrix, t: float) -> TriDiagMatrix:
    C = assemble_convection(spec.grid, spec.force, t)
    return K.scaled(spec.D) - C


def _check_history(history: History, n: int) -> None:
    if n < 1:
        raise IndexError(f"step index must be >= 1, got {n}")
    if len(history) != n:
        raise ValueError(f"history holds {len(history)} levels, step {n} needs exactly {n}")


def step_riemann_liouville(spec: ProblemSpec, history: History, n: int) -> np.ndarray:
    """Advance the Fokker-Planck model (fractional derivative in the flux) to ``t_n``."""
    _check_history(history, n)
    grid, mesh, alpha = spec.grid, spec.tmesh, spec.alpha
    tn, dt = float(mesh.nodes[n]), mesh.dt(n)
    psi = history.levels

    M = assemble_mass(grid)
    A = _spatial_operator(spec, assemble_stiffness(grid), tn)

    if alpha == 1.0:
        w = np.ones(n)
    else:
        w = _weight_row(mesh.nodes, alpha, n)
    # c[j] multiplies psi_{n-j} - psi_{n-j-1}; w is indexed by k = n-j-1
    c = w[::-1] / gamma_fn(1.0 + alpha)
    incr = np.diff(psi, axis=0)[::-1]          # incr[j-1] = psi_{n-j} - psi_{n-j-1}
    memory = c[1:] @ incr if n > 1 else np.zeros(grid.size)
    combo = memory - c[0] * psi[n - 1] + g_kernel(alpha, tn) * psi[0]

    rhs = M.matvec(psi[n - 1]) / dt - A.matvec(combo) + assemble_load(grid, spec.source, tn)
    lhs = M.scaled(1.0 / dt) + A.scaled(c[0])
    lhs, rhs = apply_dirichlet(lhs, rhs)
    return solve_tridiag(lhs, rhs)


def step_caputo_left(spec: ProblemSpec, history: History, n: int) -> np.ndarray:
    """Advance ``d^alpha psi - D psi'' + (F psi)' = f`` (Caputo, no correction) to ``t_n``."""
    _check_history(history, n)
    grid, mesh, alpha = spec.grid, spec.tmesh, spec.alpha
    tn = float(mesh.nodes[n])
    psi = history.levels

    M = assemble_mass(grid)
    A = _spatial_operator(spec, assemble_stiffness(grid), tn)

    # L1 weights for a Caputo derivative of order alpha use the exponent 1 - alpha;
    # at alpha = 1 this degenerates to the backward difference
    d = _weight_row(mesh.nodes, 1.0 - alpha, n)[::-1] / gamma_fn(2.0 - alpha)
    incr = np.diff(psi, axis=0)[::-1]
    memory = d[1:] @ incr if n > 1 else np.zeros(grid.size)

    rhs = M.matvec(d[0] * psi[n - 1] - memory) + assemble_load(grid, spec.source, tn)
    lhs = M.scaled(d[0]) + A
    lhs, rhs = apply_dirichlet(lhs, rhs)
    return solve_tridiag(lhs, rhs)


_STEPPERS = {
    Variant.RIEMANN_LIOUVILLE: step_riemann_liouville,
    Variant.CAPUTO_LEFT: step_caputo_left,
}


def diagnostics(spec: ProblemSpec, n: int, level: np.ndarray) -> StepRecord:
    M = assemble_mass(spec.grid)
    Mv = M.matvec(level)
    return StepRecord(
        n=n,
        t=float(spec.tmesh.nodes[n]),
        mass=float(Mv.sum()),
        l2_norm=float(np.sqrt(max(level @ Mv, 0.0))),
        max_value=float(level.max()),
        min_value=float(level.min()),
    )


def run(spec: ProblemSpec, steps: int | None = None) -> RunReport:
    """March ``n = 1..N`` (or ``1..steps``) and record diagnostics per step.

    Step failures are re-raised as :class:`StepError` carrying the index.
    """
    N = spec.tmesh.N if steps is None else min(int(steps), spec.tmesh.N)
    step = _STEPPERS[spec.variant]
    start = time.perf_counter()
    history = History(spec.initial_field(), N)
    records = []
    for n in range(1, N + 1):
        try:
            level = step(spec, history, n)
        except (ArithmeticError, ValueError, FloatingPointError) as exc:
            raise StepError(n, exc) from exc
        history.append(level)
        records.append(diagnostics(spec, n, level))
    return RunReport(records, history, time.perf_counter() - start, spec)
