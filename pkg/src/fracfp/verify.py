"""Reference solutions and study drivers.

The backward-Euler oracle here deliberately shares no time-stepping code with
:mod:`fracfp.stepper`: it assembles with the same finite element routines but
builds sparse matrices and solves with SciPy.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fem1d import (
    TriDiagMatrix,
    assemble_convection,
    assemble_load,
    assemble_mass,
    assemble_stiffness,
)
from .fracops import mittag_leffler
from .meshing import GradedTimeMesh, SpaceGrid
from .models import ProblemSpec, Variant
from .stepper import History, RunReport, diagnostics, run


def subdiffusion_reference(alpha: float, wavenumber: int, t: float, x):
    """Exact solution ``E_alpha(-(m pi)^2 t^alpha) sin(m pi x)`` on (0, 1)."""
    m = int(wavenumber)
    if m < 1:
        raise ValueError(f"wavenumber must be a positive integer, got {wavenumber}")
    lam = (m * math.pi) ** 2
    amp = mittag_leffler(alpha, -lam * t**alpha) if t > 0 else 1.0
    return amp * np.sin(m * math.pi * np.asarray(x, dtype=float))


def _sparse(A: TriDiagMatrix) -> sp.csr_matrix:
    return sp.diags([A.sub, A.diag, A.sup], [-1, 0, 1], format="csr")


def backward_euler_oracle(spec: ProblemSpec) -> RunReport:
    """Classical implicit Euler for the alpha = 1 equation.

    Solves ``M (psi_n - psi_{n-1}) / dt_n + (D K - C(t_n)) psi_n = b_f(t_n)``
    with Dirichlet nodes eliminated (interior unknowns only).
    """
    if spec.alpha != 1.0:
        raise ValueError("the backward-Euler oracle only covers alpha = 1")
    grid, mesh = spec.grid, spec.tmesh
    inner = slice(1, grid.size - 1)
    M = _sparse(assemble_mass(grid))[inner, inner]
    K = _sparse(assemble_stiffness(grid))[inner, inner]

    start = time.perf_counter()
    psi0 = spec.initial_field()
    history = History(psi0, mesh.N)
    records = []
    current = psi0[inner].copy()
    for n in range(1, mesh.N + 1):
        tn, dt = float(mesh.nodes[n]), float(mesh.nodes[n] - mesh.nodes[n - 1])
        C = _sparse(assemble_convection(grid, spec.force, tn))[inner, inner]
        system = (M / dt + spec.D * K - C).tocsc()
        rhs = M @ current / dt + assemble_load(grid, spec.source, tn)[inner]
        current = spla.spsolve(system, rhs)
        full = np.zeros(grid.size)
        full[inner] = current
        history.append(full)
        records.append(diagnostics(spec, n, full))
    return RunReport(records, history, time.perf_counter() - start, spec)


def m_norm(grid: SpaceGrid, v) -> float:
    """Discrete L2 norm ``sqrt(v^T M v)`` of a nodal vector."""
    v = np.asarray(v, dtype=float)
    return float(np.sqrt(max(v @ assemble_mass(grid).matvec(v), 0.0)))


@dataclass
class ErrorRow:
    resolution: int
    error: float
    order: float | None = None


@dataclass
class ErrorTable:
    rows: list[ErrorRow]

    @classmethod
    def from_errors(cls, resolutions: Sequence[int], errors: Sequence[float]) -> ErrorTable:
        rows = []
        for i, (r, e) in enumerate(zip(resolutions, errors)):
            order = None
            if i > 0 and e > 0 and errors[i - 1] > 0:
                order = math.log2(errors[i - 1] / e)
            rows.append(ErrorRow(int(r), float(e), order))
        return cls(rows)

    @property
    def errors(self) -> list[float]:
        return [r.error for r in self.rows]

    @property
    def orders(self) -> list[float]:
        return [r.order for r in self.rows if r.order is not None]


def _with_resolution(spec: ProblemSpec, refine: str, level: int) -> ProblemSpec:
    if refine == "time":
        mesh = spec.tmesh
        return replace(spec, tmesh=GradedTimeMesh(level, mesh.gamma, mesh.T))
    if refine == "space":
        g = spec.grid
        return replace(spec, grid=SpaceGrid(g.a, g.b, level))
    raise ValueError(f"refine must be 'time' or 'space', got {refine!r}")


def convergence_study(
    spec: ProblemSpec,
    levels: Sequence[int],
    refine: str = "time",
    reference: Callable[[float, np.ndarray], np.ndarray] | None = None,
    solver: Callable[[ProblemSpec], RunReport] = run,
) -> ErrorTable:
    """Error of ``solver`` over a sequence of resolutions.

    ``levels`` are step counts N (``refine="time"``) or cell counts nx
    (``refine="space"``).  The error of one run is the maximum over time
    nodes of the M-weighted L2 error.  With ``reference(t, x)`` given it is
    compared against that; otherwise each level is compared against a run
    at four times its resolution, sampled on the coarse nodes (graded meshes
    with N and 4N nodes nest exactly, and so do uniform grids).
    """
    errors = []
    for level in levels:
        coarse = _with_resolution(spec, refine, level)
        rep = solver(coarse)
        U = rep.levels
        t, x = coarse.tmesh.nodes, coarse.grid.nodes
        if reference is not None:
            ref = np.array([reference(float(tn), x) for tn in t])
        else:
            fine_rep = solver(_with_resolution(spec, refine, 4 * level))
            ref = fine_rep.levels[::4] if refine == "time" else fine_rep.levels[:, ::4]
        errors.append(max(m_norm(coarse.grid, U[n] - ref[n]) for n in range(t.size)))
    return ErrorTable.from_errors(levels, errors)


@dataclass
class GapRecord:
    alpha: float
    t: float
    gap: float


def model_gap_study(
    alphas: Sequence[float], spec: ProblemSpec, sample_times: Sequence[float]
) -> list[GapRecord]:
    """Max-norm distance between the two model variants at the nodes nearest
    ``sample_times``, for each alpha.  Runs stop at the last needed node."""
    mesh = spec.tmesh
    idx = [mesh.nearest_index(t) for t in sample_times]
    last = max(idx)
    out = []
    for a in alphas:
        rl = run(replace(spec, alpha=a, variant=Variant.RIEMANN_LIOUVILLE), steps=last)
        cl = run(replace(spec, alpha=a, variant=Variant.CAPUTO_LEFT), steps=last)
        for n in idx:
            gap = float(np.max(np.abs(rl.levels[n] - cl.levels[n])))
            out.append(GapRecord(float(a), float(mesh.nodes[n]), gap))
    return out
