"""Graded time meshes, L1 weight rows and the uniform space grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .fracops import _power_diff


@dataclass(frozen=True)
class GradedTimeMesh:
    """Time nodes ``t_n = (n/N)**gamma * T``, n = 0..N."""

    N: int
    gamma: float
    T: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if not self.gamma >= 1:
            raise ValueError(f"grading exponent must be >= 1, got {self.gamma}")
        if not self.T > 0:
            raise ValueError(f"final time must be positive, got {self.T}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "T", float(self.T))

    @cached_property
    def nodes(self) -> np.ndarray:
        # closed form per node, never accumulated
        n = np.arange(self.N + 1, dtype=float)
        t = (n / self.N) ** self.gamma * self.T
        t[-1] = self.T
        t.setflags(write=False)
        return t

    @cached_property
    def increments(self) -> np.ndarray:
        """``increments[n-1] = t_n - t_{n-1}``."""
        d = np.diff(self.nodes)
        d.setflags(write=False)
        return d

    def dt(self, n: int) -> float:
        """Step size ``t_n - t_{n-1}`` for 1 <= n <= N."""
        if not 1 <= n <= self.N:
            raise IndexError(f"step index {n} outside 1..{self.N}")
        return float(self.increments[n - 1])

    def nearest_index(self, t: float) -> int:
        """Index of the node closest to ``t`` (ties go to the earlier node)."""
        return int(np.argmin(np.abs(self.nodes - t)))


def graded_time_mesh(N: int, gamma: float, T: float) -> GradedTimeMesh:
    return GradedTimeMesh(N, gamma, T)


@dataclass(frozen=True)
class L1WeightRow:
    n: int
    weights: np.ndarray = field(repr=False)


def _weight_row(nodes, order: float, n: int, denominator: str = "standard") -> np.ndarray:
    """Raw L1 weights for ``order`` in [0, 1].

    ``order == 0`` is the degenerate backward-difference limit (only the last
    weight survives), used by the Caputo-left stepper at alpha = 1.

    ``denominator="reversed"`` divides panel k by ``t_{n-k} - t_{n-k-1}``
    instead of ``t_{k+1} - t_k``; the two agree on uniform meshes.  Kept only
    so tests can show the difference.
    """
    t = np.asarray(nodes, dtype=float)
    b = t[n] - t[1 : n + 1]
    b[-1] = 0.0
    dt = np.diff(t[: n + 1])
    if order == 0.0:
        num = np.zeros(n)
        num[-1] = 1.0
    else:
        num = _power_diff(b, dt, order)
    if denominator == "standard":
        return num / dt
    if denominator == "reversed":
        k = np.arange(n)
        return num / (t[n - k] - t[n - k - 1])
    raise ValueError(f"unknown denominator convention {denominator!r}")


def l1_weights(mesh: GradedTimeMesh, order: float, n: int) -> L1WeightRow:
    """Weights ``w_{k,n} = ((t_n-t_k)**a - (t_n-t_{k+1})**a) / (t_{k+1}-t_k)``.

    Returned for k = 0..n-1 with ``a = order``.  With order 1 every weight
    is exactly one.
    """
    if not 0.0 < order <= 1.0:
        raise ValueError(f"order must lie in (0, 1], got {order}")
    if not 1 <= n <= mesh.N:
        raise IndexError(f"step index {n} outside 1..{mesh.N}")
    if order == 1.0:
        return L1WeightRow(n, np.ones(n))
    return L1WeightRow(n, _weight_row(mesh.nodes, order, n))


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform partition of ``[a, b]`` into ``nx`` cells.

    Both end nodes carry homogeneous Dirichlet constraints.
    """

    a: float
    b: float
    nx: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        if int(self.nx) != self.nx or self.nx < 2:
            raise ValueError(f"nx must be an integer >= 2, got {self.nx}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "nx", int(self.nx))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.nx

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.a + self.h * np.arange(self.nx + 1)
        x[-1] = self.b
        x.setflags(write=False)
        return x

    @property
    def size(self) -> int:
        return self.nx + 1


def uniform_space_grid(a: float, b: float, nx: int) -> SpaceGrid:
    return SpaceGrid(a, b, nx)
