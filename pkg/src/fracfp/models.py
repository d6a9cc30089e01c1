"""Problem definitions: forces, sources, initial data, model variants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .fem1d import assemble_mass
from .meshing import GradedTimeMesh, SpaceGrid


class ForceKind(enum.Enum):
    ZERO = "zero"
    SIN_T_PLUS_X = "sin_t_plus_x"
    SIN_X_PLUS_T = "sin_x_plus_t"
    AFFINE_IN_T = "affine_in_t"
    CUSTOM = "custom"


# basis for custom fields, keyed by the name used in config files
BASIS: dict[str, Callable] = {
    "1": lambda x, t: np.ones_like(x),
    "x": lambda x, t: x,
    "t": lambda x, t: np.full_like(x, t),
    "sin_x": lambda x, t: np.sin(x),
    "sin_t": lambda x, t: np.full_like(x, math.sin(t)),
    "cos_x": lambda x, t: np.cos(x),
    "cos_t": lambda x, t: np.full_like(x, math.cos(t)),
}

_BUILTIN_COEFFS = {
    ForceKind.ZERO: {},
    ForceKind.SIN_T_PLUS_X: {"sin_t": 1.0, "x": 1.0},
    ForceKind.SIN_X_PLUS_T: {"sin_x": 1.0, "t": 1.0},
}


@dataclass(frozen=True)
class ForceField:
    """Scalar field ``F(x, t)`` from a small closed family.

    Every kind reduces to a finite linear combination of :data:`BASIS`
    functions.  ``AFFINE_IN_T`` takes params ``a`` and ``b`` and means
    ``a + b t``.  ``CUSTOM`` takes basis names mapped to coefficients.
    The same type describes source terms.
    """

    kind: ForceKind
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        coeffs = self.coefficients  # validates
        for v in coeffs.values():
            if not math.isfinite(v):
                raise ValueError(f"non-finite coefficient in {self.kind.value} field")

    @property
    def coefficients(self) -> dict[str, float]:
        k, p = self.kind, self.params
        if k in _BUILTIN_COEFFS:
            if p:
                raise ValueError(f"field kind {k.value!r} takes no parameters")
            return dict(_BUILTIN_COEFFS[k])
        if k is ForceKind.AFFINE_IN_T:
            unknown = set(p) - {"a", "b"}
            if unknown:
                raise ValueError(f"affine_in_t takes params a, b; got {sorted(unknown)}")
            return {"1": float(p.get("a", 0.0)), "t": float(p.get("b", 0.0))}
        unknown = set(p) - set(BASIS)
        if unknown:
            raise ValueError(
                f"unknown basis functions {sorted(unknown)}; choose from {list(BASIS)}"
            )
        return {name: float(c) for name, c in p.items()}

    def __call__(self, x, t: float):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for name, c in self.coefficients.items():
            if c:
                out = out + c * BASIS[name](x, float(t))
        return out

    def bound(self, a: float, b: float, T: float, samples: int = 200) -> float:
        """Max of ``|F|`` on a ``samples x samples`` grid of ``[a,b] x [0,T]``."""
        xs = np.linspace(a, b, samples)
        return float(max(np.max(np.abs(self(xs, t))) for t in np.linspace(0.0, T, samples)))


def make_force(kind, params: Mapping[str, float] | None = None) -> ForceField:
    try:
        kind = ForceKind(kind) if not isinstance(kind, ForceKind) else kind
    except ValueError:
        raise ValueError(
            f"unknown force kind {kind!r}; choose from {[k.value for k in ForceKind]}"
        ) from None
    return ForceField(kind, params or {})


ZERO_FIELD = ForceField(ForceKind.ZERO)


class InitialKind(enum.Enum):
    GAUSSIAN = "gaussian"
    SINE_MODE = "sine_mode"
    NODAL = "nodal"


@dataclass(frozen=True)
class InitialDatum:
    """Initial density, resolved to nodal values on a grid by :meth:`resolve`.

    * ``GAUSSIAN``: params ``sigma`` (> 0), ``mu``.
    * ``SINE_MODE``: param ``wavenumber`` m; ``sin(m pi (x-a)/(b-a))``.
    * ``NODAL``: param ``values``, one per grid node.
    """

    kind: InitialKind
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        if self.kind is InitialKind.GAUSSIAN and not float(self.params.get("sigma", 0.0)) > 0:
            raise ValueError("gaussian initial datum needs sigma > 0")

    def resolve(self, grid: SpaceGrid) -> np.ndarray:
        x = grid.nodes
        if self.kind is InitialKind.GAUSSIAN:
            u = gaussian_initial(grid, float(self.params["sigma"]), float(self.params["mu"]))
        elif self.kind is InitialKind.SINE_MODE:
            m = int(self.params.get("wavenumber", 1))
            u = np.sin(m * math.pi * (x - grid.a) / (grid.b - grid.a))
        else:
            u = np.array(self.params["values"], dtype=float)
            if u.size != grid.size:
                raise ValueError(f"nodal initial datum has {u.size} values, grid has {grid.size}")
        u[0] = u[-1] = 0.0
        return u


def gaussian_initial(grid: SpaceGrid, sigma: float, mu: float) -> np.ndarray:
    """Nodal interpolant of the normal density, forced to zero at both ends."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = grid.nodes
    u = np.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    u[0] = u[-1] = 0.0
    return u


def discrete_mass(grid: SpaceGrid, field_values) -> float:
    """``1^T M psi``, the exact integral of the P1 interpolant."""
    v = np.asarray(field_values, dtype=float)
    if v.size != grid.size:
        raise ValueError(f"field has {v.size} values, grid has {grid.size}")
    return float(np.sum(assemble_mass(grid).matvec(v)))


class Variant(enum.Enum):
    RIEMANN_LIOUVILLE = "riemann_liouville"
    CAPUTO_LEFT = "caputo_left"


@dataclass(frozen=True)
class ProblemSpec:
    """Everything needed for one run.

    ``RIEMANN_LIOUVILLE`` is the Fokker-Planck model with the fractional
    derivative acting inside the flux; ``CAPUTO_LEFT`` puts a Caputo
    derivative on the time derivative and drops the correction series (only
    consistent for time-independent forces).  At alpha = 1 both are the
    classical equation.
    """

    alpha: float
    D: float
    grid: SpaceGrid
    tmesh: GradedTimeMesh
    force: ForceField = ZERO_FIELD
    initial: InitialDatum = field(
        default_factory=lambda: InitialDatum(InitialKind.GAUSSIAN, {"sigma": 0.1, "mu": 2.0})
    )
    source: ForceField = ZERO_FIELD
    variant: Variant = Variant.RIEMANN_LIOUVILLE

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0,1], got {self.alpha}")
        if not self.D > 0:
            raise ValueError(f"diffusion coefficient must be positive, got {self.D}")
        object.__setattr__(self, "variant", Variant(self.variant))

    def initial_field(self) -> np.ndarray:
        return self.initial.resolve(self.grid)
