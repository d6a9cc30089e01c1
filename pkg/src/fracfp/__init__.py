"""Time-fractional Fokker-Planck solver: nonuniform L1 in time, P1 elements in space."""

from .fracops import (
    SampledFunction,
    conv_quadrature,
    g_kernel,
    gamma_fn,
    l1_frac_derivative,
    lp_alpha_seminorm,
    mittag_leffler,
    sample_kernel,
)
from .meshing import GradedTimeMesh, SpaceGrid, graded_time_mesh, l1_weights, uniform_space_grid
from .models import (
    ForceField,
    ForceKind,
    InitialDatum,
    InitialKind,
    ProblemSpec,
    Variant,
    discrete_mass,
    gaussian_initial,
    make_force,
)
from .stepper import History, RunReport, run, step_caputo_left, step_riemann_liouville

__version__ = "0.1.0"

__all__ = [
    "ForceField",
    "ForceKind",
    "GradedTimeMesh",
    "History",
    "InitialDatum",
    "InitialKind",
    "ProblemSpec",
    "RunReport",
    "SampledFunction",
    "SpaceGrid",
    "Variant",
    "conv_quadrature",
    "discrete_mass",
    "g_kernel",
    "gamma_fn",
    "gaussian_initial",
    "graded_time_mesh",
    "l1_frac_derivative",
    "l1_weights",
    "lp_alpha_seminorm",
    "make_force",
    "mittag_leffler",
    "run",
    "sample_kernel",
    "step_caputo_left",
    "step_riemann_liouville",
    "uniform_space_grid",
]
