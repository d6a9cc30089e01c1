import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracfp.meshing import GradedTimeMesh, SpaceGrid
from fracfp.models import (
    ZERO_FIELD,
    ForceKind,
    InitialDatum,
    InitialKind,
    ProblemSpec,
    Variant,
    discrete_mass,
    gaussian_initial,
    make_force,
)

finite = st.floats(-50, 50)


# forces ---------------------------------------------------------------------


def test_force_examples():
    assert make_force("sin_t_plus_x")(2.0, 0.0) == 2.0
    assert make_force(ForceKind.SIN_X_PLUS_T)(0.0, 1.5) == 1.5
    assert make_force("zero")(np.linspace(-5, 15, 7), 3.0).tolist() == [0.0] * 7


@given(finite, finite)
def test_builtin_forces_match_formulas(x, t):
    assert make_force("sin_t_plus_x")(x, t) == pytest.approx(math.sin(t) + x, abs=1e-12)
    assert make_force("sin_x_plus_t")(x, t) == pytest.approx(math.sin(x) + t, abs=1e-12)
    assert make_force("affine_in_t", {"a": 1.5, "b": -2})(x, t) == pytest.approx(1.5 - 2 * t)
    assert ZERO_FIELD(x, t) == 0.0


@given(finite, finite, st.lists(st.floats(-10, 10), min_size=7, max_size=7))
def test_custom_force_is_basis_combination(x, t, c):
    names = ["1", "x", "t", "sin_x", "sin_t", "cos_x", "cos_t"]
    F = make_force("custom", dict(zip(names, c)))
    vals = [1.0, x, t, math.sin(x), math.sin(t), math.cos(x), math.cos(t)]
    expected = sum(ci * vi for ci, vi in zip(c, vals))
    assert F(x, t) == pytest.approx(expected, abs=1e-9)


def test_force_evaluation_is_vectorised_and_deterministic():
    F = make_force("sin_x_plus_t")
    x = np.linspace(-5, 15, 101)
    a, b = F(x, 0.3), F(x, 0.3)
    assert a.shape == x.shape
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize(
    "kind, params",
    [
        ("nonsense", {}),
        ("custom", {"exp_x": 1.0}),
        ("affine_in_t", {"c": 1.0}),
        ("zero", {"a": 1.0}),
        ("custom", {"x": float("nan")}),
    ],
)
def test_force_rejects_bad_input(kind, params):
    with pytest.raises(ValueError):
        make_force(kind, params)


def test_force_params_are_frozen():
    F = make_force("affine_in_t", {"a": 1.0, "b": 2.0})
    with pytest.raises(TypeError):
        F.params["a"] = 5.0


@pytest.mark.parametrize("kind", ["zero", "sin_t_plus_x", "sin_x_plus_t"])
def test_force_bounds_finite(kind):
    bound = make_force(kind).bound(-5.0, 15.0, 5.0)
    assert math.isfinite(bound)
    if kind == "sin_t_plus_x":
        # |sin t + x| <= 1 + 15, and x = 15 with t near pi/2 lies on the sample grid
        assert 15.9 < bound <= 16.0
    if kind == "sin_x_plus_t":
        assert 5.9 < bound <= 6.0


def test_affine_bound():
    assert make_force("affine_in_t", {"a": 1.0, "b": -1.0}).bound(0, 1, 5.0) == pytest.approx(4.0)


# initial data ---------------------------------------------------------------


def test_gaussian_peak_and_one_sigma_values():
    g = SpaceGrid(-5, 15, 20480)
    u = gaussian_initial(g, 0.1, 2.0)
    i = int(round((2.0 - g.a) / g.h))
    assert u[i] == pytest.approx(3.9894228040, abs=1e-10)
    # 0.1 is not a multiple of 1/1024, so check the formula directly there
    x = np.array([1.9, 2.1])
    vals = np.exp(-0.5 * ((x - 2.0) / 0.1) ** 2) / (0.1 * math.sqrt(2 * math.pi))
    assert vals == pytest.approx([2.4197072452] * 2, abs=1e-10)
    g_coarse = SpaceGrid(1.0, 3.0, 20)  # h = 0.1, so 1.9 and 2.1 are nodes
    u2 = gaussian_initial(g_coarse, 0.1, 2.0)
    assert u2[[9, 11]] == pytest.approx([2.4197072452] * 2, abs=1e-10)


def test_gaussian_unit_mass_on_full_grid():
    g = SpaceGrid(-5, 15, 20480)
    assert discrete_mass(g, gaussian_initial(g, 0.1, 2.0)) == pytest.approx(1.0, abs=1e-6)


def test_gaussian_boundary_zero():
    g = SpaceGrid(-1, 1, 10)
    u = gaussian_initial(g, 5.0, 0.0)
    assert u[0] == 0.0 and u[-1] == 0.0


@given(st.integers(5, 200), st.floats(0.05, 3.0))
def test_gaussian_symmetric_about_node(k, sigma):
    g = SpaceGrid(-1.0, 1.0, 2 * k)  # mu = 0 is node k
    u = gaussian_initial(g, sigma, 0.0)
    # node positions carry 1e-16 rounding, amplified by |x|/sigma**2 in the tails
    assert np.allclose(u, u[::-1], rtol=1e-12, atol=0)


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_gaussian_rejects_bad_sigma(sigma):
    with pytest.raises(ValueError):
        gaussian_initial(SpaceGrid(0, 1, 4), sigma, 0.5)
    with pytest.raises(ValueError):
        InitialDatum(InitialKind.GAUSSIAN, {"sigma": sigma, "mu": 0.5})


def test_initial_datum_kinds():
    g = SpaceGrid(0, 1, 8)
    sine = InitialDatum(InitialKind.SINE_MODE, {"wavenumber": 2}).resolve(g)
    assert np.allclose(sine, np.where(np.isin(np.arange(9), [0, 8]), 0, np.sin(2 * np.pi * g.nodes)))
    vals = np.arange(9.0)
    nodal = InitialDatum(InitialKind.NODAL, {"values": vals}).resolve(g)
    assert nodal[0] == 0.0 and nodal[-1] == 0.0
    assert np.array_equal(nodal[1:-1], vals[1:-1])
    assert vals[0] == 0.0 and vals[-1] == 8.0  # caller's array untouched
    with pytest.raises(ValueError):
        InitialDatum(InitialKind.NODAL, {"values": [1.0, 2.0]}).resolve(g)


# discrete mass --------------------------------------------------------------


def test_discrete_mass_examples():
    g = SpaceGrid(-5, 15, 200)
    assert discrete_mass(g, np.zeros(g.size)) == 0.0
    assert discrete_mass(g, np.ones(g.size)) == pytest.approx(20.0, rel=1e-13)
    hat = np.zeros(g.size)
    hat[57] = 1.0
    assert discrete_mass(g, hat) == pytest.approx(g.h, rel=1e-13)


def test_discrete_mass_size_mismatch():
    with pytest.raises(ValueError):
        discrete_mass(SpaceGrid(0, 1, 4), np.ones(4))


@given(st.integers(0, 2**32 - 1), st.floats(-10, 10), st.floats(-10, 10))
def test_discrete_mass_linear(seed, a, b):
    g = SpaceGrid(0, 3, 30)
    rng = np.random.default_rng(seed)
    u, v = rng.standard_normal((2, g.size))
    lhs = discrete_mass(g, a * u + b * v)
    rhs = a * discrete_mass(g, u) + b * discrete_mass(g, v)
    assert lhs == pytest.approx(rhs, abs=1e-11)


# problem spec ---------------------------------------------------------------


def _spec(**kw):
    base = dict(alpha=0.5, D=1.0, grid=SpaceGrid(-5, 15, 64), tmesh=GradedTimeMesh(10, 2, 5))
    base.update(kw)
    return ProblemSpec(**base)


def test_problem_spec_defaults():
    s = _spec()
    assert s.variant is Variant.RIEMANN_LIOUVILLE
    assert s.force.kind is ForceKind.ZERO
    assert s.initial.kind is InitialKind.GAUSSIAN
    assert s.initial_field().shape == (65,)


def test_problem_spec_variant_from_string():
    assert _spec(variant="caputo_left").variant is Variant.CAPUTO_LEFT


@pytest.mark.parametrize("kw", [{"alpha": 0.0}, {"alpha": 1.2}, {"D": 0.0}, {"variant": "other"}])
def test_problem_spec_rejects(kw):
    with pytest.raises(ValueError):
        _spec(**kw)
