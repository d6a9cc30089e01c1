r"""Fractional-calculus primitives.

Everything here is a pure function of its arguments.  The central objects are
the Riemann-Liouville kernel

.. math::

    g_\beta(t) = \frac{t^{\beta - 1}}{\Gamma(\beta)},

its convolution with sampled data (product integration against the piecewise
linear interpolant), the L1 approximation of the Caputo derivative on an
arbitrary increasing mesh, and the one-parameter Mittag-Leffler function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Euler's Gamma function for real ``x > 0``.

    Lanczos approximation, with the reflection formula below 1/2.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    if x.is_integer() and x <= 171:
        return float(math.factorial(int(x) - 1))
    return _gamma(x)


def _gamma(x: float) -> float:
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    # t**(x+0.5) overflows long before Gamma does
    return math.sqrt(2.0 * math.pi) * math.exp((x + 0.5) * math.log(t) - t) * acc


def g_kernel(order: float, t):
    """Singular kernel ``t**(order-1) / Gamma(order)``.

    Accepts scalars or arrays.  For ``order < 1`` the kernel blows up at the
    origin, so any ``t <= 0`` is rejected instead of returning ``inf``.
    """
    if not order > 0:
        raise ValueError(f"kernel order must be positive, got {order}")
    t_arr = np.asarray(t, dtype=float)
    if order < 1 and np.any(t_arr <= 0):
        raise ValueError(f"g_{order} is singular at t = 0; need t > 0")
    if np.any(t_arr < 0):
        raise ValueError("kernel argument must be nonnegative")
    out = np.power(t_arr, order - 1.0) / gamma_fn(order)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SampledFunction:
    """Samples of a function on ``0 = s_0 < s_1 < ... < s_M``."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("SampledFunction needs a nonempty 1D node array")
        if values.shape != nodes.shape:
            raise ValueError(
                f"nodes and values differ in length ({nodes.size} vs {values.size})"
            )
        if nodes[0] != 0.0:
            raise ValueError("sample nodes must start at 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("sample nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.nodes.size


def _power_diff(b, w, p):
    """``(b + w)**p - b**p`` for ``b >= 0, w > 0`` without cancellation."""
    b = np.asarray(b, dtype=float)
    w = np.asarray(w, dtype=float)
    out = np.power(w, p)
    pos = b > 0
    if np.any(pos):
        bp = b[pos]
        out[pos] = np.power(bp, p) * np.expm1(p * np.log1p(w[pos] / bp))
    return out


def _taylor_remainder(b, w, q):
    """``(b + w)**q - b**q - q * b**(q-1) * w`` for ``b >= 0, w > 0``."""
    b = np.asarray(b, dtype=float)
    w = np.asarray(w, dtype=float)
    out = np.power(w, q)
    pos = b > 0
    if not np.any(pos):
        return out
    bp, r = b[pos], w[pos] / b[pos]
    rem = np.expm1(q * np.log1p(r)) - q * r
    small = r < 0.1
    if np.any(small):
        # binomial series from the r**2 term on; 16 terms reach 1e-16 for r < 0.1
        rs = r[small]
        coef, acc, power = q * (q - 1.0) / 2.0, np.zeros_like(rs), rs * rs
        for k in range(2, 18):
            acc += coef * power
            coef *= (q - k) / (k + 1.0)
            power = power * rs
        rem[small] = acc
    out[pos] = np.power(bp, q) * rem
    return out


def sample_kernel(order: float, nodes) -> SampledFunction:
    """Sample ``g_order`` on ``nodes`` (starting at 0) for use as convolution data.

    The kernel has no finite value at the origin when ``order < 1``.  The
    origin sample is chosen so that the linear interpolant on the first panel
    carries the exact kernel mass ``g_{order+1}(s_1)``.
    """
    s = np.asarray(nodes, dtype=float)
    vals = np.empty_like(s)
    vals[1:] = g_kernel(order, s[1:])
    vals[0] = vals[1] * (2.0 / order - 1.0) if order < 1 else g_kernel(order, 0.0)
    return SampledFunction(s, vals)


def conv_quadrature(kernel_order: float, f: SampledFunction) -> SampledFunction:
    r"""Product-integration approximation of ``(g_order * f)`` at every node.

    ``f`` is replaced by its piecewise linear interpolant and the kernel is
    integrated exactly against each linear segment, so the weak singularity
    of :math:`g_\beta` at zero costs nothing.  The value at ``s_0 = 0`` is 0.
    Work is O(M^2).
    """
    if len(f) < 2:
        raise ValueError("conv_quadrature needs at least two samples")
    beta = float(kernel_order)
    if not beta > 0:
        raise ValueError(f"kernel order must be positive, got {kernel_order}")

    s, v = f.nodes, f.values
    width = np.diff(s)
    out = np.zeros_like(s)
    g1 = gamma_fn(beta + 1.0)
    g2 = gamma_fn(beta + 2.0)
    for m in range(1, s.size):
        b = s[m] - s[1 : m + 1]  # distance to right panel ends
        b[-1] = 0.0
        w = width[:m]
        # integral of g over each panel
        mass = _power_diff(b, w, beta) / g1
        # integral of g(s_m - tau) * (tau - s_k) / w, i.e. the right hat
        right = _taylor_remainder(b, w, beta + 1.0) / (g2 * w)
        # the remaining panel mass belongs to the left endpoint
        left = mass - right
        out[m] = np.dot(left, v[:m]) + np.dot(right, v[1 : m + 1])
    return SampledFunction(s, out)


def l1_frac_derivative(beta: float, mesh, history, n: int) -> float:
    r"""L1 approximation of the Caputo derivative of order ``beta`` at ``t_n``.

    .. math::

        \frac{1}{\Gamma(2-\beta)} \sum_{k=0}^{n-1} (u_{k+1}-u_k)
        \frac{(t_n-t_k)^{1-\beta} - (t_n-t_{k+1})^{1-\beta}}{t_{k+1}-t_k}

    ``mesh`` is anything with a ``nodes`` array (or the node array itself);
    ``history`` holds ``u_0 .. u_n`` (longer sequences are accepted, only the
    first ``n + 1`` entries are used).
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    t = np.asarray(getattr(mesh, "nodes", mesh), dtype=float)
    u = np.asarray(history, dtype=float)
    if not 1 <= n < t.size:
        raise IndexError(f"step index {n} outside 1..{t.size - 1}")
    if u.shape[0] < n + 1:
        raise IndexError(f"history has {u.shape[0]} entries, need {n + 1}")
    p = 1.0 - beta
    b = t[n] - t[1 : n + 1]
    b[-1] = 0.0
    dt = np.diff(t[: n + 1])
    w = _power_diff(b, dt, p) / dt
    return float(np.dot(w, np.diff(u[: n + 1], axis=0)) / gamma_fn(2.0 - beta))


def lp_alpha_seminorm(alpha: float, p: float, f: SampledFunction) -> float:
    """``sup_t (g_alpha * |f|^p)(t)`` over the sample nodes.

    Note this is the p-th power of the norm, as in the definition of the
    weighted space; take the p-th root yourself if needed.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    powered = SampledFunction(f.nodes, np.abs(f.values) ** p)
    return float(np.max(conv_quadrature(alpha, powered).values))


# Mittag-Leffler ------------------------------------------------------------

_SERIES_MAX_TERMS = 20_000
_SERIES_NEG_LIMIT = 1.0


def mittag_leffler(alpha: float, z: float) -> float:
    r"""One-parameter Mittag-Leffler function :math:`E_\alpha(z)` for real z.

    Three regimes:

    * ``alpha == 1``: ``exp(z)``.
    * ``z >= -1``: the power series, summed in log space until the term ratio
      drops below machine precision.  No cancellation here (for z > 0 all
      terms are positive, for |z| <= 1 they are bounded by one).
    * ``z < -1``: the completely-monotone integral representation

      .. math::

          E_\alpha(-x) = \frac{\sin\alpha\pi}{\alpha\pi}\int_0^\infty
          \frac{x\, e^{-u^{1/\alpha}}}{u^2 + 2ux\cos\alpha\pi + x^2}\,du,

      integrated adaptively.  The series is useless here: for z = -50 its
      terms reach ``exp(50**(1/alpha))`` before cancelling.

    Raises :class:`ConvergenceError` if the series does not settle within its
    term budget or the quadrature misses its error target.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    z = float(z)
    if alpha == 1.0:
        return math.exp(z)
    if z == 0.0:
        return 1.0
    if z >= -_SERIES_NEG_LIMIT:
        return _ml_series(alpha, z)
    return _ml_integral(alpha, -z)


def _ml_series(alpha: float, z: float) -> float:
    logz = math.log(abs(z))
    sign = -1.0 if z < 0 else 1.0
    total = 1.0
    peaked = False
    prev_log = 0.0
    for j in range(1, _SERIES_MAX_TERMS):
        log_term = j * logz - math.lgamma(j * alpha + 1.0)
        if log_term > 709.0:
            return math.inf
        term = math.exp(log_term)
        total += term * (sign**j)
        if log_term < prev_log:
            peaked = True
        prev_log = log_term
        if peaked and term <= 1e-17 * abs(total):
            return total
    raise ConvergenceError(
        f"Mittag-Leffler series for alpha={alpha}, z={z} did not converge"
    )


def _ml_integral(alpha: float, x: float) -> float:
    c = math.cos(alpha * math.pi)
    pref = math.sin(alpha * math.pi) / (alpha * math.pi)
    inv_a = 1.0 / alpha

    def integrand(u):
        return x * math.exp(-(u**inv_a)) / (u * u + 2.0 * u * x * c + x * x)

    # exp(-u**(1/alpha)) underflows past this point
    upper = 745.0**alpha
    points = [x] if x < upper else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            integrand, 0.0, upper, points=points, limit=400, epsabs=1e-15, epsrel=1e-13
        )
    if err > 1e-11:
        raise ConvergenceError(
            f"Mittag-Leffler quadrature for alpha={alpha}, z={-x} "
            f"reached only {err:.2e}"
        )
    return pref * val
