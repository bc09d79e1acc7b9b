"""Complex special functions and fixed-order quadrature.

Gamma uses a Lanczos approximation (g = 7, nine terms) in the right half
plane and the reflection formula for Re z < 1/2.  Integration is composite
Gauss-Legendre along straight segments in the complex plane; endpoint power
singularities are removed by a change of variables instead of adaptivity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import NonFiniteSampleError, PoleError

_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ComplexGrid:
    points: np.ndarray
    description: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if pts.size == 0:
            raise ValueError("grid must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    @classmethod
    def real_line(cls, lo, hi, n, description="real line"):
        return cls(np.linspace(lo, hi, n) + 0j, description)

    @classmethod
    def strip(cls, re_min, re_max, n_re, im_values, description="strip"):
        """Row-major grid: one row per imaginary part, ``n_re`` points each."""
        x = np.linspace(re_min, re_max, n_re)
        pts = np.concatenate([x + 1j * y for y in im_values])
        return cls(pts, description)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int = field(default=0)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        order = self.order or nodes.size
        if not (nodes.size == weights.size == order) or order < 1:
            raise ValueError("node count, weight count and order must agree")
        if np.any(weights <= 0) or np.any(np.abs(nodes) > 1):
            raise ValueError("weights must be positive and nodes inside [-1, 1]")
        if abs(weights.sum() - 2.0) > 1e-14:
            raise ValueError("weights must sum to 2")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", order)


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(order)
    # leggauss weights carry ~1 ulp per node; renormalise so the sum is 2.
    w = w * (2.0 / w.sum())
    return QuadratureRule(x, w, order)


def _is_nonpositive_integer(z: np.ndarray) -> np.ndarray:
    n = np.round(z.real)
    return (n <= 0) & (np.abs(z - n) < 1e-300)


def _gamma_right(z: np.ndarray) -> np.ndarray:
    """Lanczos sum, valid for Re z >= 1/2."""
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(1, _LANCZOS_COEF.size):
        acc = acc + _LANCZOS_COEF[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return np.exp(_HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t) * acc


def _sin_pi(z: np.ndarray) -> np.ndarray:
    n = np.round(z.real)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return sign * np.sin(np.pi * (z - n))


def complex_gamma(z):
    """Gamma function for complex (scalar or array) arguments.

    Raises PoleError at non-positive integers.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_nonpositive_integer(zz)):
        raise PoleError(f"Gamma has a pole at {z!r}")
    out = np.empty_like(zz)
    left = zz.real < 0.5
    if np.any(~left):
        out[~left] = _gamma_right(zz[~left])
    if np.any(left):
        zl = zz[left]
        out[left] = np.pi / (_sin_pi(zl) * _gamma_right(1.0 - zl))
    return complex(out[0]) if scalar else out


def complex_beta(a, b):
    """Euler beta Gamma(a)Gamma(b)/Gamma(a+b); symmetric bit-for-bit."""
    return complex_gamma(a) * complex_gamma(b) / complex_gamma(np.add(a, b))


def _sample(f: Callable, z: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(z), dtype=complex)
        if vals.shape != z.shape:
            vals = np.broadcast_to(vals, z.shape).astype(complex)
    except (TypeError, ValueError):
        vals = np.array([complex(f(complex(zi))) for zi in z.ravel()]).reshape(z.shape)
    if not np.all(np.isfinite(vals)):
        bad = z[~np.isfinite(vals)][0]
        raise NonFiniteSampleError(f"integrand is not finite at {bad!r}")
    return vals


def segment_nodes(a, b, rule: QuadratureRule, subdivisions: int = 1):
    """Nodes and complex weights (including dz) of the composite rule on [a, b]."""
    if subdivisions < 1:
        raise ValueError("subdivisions must be positive")
    a = complex(a)
    b = complex(b)
    h = (b - a) / subdivisions
    left = a + h * np.arange(subdivisions)
    z = (left[:, None] + 0.5 * h * (rule.nodes[None, :] + 1.0)).ravel()
    w = np.tile(0.5 * h * rule.weights, subdivisions)
    return z, w


def integrate_segment(f: Callable, a, b, rule: QuadratureRule | None = None,
                      subdivisions: int = 1) -> complex:
    """Composite Gauss-Legendre estimate of the integral of ``f`` along [a, b].

    ``f`` is called with an array of complex nodes; scalar-only callables are
    evaluated pointwise as a fallback.
    """
    rule = rule or gauss_legendre(32)
    z, w = segment_nodes(a, b, rule, subdivisions)
    return complex(np.sum(w * _sample(f, z)))


def integrate_endpoint_power(g: Callable, alpha, beta, rule: QuadratureRule | None = None,
                             subdivisions: int = 8, smoothing: float = 8.0) -> complex:
    """Integral over [0, 1] of z^(alpha-1) (1-z)^(beta-1) g(z).

    Both halves are mapped by z = u^k (resp. 1-z = u^k) with k chosen so that
    the transformed power k*Re(alpha) is at least ``smoothing``; the mapped
    integrand is then bounded with high-order contact at the endpoint.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if alpha.real <= 0 or beta.real <= 0:
        raise ValueError("exponents need positive real part")
    rule = rule or gauss_legendre(32)

    def half(p, q, flip):
        k = max(1.0, math.ceil(smoothing / p.real))
        upper = 0.5 ** (1.0 / k)

        def mapped(u):
            u = np.asarray(u, dtype=complex)
            x = u ** k
            other = 1.0 - x
            inner = g(other if flip else x)
            # k u^(k-1) u^(k(p-1)) = k u^(k p - 1)
            return k * np.exp((k * p - 1.0) * np.log(u)) * np.exp((q - 1.0) * np.log(other)) * inner

        return integrate_segment(mapped, 0.0, upper, rule, subdivisions)

    return half(alpha, beta, False) + half(beta, alpha, True)


def residue_at(f: Callable, z0, radius: float, rule: QuadratureRule | None = None,
               subdivisions: int = 4) -> complex:
    """(1/2 pi i) times the contour integral of ``f`` on the circle |z - z0| = radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    rule = rule or gauss_legendre(32)
    z0 = complex(z0)

    def integrand(phi):
        e = np.exp(1j * phi.real)
        return f(z0 + radius * e) * radius * e / (2.0 * np.pi)

    return integrate_segment(integrand, 0.0, 2.0 * np.pi, rule, subdivisions)


@dataclass(frozen=True)
class StripFunction:
    """Complex function of one complex variable, analytic on a declared strip.

    ``func`` must accept numpy arrays.  The strip bounds are bookkeeping used
    by callers that continue the function; evaluation itself is not clipped.
    """

    func: Callable
    im_min: float = 0.0
    im_max: float = math.pi
    label: str = ""

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))

    def in_strip(self, z, slack: float = 1e-12) -> np.ndarray:
        im = np.asarray(z, dtype=complex).imag
        return (im >= self.im_min - slack) & (im <= self.im_max + slack)


class TabulatedStripFunction:
    """Grid data on a rectangular strip, bilinearly interpolated.

    Points outside the tabulated rectangle evaluate to nan, which callers turn
    into a ContinuationError.
    """

    def __init__(self, re_values, im_values, table):
        self.re = np.asarray(re_values, dtype=float)
        self.im = np.asarray(im_values, dtype=float)
        self.table = np.asarray(table, dtype=complex).reshape(self.im.size, self.re.size)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real.ravel(), z.imag.ravel()
        out = np.full(x.shape, np.nan + 0j)
        eps = 1e-9
        inside = ((x >= self.re[0] - eps) & (x <= self.re[-1] + eps)
                  & (y >= self.im[0] - eps) & (y <= self.im[-1] + eps))
        if np.any(inside):
            xi, yi = x[inside], y[inside]
            i = np.clip(np.searchsorted(self.re, xi) - 1, 0, self.re.size - 2) if self.re.size > 1 else np.zeros(xi.size, int)
            k = np.clip(np.searchsorted(self.im, yi) - 1, 0, self.im.size - 2) if self.im.size > 1 else np.zeros(yi.size, int)
            if self.re.size > 1:
                tx = np.clip((xi - self.re[i]) / (self.re[i + 1] - self.re[i]), 0.0, 1.0)
            else:
                tx = np.zeros(xi.size)
            if self.im.size > 1:
                ty = np.clip((yi - self.im[k]) / (self.im[k + 1] - self.im[k]), 0.0, 1.0)
            else:
                ty = np.zeros(yi.size)
            i1 = np.minimum(i + 1, self.re.size - 1)
            k1 = np.minimum(k + 1, self.im.size - 1)
            t = self.table
            out[inside] = ((1 - tx) * (1 - ty) * t[k, i] + tx * (1 - ty) * t[k, i1]
                           + (1 - tx) * ty * t[k1, i] + tx * ty * t[k1, i1])
        return out.reshape(z.shape)
