import math

import mpmath
import numpy as np
import pytest

from crosslab.config import TOLERANCES
from crosslab.errors import NonFiniteSampleError, PoleError
from crosslab.numerics import (ComplexGrid, QuadratureRule, TabulatedStripFunction,
                               complex_beta, complex_gamma, gauss_legendre,
                               integrate_endpoint_power, integrate_segment, residue_at)


def _grid(n=100, radius=20.0, seed=1):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    z = r * np.exp(2j * np.pi * rng.random(n))
    # keep clear of the poles so the reflection check is well conditioned
    return z[np.abs(z - np.round(z.real)) > 0.05]


@pytest.mark.parametrize("z, expected", [(1, 1.0), (5, 24.0), (0.5, 1.77245385090552)])
def test_gamma_examples(z, expected):
    assert complex_gamma(z) == pytest.approx(expected, rel=1e-13)


def test_gamma_against_mpmath():
    rng = np.random.default_rng(7)
    z = 50 * np.sqrt(rng.random(400)) * np.exp(2j * np.pi * rng.random(400))
    z = z[np.abs(z - np.round(z.real)) > 1e-3]
    ours = complex_gamma(z)
    ref = np.array([complex(mpmath.gamma(mpmath.mpc(x.real, x.imag))) for x in z])
    assert np.max(np.abs(ours / ref - 1)) <= TOLERANCES["gamma_rel"]


def test_gamma_recurrence_and_reflection():
    z = _grid()
    rec = np.abs(complex_gamma(z + 1) / (z * complex_gamma(z)) - 1)
    assert rec.max() <= TOLERANCES["gamma_recurrence"]
    refl = np.abs(complex_gamma(z) * complex_gamma(1 - z) * np.sin(np.pi * z) / np.pi - 1)
    assert refl.max() <= TOLERANCES["gamma_reflection"]


@pytest.mark.parametrize("z", [0, -1, -7, 0.0 + 0j])
def test_gamma_pole(z):
    with pytest.raises(PoleError):
        complex_gamma(z)


def test_gamma_array_shape():
    out = complex_gamma(np.array([1.0, 2.0, 3.0]))
    assert out.shape == (3,)
    np.testing.assert_allclose(out, [1, 1, 2], rtol=1e-14)


def test_beta():
    assert complex_beta(1, 1) == pytest.approx(1.0, rel=1e-14)
    assert complex_beta(2, 3) == pytest.approx(1 / 12, rel=1e-14)
    assert complex_beta(1.5, 1.5) == pytest.approx(0.39269908169872, rel=1e-13)
    assert complex_beta(0.3 + 1j, 2.1) == complex_beta(2.1, 0.3 + 1j)


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (0.5, 4.0), (1.7, 2.3), (4.0, 4.0), (0.8, 3.1)])
def test_beta_integral(a, b):
    num = integrate_endpoint_power(lambda x: np.ones_like(x), a, b)
    assert abs(num / complex_beta(a, b) - 1) <= TOLERANCES["beta_integral"]


def test_beta_pole():
    with pytest.raises(PoleError):
        complex_beta(-1, 2)


def test_integrate_examples():
    assert integrate_segment(lambda x: x, 0, 1, gauss_legendre(8)) == pytest.approx(0.5, abs=1e-15)
    pi_est = integrate_segment(lambda x: 4 / (1 + x * x), 0, 1, gauss_legendre(32), 8)
    assert abs(pi_est - float(mpmath.pi)) <= 1e-12
    assert integrate_segment(lambda z: np.ones_like(z), 0, 1j) == pytest.approx(1j, abs=1e-15)


def test_integrate_linear_and_additive():
    f = lambda z: np.exp(-z * z) * np.cos(3 * z)
    g = lambda z: 1 / (2 + z)
    a, c = -0.7, 1.5
    lhs = integrate_segment(lambda z: 2 * f(z) - 3j * g(z), a, c)
    rhs = 2 * integrate_segment(f, a, c) - 3j * integrate_segment(g, a, c)
    assert abs(lhs - rhs) <= TOLERANCES["quadrature_linear"]
    # additivity along a straight path: split at an interior point of [a, c]
    m = a + 0.37 * (c - a)
    split = integrate_segment(f, a, m, subdivisions=4) + integrate_segment(f, m, c, subdivisions=4)
    assert abs(split - integrate_segment(f, a, c, subdivisions=4)) <= TOLERANCES["quadrature_linear"]


def test_integrate_nonfinite():
    with pytest.raises(NonFiniteSampleError), np.errstate(all="ignore"):
        integrate_segment(lambda z: 1 / z, -1, 1, gauss_legendre(3))


def test_integrate_deterministic():
    f = lambda z: np.sin(z) ** 2
    assert integrate_segment(f, 0, 3, subdivisions=5) == integrate_segment(f, 0, 3, subdivisions=5)


def test_residues():
    assert residue_at(lambda z: 1 / z, 0, 0.5) == pytest.approx(1, abs=1e-14)
    assert residue_at(complex_gamma, -1, 0.4) == pytest.approx(-1, abs=1e-12)
    assert abs(residue_at(lambda z: z, 0, 1.0)) <= 1e-15
    with pytest.raises(ValueError):
        residue_at(lambda z: z, 0, 0.0)


def test_quadrature_rule_invariants():
    rule = gauss_legendre(17)
    assert rule.order == 17 and abs(rule.weights.sum() - 2) <= 1e-14
    with pytest.raises(ValueError):
        QuadratureRule([0.0], [1.0])
    with pytest.raises(ValueError):
        QuadratureRule([0.0, 0.5], [1.0])


def test_grid_invariants():
    with pytest.raises(ValueError):
        ComplexGrid([])
    with pytest.raises(ValueError):
        ComplexGrid([1.0, math.inf])
    g = ComplexGrid.strip(-1, 1, 3, [0, 1])
    assert len(g) == 6 and g.points[3] == -1 + 1j


def test_tabulated_bilinear():
    re = np.linspace(0, 1, 3)
    im = np.linspace(0, 1, 2)
    table = (re[None, :] + 2j * im[:, None]).ravel()
    f = TabulatedStripFunction(re, im, table)
    np.testing.assert_allclose(f(np.array([0.25 + 0.5j, 0.9 + 0.1j])), [0.25 + 1j, 0.9 + 0.2j])
    assert np.isnan(f(np.array([2.0 + 0j]))[0])
