import mpmath
import numpy as np
import pytest

from crosslab.config import TOLERANCES
from crosslab.kinematics import (MassShellMomentum, cross, crossing_continuation, mandelstam,
                                 mandelstam_check, rapidity_to_momentum, two_particle_s)


def test_rapidity_examples():
    assert rapidity_to_momentum(0, 1).components == pytest.approx((1, 0))
    p0, p1 = rapidity_to_momentum(1j * np.pi, 1).components
    assert p0 == pytest.approx(-1) and abs(p1) < 1e-15
    p = rapidity_to_momentum(1, 2)
    assert p.p0 == pytest.approx(3.08616126963049, rel=1e-14)
    assert p.p1 == pytest.approx(2.35040238728760, rel=1e-14)


def test_onshell_on_strip():
    x, y = np.meshgrid(np.linspace(-3, 3, 20), np.linspace(0, np.pi, 10))
    for th in (x + 1j * y).ravel():
        p0, p1 = rapidity_to_momentum(th, 1.3).components
        assert abs(p0 * p0 - p1 * p1 - 1.69) <= TOLERANCES["onshell"] * max(1, abs(p0) ** 2)


def test_mass_positive():
    with pytest.raises(ValueError):
        MassShellMomentum(0.0, 0.0)


def test_two_particle_s():
    assert two_particle_s(0.4, 0.4, 1, 1) == pytest.approx(4)
    assert abs(two_particle_s(1j * np.pi, 0, 1, 1)) < 1e-15
    # oracle: 5 + 4 cosh 2 evaluated in high precision
    assert two_particle_s(2, 0, 1, 2) == pytest.approx(float(5 + 4 * mpmath.cosh(2)), rel=1e-14)
    assert two_particle_s(2, 0, 1, 2).real == pytest.approx(20.048782764334526, rel=1e-14)


def test_crossed_channel_value():
    s = two_particle_s(0.8, -0.3, 1, 1)
    crossed = two_particle_s(0.8 + 1j * np.pi, -0.3, 1, 1)
    assert abs(crossed - (2 - (s - 2))) <= 1e-13
    x = np.linspace(-4, 4, 50)
    assert np.max(np.abs(np.cosh(x + 1j * np.pi) + np.cosh(x))) <= TOLERANCES["cosh_flip"] * np.cosh(4)


def test_crossing_continuation():
    assert crossing_continuation(0) == 1j * np.pi
    assert crossing_continuation(0.5, -1) == 0.5 - 1j * np.pi
    with pytest.raises(ValueError):
        crossing_continuation(0, 2)
    p = rapidity_to_momentum(1.3, 1)
    q = cross(p)
    assert q.rapidity == 1.3 + 1j * np.pi
    assert np.allclose(q.components, [-c for c in p.components], atol=1e-14)
    twice = cross(q)
    assert np.allclose(twice.components, p.components, atol=1e-14)
    assert twice.rapidity == pytest.approx(1.3 + 2j * np.pi)


def test_charge_label():
    p = MassShellMomentum(1.0, 0.0, "k")
    assert cross(p).charge == "k-bar" and cross(cross(p)).charge == "k"
    assert cross(MassShellMomentum(1.0, 0.0)).charge == "neutral"


def test_mandelstam_at_rest():
    rest = [rapidity_to_momentum(0, 1)] * 4
    pt = mandelstam(rest)
    assert (pt.s, pt.t, pt.u) == pytest.approx((4, 0, 0))
    assert mandelstam_check(rest) == 0


def test_mandelstam_elastic_and_random():
    th = 0.7
    moms = [rapidity_to_momentum(x, 1) for x in (th, -th, -th, th)]
    assert mandelstam_check(moms) <= TOLERANCES["mandelstam"]
    rng = np.random.default_rng(3)
    for _ in range(20):
        # equal-mass elastic scattering in 1+1: the outgoing rapidities are a
        # permutation of the incoming ones
        a, b = rng.uniform(-2, 2, 2)
        moms = [rapidity_to_momentum(x, 1) for x in (a, b, b, a)]
        assert mandelstam_check(moms) <= TOLERANCES["mandelstam"] * 10
    with pytest.raises(ValueError):
        mandelstam(moms[:3])
