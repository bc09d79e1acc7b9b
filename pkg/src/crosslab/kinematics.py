"""Mass-shell kinematics in d = 1+1 and Mandelstam invariants."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class MassShellMomentum:
    mass: float
    rapidity: complex
    charge: str = "neutral"

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")

    @property
    def components(self) -> tuple[complex, complex]:
        th = complex(self.rapidity)
        return self.mass * np.cosh(th), self.mass * np.sinh(th)

    @property
    def p0(self):
        return self.components[0]

    @property
    def p1(self):
        return self.components[1]

    def conjugate_charge(self) -> str:
        # Selfconjugate particles carry the trivial label; others get "bar".
        if self.charge == "neutral":
            return self.charge
        return self.charge[:-4] if self.charge.endswith("-bar") else self.charge + "-bar"


@dataclass(frozen=True)
class MandelstamPoint:
    s: complex
    t: complex
    u: complex
    masses: tuple[float, float, float, float]

    @property
    def residual(self) -> float:
        return abs(self.s + self.t + self.u - sum(m * m for m in self.masses))


def minkowski(p, q) -> complex:
    """Bilinear (not sesquilinear) product, signature (+, -)."""
    return p[0] * q[0] - p[1] * q[1]


def rapidity_to_momentum(theta, m: float) -> MassShellMomentum:
    return MassShellMomentum(float(m), complex(theta))


def two_particle_s(theta1, theta2, m1: float, m2: float) -> complex:
    """(p1 + p2)^2 = m1^2 + m2^2 + 2 m1 m2 cosh(theta1 - theta2)."""
    return m1 * m1 + m2 * m2 + 2.0 * m1 * m2 * np.cosh(complex(theta1) - complex(theta2))


def crossing_continuation(theta, sign: int = 1) -> complex:
    """Rapidity shift by sign * i*pi; maps p to -p on the complex mass shell."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return complex(theta) + sign * 1j * np.pi


def cross(p: MassShellMomentum, sign: int = 1) -> MassShellMomentum:
    return MassShellMomentum(p.mass, crossing_continuation(p.rapidity, sign), p.conjugate_charge())


def mandelstam(momenta: Sequence[MassShellMomentum],
               assignment: Sequence[int] = (1, 1, -1, -1)) -> MandelstamPoint:
    """Invariants for a 2->2 process.

    ``assignment`` holds +1 for incoming and -1 for outgoing legs; all momenta
    are turned incoming before forming s=(q1+q2)^2, t=(q1+q3)^2, u=(q1+q4)^2.
    """
    if len(momenta) != 4 or len(assignment) != 4:
        raise ValueError("need exactly four momenta and four channel labels")
    q = [tuple(sign * c for c in p.components) for p, sign in zip(momenta, assignment)]

    def sq(a, b):
        v = (a[0] + b[0], a[1] + b[1])
        return minkowski(v, v)

    return MandelstamPoint(sq(q[0], q[1]), sq(q[0], q[2]), sq(q[0], q[3]),
                           tuple(p.mass for p in momenta))


def mandelstam_check(momenta: Sequence[MassShellMomentum],
                     assignment: Sequence[int] = (1, 1, -1, -1)) -> float:
    """|s + t + u - sum m^2|."""
    return mandelstam(momenta, assignment).residual
