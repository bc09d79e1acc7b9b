"""Veneziano amplitude, vertex-operator correlators and one-variable Mellin pairs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (CoincidentPointError, DivergenceError, MomentumConservationError,
                     TruncationError)
from .numerics import (QuadratureRule, complex_beta, gauss_legendre, integrate_endpoint_power,
                       integrate_segment, residue_at)


@dataclass(frozen=True)
class Trajectory:
    intercept: float = 1.0
    slope: float = 1.0

    def __post_init__(self):
        if not self.slope > 0:
            raise ValueError("Regge slope must be positive")

    def __call__(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=complex)

    def pole(self, n: int) -> float:
        """Mandelstam value where alpha(x) = n."""
        return (n - self.intercept) / self.slope


DEFAULT_TRAJECTORY = Trajectory()


def veneziano(s, t, traj: Trajectory = DEFAULT_TRAJECTORY) -> complex:
    """A(s, t) = B(-alpha(s), -alpha(t))."""
    return complex(complex_beta(-complex(traj(s)), -complex(traj(t))))


def veneziano_integral(s, t, traj: Trajectory = DEFAULT_TRAJECTORY,
                       rule: QuadratureRule | None = None, subdivisions: int = 8) -> complex:
    """Integral over [0, 1] of z^(-alpha(s)-1) (1-z)^(-alpha(t)-1)."""
    a, b = -complex(traj(s)), -complex(traj(t))
    if a.real <= 0 or b.real <= 0:
        raise DivergenceError(f"integral diverges for -alpha(s) = {a}, -alpha(t) = {b}")
    return integrate_endpoint_power(lambda z: np.ones_like(z), a, b, rule, subdivisions)


def minkowski_dot(p, q, signature: str = "mostly-plus") -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if signature == "euclidean":
        return float(p @ q)
    sign = -1.0 if signature == "mostly-plus" else 1.0
    return float(sign * p[0] * q[0] + (1 if sign < 0 else -1) * (p[1:] @ q[1:]))


def _check_vertex_input(z, p):
    if len(z) != len(p):
        raise ValueError("need one momentum per insertion point")
    total = np.sum(np.asarray(p, dtype=float), axis=0)
    if np.max(np.abs(total)) > 1e-12:
        raise MomentumConservationError(f"momenta sum to {total}, not zero")
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if z[i] == z[j]:
                raise CoincidentPointError(f"points {i} and {j} coincide")


def vertex_correlator(z: Sequence[complex], p: Sequence, signature: str = "mostly-plus") -> complex:
    """prod_{i<j} (z_i - z_j)^(p_i . p_j), principal powers, sum of momenta zero."""
    z = [complex(v) for v in z]
    _check_vertex_input(z, p)
    out = 1.0 + 0j
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            out *= (z[i] - z[j]) ** minkowski_dot(p[i], p[j], signature)
    return out


def reduced_four_point(z: complex, p: Sequence, signature: str = "mostly-plus") -> complex:
    """Four-point correlator at (inf, 1, z, 0) with the z_1 power stripped."""
    _check_vertex_input([np.inf, 1.0, complex(z), 0.0], p)
    e34 = minkowski_dot(p[2], p[3], signature)
    e23 = minkowski_dot(p[1], p[2], signature)
    z = complex(z)
    return z ** e34 * (1 - z) ** e23


# ------------------------------------------------------------- poles

@dataclass(frozen=True)
class PoleData:
    n: int
    position: float
    t_samples: tuple
    residues: tuple          # residue in alpha(s) at each t sample
    degree: int
    fit_residual: float


def _fit_degree(t, r, tol):
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(r))))
    for d in range(len(t) - 1):
        coef_re = np.polyfit(t, r.real, d)
        coef_im = np.polyfit(t, r.imag, d)
        fit = np.polyval(coef_re, t) + 1j * np.polyval(coef_im, t)
        res = float(np.max(np.abs(fit - r)) / scale)
        if res <= tol:
            return d, res
    return len(t) - 1, 0.0


def schannel_pole_data(traj: Trajectory = DEFAULT_TRAJECTORY, n_max: int = 5,
                       t_samples: Sequence[float] | None = None, fit_tol: float = 1e-8) -> list[PoleData]:
    """Residues of A in alpha(s) at alpha(s) = n, from contour integrals in s."""
    if n_max > 8:
        raise ValueError("n_max is limited to 8")
    if t_samples is None:
        t_samples = np.linspace(-2.9, 2.1, 12)
    t_samples = tuple(float(t) for t in t_samples)
    radius = 0.25 / traj.slope
    out = []
    for n in range(n_max + 1):
        sn = traj.pole(n)
        res = []
        for t in t_samples:
            f = lambda s, t=t: np.array([veneziano(v, t, traj) for v in np.ravel(s)])
            res.append(complex(residue_at(f, sn, radius)) * traj.slope)
        deg, fit = _fit_degree(t_samples, res, fit_tol)
        out.append(PoleData(n, sn, t_samples, tuple(res), deg, fit))
    return out


def residue_closed_form(n: int, t, traj: Trajectory = DEFAULT_TRAJECTORY) -> complex:
    """-(alpha(t)+1)(alpha(t)+2)...(alpha(t)+n) / n!."""
    at = complex(traj(t))
    out = -1.0 + 0j
    for j in range(1, n + 1):
        out *= (at + j) / j
    return out


def pole_sum(s, t, N: int, traj: Trajectory = DEFAULT_TRAJECTORY):
    """Sum over n < N of (1 + alpha_t)_n / (n! (n - alpha_s)) and a tail estimate.

    Converges for Re alpha(t) < 0 where the terms fall like n^(alpha_t - 1); the
    tail is bounded by |last term| * N / (-Re alpha_t) up to a factor of two.
    """
    a_s, a_t = complex(traj(s)), complex(traj(t))
    if a_t.real >= 0:
        raise DivergenceError("the s-channel pole sum needs Re alpha(t) < 0")
    total = 0j
    coeff = 1.0 + 0j
    term = 0j
    for n in range(N):
        term = coeff / (n - a_s)
        total += term
        coeff *= (1 + a_t + n) / (n + 1)
    tail = 2.0 * abs(term) * N / (-a_t.real)
    return total, tail


def duality_residual(s, t, traj: Trajectory = DEFAULT_TRAJECTORY, N: int = 40) -> dict:
    closed = veneziano(s, t, traj)
    total, tail = pole_sum(s, t, N, traj)
    return {"pole_sum_error": abs(total - closed), "tail_estimate": tail,
            "symmetry": abs(veneziano(s, t, traj) - veneziano(t, s, traj))}


# ------------------------------------------------------------- Mellin

@dataclass(frozen=True)
class MellinAmplitude:
    evaluator: Callable
    abscissa: float
    label: str = ""

    def __call__(self, delta):
        return self.evaluator(np.asarray(delta, dtype=complex))


def mellin_reconstruct(M: MellinAmplitude, x, height: float = 40.0, order: int = 32,
                       subdivisions: int = 80, tail_tol: float = 1e-10) -> complex:
    """(1 / 2 pi i) * integral of M(delta) x^(-delta) along c + i[-height, height].

    Raises TruncationError when |M| at the cut-off times the Gaussian-free decay
    bound exceeds ``tail_tol``.
    """
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    c = M.abscissa
    ends = M(np.array([c + 1j * height, c - 1j * height]))
    tail = float(np.max(np.abs(ends))) * x ** (-c)
    if not np.isfinite(tail) or tail > tail_tol:
        raise TruncationError(f"contour tail {tail:.3g} exceeds {tail_tol:g}")
    lx = np.log(x)
    val = integrate_segment(lambda d: M(d) * np.exp(-d * lx), c - 1j * height, c + 1j * height,
                            gauss_legendre(order), subdivisions)
    return val / (2j * np.pi)


def gamma_pair() -> tuple[MellinAmplitude, Callable]:
    from .numerics import complex_gamma
    return MellinAmplitude(complex_gamma, 0.5, "Gamma(d)"), lambda x: np.exp(-x)


def beta_pair() -> tuple[MellinAmplitude, Callable]:
    from .numerics import complex_gamma
    M = MellinAmplitude(lambda d: complex_gamma(d) * complex_gamma(2 - d) / complex_gamma(2.0), 1.0,
                        "Gamma(d)Gamma(2-d)/Gamma(2)")
    return M, lambda x: (1 + x) ** -2.0


def scaled(M: MellinAmplitude, lam: float) -> MellinAmplitude:
    """M(delta) -> lam^delta M(delta), which reconstructs f(x / lam)."""
    l = np.log(lam)
    return MellinAmplitude(lambda d: np.exp(d * l) * M(d), M.abscissa, f"{lam}^d*{M.label}")


def dimension_mass_map(delta: float, traj: Trajectory = DEFAULT_TRAJECTORY) -> float:
    """m^2 = (delta - alpha0) / alpha'."""
    return (delta - traj.intercept) / traj.slope
