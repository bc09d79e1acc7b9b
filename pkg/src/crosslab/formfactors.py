"""Formfactor axiom checkers and the minimal two-particle solver.

Candidates are functions of n rapidities.  The solver returns F_min as a
function of the difference theta = theta1 - theta2 with

    F(theta) = s(theta) F(-theta),   F(i pi + theta) = F(i pi - theta),   F(i pi) = 1,

and no zeros or poles in 0 < Im theta < pi.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import FORMFACTOR_GRID
from .errors import ContinuationError, NonConvergenceError
from .modular import dump_tabulated, load_tabulated, wave
from .numerics import ComplexGrid, gauss_legendre, segment_nodes
from .zf import ScatteringFunction


@dataclass(frozen=True)
class FormFactorCandidate:
    evaluator: Callable
    arity: int
    im_min: float = -np.inf
    im_max: float = np.inf
    label: str = ""

    def __call__(self, *thetas):
        if len(thetas) != self.arity:
            raise ValueError(f"candidate takes {self.arity} rapidities")
        args = [np.asarray(t, dtype=complex) for t in thetas]
        vals = np.asarray(self.evaluator(*args), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise ContinuationError(f"candidate {self.label!r} is not finite at the requested points")
        return vals

    def difference(self, theta):
        """Arity-2 candidate as a function of theta1 - theta2."""
        if self.arity != 2:
            raise ValueError("difference form needs arity 2")
        return self(theta, np.zeros_like(np.asarray(theta, dtype=complex)))


def from_difference(f: Callable, label: str = "", im_min=-np.inf, im_max=np.inf) -> FormFactorCandidate:
    return FormFactorCandidate(lambda t1, t2: f(t1 - t2), 2, im_min, im_max, label)


def constant_candidate(c: complex, arity: int = 2) -> FormFactorCandidate:
    c = complex(c)
    return FormFactorCandidate(lambda *t: np.full(np.broadcast(*t).shape, c, dtype=complex), arity,
                               label=f"const({c})")


def real_grid(grid=FORMFACTOR_GRID) -> np.ndarray:
    return np.linspace(grid["re_min"], grid["re_max"], grid["n_re"]) + 0j


def _spectators(arity: int) -> list[float]:
    return [-0.37 * (j + 1) for j in range(arity - 1)]


# -------------------------------------------------------------- checkers

def watson_residual(F: FormFactorCandidate, s: Callable, grid=None) -> float:
    """max |F(theta) - s(theta) F(-theta)| over real theta."""
    th = real_grid() if grid is None else np.asarray(grid, dtype=complex)
    return float(np.max(np.abs(F.difference(th) - s(th) * F.difference(-th))))


def crossing_symmetry_residual(F: FormFactorCandidate, grid=None, im_shifts=(0.0, np.pi / 2)) -> float:
    """max |F(i pi + theta) - F(i pi - theta)| for theta on the lines Im theta = shift."""
    x = real_grid() if grid is None else np.asarray(grid, dtype=complex)
    th = np.concatenate([x + 1j * y for y in im_shifts])
    return float(np.max(np.abs(F.difference(1j * np.pi + th) - F.difference(1j * np.pi - th))))


def cyclic_residual(F: FormFactorCandidate, grid: ComplexGrid | None = None) -> float:
    """max |F(t1, ..., tn) - F(t2, ..., tn, t1 - 2 pi i)|.

    t1 runs over ``grid`` (default: the formfactor strip lines), the other
    rapidities are fixed real spectators.
    """
    if grid is None:
        g = FORMFACTOR_GRID
        grid = ComplexGrid.strip(g["re_min"], g["re_max"], g["n_re"], g["im_lines"])
    t1 = grid.points
    rest = [np.full(t1.shape, v, dtype=complex) for v in _spectators(F.arity)]
    lhs = F(t1, *rest)
    rhs = F(*rest, t1 - 2j * np.pi)
    return float(np.max(np.abs(lhs - rhs)))


def exchange_residual(F: FormFactorCandidate, s: Callable, i: int = 0, grid=None) -> float:
    """max |F(.., ti, ti+1, ..) - s(ti - ti+1) F(.., ti+1, ti, ..)| over real ti."""
    if not 0 <= i < F.arity - 1:
        raise ValueError("exchange index out of range")
    x = real_grid() if grid is None else np.asarray(grid, dtype=complex)
    args = [np.full(x.shape, v, dtype=complex) for v in _spectators(F.arity + 1)[: F.arity]]
    args[i] = x
    swapped = list(args)
    swapped[i], swapped[i + 1] = args[i + 1], args[i]
    return float(np.max(np.abs(F(*args) - s(args[i] - args[i + 1]) * F(*swapped))))


# ------------------------------------------------------------------ solver

@dataclass(frozen=True)
class _Contour:
    nodes: np.ndarray
    weights: np.ndarray
    log_q: np.ndarray


def _contour(q: Callable, eta: float, half_width: float, panel: float, order: int) -> _Contour:
    n_panels = int(np.ceil(2 * half_width / panel))
    z, w = segment_nodes(-half_width - 1j * eta, half_width - 1j * eta, gauss_legendre(order), n_panels)
    with np.errstate(all="ignore"):
        qz = q(z)
        drop = q(-1j * eta * np.linspace(0, 1, 257))
    if not np.all(np.isfinite(qz)) or np.any(qz == 0):
        raise NonConvergenceError("s has a zero or pole on the integration contour")
    # anchor the branch: follow arg q continuously from theta = 0 (where q = 1)
    anchor = np.unwrap(np.angle(drop))[-1]
    mid = int(np.searchsorted(z.real, 0.0))
    phase = np.empty(z.size)
    right = np.unwrap(np.concatenate([[anchor], np.angle(qz[mid:])]))[1:]
    left = np.unwrap(np.concatenate([[anchor], np.angle(qz[:mid][::-1])]))[1:][::-1]
    phase[mid:] = right
    phase[:mid] = left
    return _Contour(z, w, np.log(np.abs(qz)) + 1j * phase)


def _log_integral(theta: np.ndarray, c: _Contour) -> np.ndarray:
    """(i / 4 pi) * integral of log q(t) [coth((theta - t)/2) + tanh(t/2)] dt."""
    th = theta.ravel()
    out = np.empty(th.shape, dtype=complex)
    wl = c.weights * c.log_q
    tanh_t = np.tanh(c.nodes / 2)
    for start in range(0, th.size, 64):
        block = th[start:start + 64, None]
        kernel = 1.0 / np.tanh((block - c.nodes[None, :]) / 2) + tanh_t[None, :]
        out[start:start + 64] = kernel @ wl
    return (1j / (4 * np.pi) * out).reshape(theta.shape)


@dataclass(frozen=True)
class MinimalFormFactor:
    """F_min = (jump factor) * exp(log integral); valid for -eta < Im theta < 2 pi - eta."""

    s: ScatteringFunction
    s0: int
    eta: float
    contour: _Contour | None

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=complex)
        jump = np.sinh(theta / 2) / np.sinh(1j * np.pi / 2) if self.s0 == -1 else np.ones_like(theta)
        if self.contour is None:
            return jump
        im = theta.imag
        inside = (im > -self.eta) & (im < 2 * np.pi - self.eta)
        out = np.full(theta.shape, np.nan + 0j)
        if np.any(inside):
            out[inside] = jump[inside] * np.exp(_log_integral(theta[inside], self.contour))
        return out

    def candidate(self) -> FormFactorCandidate:
        lo, hi = (-np.inf, np.inf) if self.contour is None else (-self.eta, 2 * np.pi - self.eta)
        return from_difference(self, f"F_min[{self.s.label}]", lo, hi)


def default_eta(s: ScatteringFunction) -> float:
    if s.family == "s_a":
        a = s.params[0] % np.pi
        return 0.5 * min(a, np.pi - a)
    return 0.25


def solve_minimal(s: ScatteringFunction, eta: float | None = None, half_width: float = 40.0,
                  panel: float = 0.05, order: int = 16, check_points=None,
                  tol: float = 1e-9) -> MinimalFormFactor:
    """Minimal two-particle formfactor normalised to F(i pi) = 1.

    s(0) = +-1 by unitarity.  For s(0) = -1 the factor sinh(theta/2)/sinh(i pi/2)
    solves the equations with s = -1 exactly; the rest q = s/s(0) has a log
    that is odd and analytic near the real axis, so its contribution is the
    coth-kernel integral of log q along the line Im t = -eta.  The integral is
    repeated with half the panel width and the two must agree within ``tol``.
    """
    s0_val = complex(s(np.asarray(0.0 + 0j)))
    if abs(abs(s0_val.real) - 1) > 1e-9 or abs(s0_val.imag) > 1e-9:
        raise ValueError(f"s(0) = {s0_val} violates unitarity")
    s0 = 1 if s0_val.real > 0 else -1
    q = lambda z: s(z) * s0
    probe = np.linspace(-8, 8, 33) + 0j
    with np.errstate(all="ignore"):
        trivial = np.max(np.abs(q(probe) - 1)) <= 1e-15
    if trivial:
        return MinimalFormFactor(s, s0, np.inf, None)
    eta = default_eta(s) if eta is None else float(eta)
    coarse = _contour(q, eta, half_width, panel, order)
    fine = _contour(q, eta, half_width, panel / 2, order)
    pts = (np.array([0.5, 2.0, -3.0, 1j * np.pi / 2 + 1.0]) + 0j if check_points is None
           else np.asarray(check_points, dtype=complex))
    diff = np.max(np.abs(_log_integral(pts, coarse) - _log_integral(pts, fine)))
    if not np.isfinite(diff) or diff > tol:
        raise NonConvergenceError(f"log integral changed by {diff:.3g} under refinement")
    return MinimalFormFactor(s, s0, eta, fine)


def minimal_report(s: ScatteringFunction) -> dict:
    F = solve_minimal(s).candidate()
    out = {"watson": watson_residual(F, s), "crossing": crossing_symmetry_residual(F),
           "normalisation": float(abs(F.difference(np.array([1j * np.pi]))[0] - 1))}
    if s.family == "const" and complex(s.params[0]).real < 0:
        th = real_grid()
        th = th[np.abs(th) > 1e-12]
        ratio = F.difference(th) / (np.sinh(th / 2) / np.sinh(1j * np.pi / 2))
        out["sinh_ratio"] = float(np.max(np.abs(ratio - ratio[0])))
    return out


# --------------------------------------------------------------------- IO

def dump_candidate(F: FormFactorCandidate, path, **grid) -> None:
    """Tabulate an arity-2 candidate (difference form) on the strip grid."""
    dump_tabulated(wave(lambda z: F.difference(z), F.label), path, **grid)


def load_candidate(path) -> FormFactorCandidate:
    w = load_tabulated(path)
    return from_difference(lambda z: w(z), str(path), w.value.im_min, w.value.im_max)
