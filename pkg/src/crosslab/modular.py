"""One-particle modular objects of the standard wedge, rapidity representation.

A wedge-localized wave function is carried by its rapidity restriction, which
is analytic and bounded on the strip 0 <= Im theta <= pi.  With the default
convention package

    delta^{it} psi (theta) = psi(theta - 2 pi t)
    delta^{1/2} psi(theta) = psi(theta + i pi)
    j psi (theta)          = conj(psi(conj(theta)))

the Tomita operator is s = j delta^{1/2}.  All operators act on the analytic
evaluator, so compositions can be evaluated anywhere the input is analytic.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import CONVENTIONS, WEDGE_GRID, ConventionPackage
from .errors import ContinuationError
from .numerics import (ComplexGrid, StripFunction, TabulatedStripFunction,
                       gauss_legendre, integrate_segment, segment_nodes)


@dataclass(frozen=True)
class ModularAction:
    boost_parameter: float = 0.0
    reflection_flag: bool = False

    def compose(self, other: "ModularAction") -> "ModularAction":
        # j commutes with delta^{it}; the boost parameters add.
        return ModularAction(self.boost_parameter + other.boost_parameter,
                             self.reflection_flag != other.reflection_flag)

    def __call__(self, psi: "WedgeWaveFunction") -> "WedgeWaveFunction":
        out = apply_delta_it(psi, self.boost_parameter)
        return apply_j(out) if self.reflection_flag else out


@dataclass(frozen=True)
class WedgeWaveFunction:
    value: StripFunction
    mass: float = 1.0
    charge: str = "neutral"

    def __call__(self, theta):
        return self.value(theta)

    def _with(self, func, label):
        return replace(self, value=StripFunction(func, self.value.im_min, self.value.im_max, label))

    def __add__(self, other: "WedgeWaveFunction") -> "WedgeWaveFunction":
        f, g = self.value, other.value
        return self._with(lambda z: f(z) + g(z), f"({f.label}+{g.label})")

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "WedgeWaveFunction":
        f = self.value
        c = complex(c)
        return self._with(lambda z: c * f(z), f"{c}*{f.label}")

    def sample(self, points) -> np.ndarray:
        pts = points.points if isinstance(points, ComplexGrid) else np.asarray(points, dtype=complex)
        vals = np.asarray(self.value(pts), dtype=complex)
        if vals.shape != pts.shape:
            vals = np.broadcast_to(vals, pts.shape).astype(complex)
        if not np.all(np.isfinite(vals)):
            bad = pts[~np.isfinite(vals)][0]
            raise ContinuationError(f"wave function {self.value.label!r} not finite at {bad!r}")
        return vals

    def sup_norm(self, grid: ComplexGrid) -> float:
        return float(np.max(np.abs(self.sample(grid))))


def wave(func, label: str = "", mass: float = 1.0) -> WedgeWaveFunction:
    return WedgeWaveFunction(StripFunction(func, 0.0, np.pi, label), mass)


def gaussian_wave(center: complex = 0.0, width: float = 1.0, amplitude: complex = 1.0,
                  mass: float = 1.0) -> WedgeWaveFunction:
    """amplitude * exp(-(theta - center)^2 / width); entire in theta."""
    c, w, a = complex(center), float(width), complex(amplitude)
    return wave(lambda z: a * np.exp(-(z - c) ** 2 / w), f"gauss({center},{width})", mass)


def constant_wave(c: complex = 1.0) -> WedgeWaveFunction:
    c = complex(c)
    return wave(lambda z: np.full(np.shape(z), c, dtype=complex), f"const({c})")


def zero_wave() -> WedgeWaveFunction:
    return constant_wave(0.0)


def strip_grid(n_re: int = WEDGE_GRID["n_re"], n_im: int = WEDGE_GRID["n_im"],
               re_min: float = WEDGE_GRID["re_min"], re_max: float = WEDGE_GRID["re_max"]) -> ComplexGrid:
    return ComplexGrid.strip(re_min, re_max, n_re, np.linspace(0.0, np.pi, n_im), "wedge strip")


def real_grid(n_re: int = WEDGE_GRID["n_re"], re_min: float = WEDGE_GRID["re_min"],
              re_max: float = WEDGE_GRID["re_max"]) -> ComplexGrid:
    return ComplexGrid.real_line(re_min, re_max, n_re)


# ---------------------------------------------------------------- operators

def apply_delta(psi: WedgeWaveFunction, power: complex,
                conventions: ConventionPackage = CONVENTIONS) -> WedgeWaveFunction:
    """delta^power; power = i t gives the unitary boost, power = 1/2 the continuation."""
    # delta^{it}: theta -> theta + boost_sign * 2 pi t, and t = -i * power.
    shift = conventions.boost_sign * 2.0 * np.pi * (-1j * complex(power))
    f = psi.value
    return psi._with(lambda z: f(z + shift), f"delta^{power}[{f.label}]")


def apply_delta_it(psi: WedgeWaveFunction, t: float,
                   conventions: ConventionPackage = CONVENTIONS) -> WedgeWaveFunction:
    return apply_delta(psi, 1j * float(t), conventions)


def apply_j(psi: WedgeWaveFunction) -> WedgeWaveFunction:
    """Antilinear wedge reflection; the analytic extension is conj o psi o conj."""
    f = psi.value
    return psi._with(lambda z: np.conj(f(np.conj(z))), f"j[{f.label}]")


def apply_s(psi: WedgeWaveFunction, conventions: ConventionPackage = CONVENTIONS) -> WedgeWaveFunction:
    """Tomita operator s = j delta^{1/2}."""
    return apply_j(apply_delta(psi, 0.5, conventions))


def apply_s_adjoint(psi: WedgeWaveFunction, conventions: ConventionPackage = CONVENTIONS) -> WedgeWaveFunction:
    """s* = delta^{1/2} j, defined on the domain of delta^{-1/2}."""
    return apply_delta(apply_j(psi), 0.5, conventions)


def inner_product(f: WedgeWaveFunction, g: WedgeWaveFunction, half_width: float = 12.0,
                  order: int = 32, subdivisions: int = 48) -> complex:
    """Rapidity inner product: integral of conj(f) g dtheta/2 over the real line."""
    return 0.5 * integrate_segment(lambda z: np.conj(f(z)) * g(z), -half_width, half_width,
                                   gauss_legendre(order), subdivisions)


# ----------------------------------------------------------------- residuals

def _scaled_sup(diff: np.ndarray, ref: np.ndarray) -> float:
    """sup |diff| divided by max(1, sup |ref|)."""
    return float(np.max(np.abs(diff)) / max(1.0, float(np.max(np.abs(ref)))))


def grid_residual(a: WedgeWaveFunction, b: WedgeWaveFunction, grid: ComplexGrid) -> float:
    va, vb = a.sample(grid), b.sample(grid)
    return _scaled_sup(va - vb, vb)


def group_law_residual(psi, t1, t2, grid=None) -> float:
    grid = grid or strip_grid()
    return grid_residual(apply_delta_it(apply_delta_it(psi, t1), t2), apply_delta_it(psi, t1 + t2), grid)


def unitarity_residual(f, g, t) -> float:
    before = inner_product(f, g)
    after = inner_product(apply_delta_it(f, t), apply_delta_it(g, t))
    return abs(after - before) / max(1.0, abs(before))


def s_squared_residual(psi, grid=None) -> float:
    grid = grid or strip_grid()
    return grid_residual(apply_s(apply_s(psi)), psi, grid)


def j_delta_j_residual(psi, grid=None) -> float:
    """j delta^{1/2} j against delta^{-1/2} on the real line."""
    grid = grid or real_grid()
    return grid_residual(apply_j(apply_delta(apply_j(psi), 0.5)), apply_delta(psi, -0.5), grid)


def cauchy_reconstruct(psi: WedgeWaveFunction, z, im_lo: float, im_hi: float, half_width: float,
                       order: int = 32, panels_per_unit: float = 2.0) -> np.ndarray:
    """Values inside a rectangle recovered from boundary data by Cauchy's formula."""
    z = np.asarray(z, dtype=complex)
    corners = [complex(-half_width, im_lo), complex(half_width, im_lo),
               complex(half_width, im_hi), complex(-half_width, im_hi)]
    rule = gauss_legendre(order)
    total = np.zeros(z.shape, dtype=complex)
    for a, b in zip(corners, corners[1:] + corners[:1]):
        n = max(1, int(np.ceil(abs(b - a) * panels_per_unit)))
        w_nodes, w = segment_nodes(a, b, rule, n)
        vals = psi.sample(w_nodes)
        total += np.sum(w[None, :] * vals[None, :] / (w_nodes[None, :] - z.ravel()[:, None]), axis=1).reshape(z.shape)
    return total / (2j * np.pi)


def analyticity_residual(psi: WedgeWaveFunction, im_lo: float = 0.0, im_hi: float = np.pi,
                         half_width: float = 7.0, n_points: int = 13) -> float:
    """Strip-analyticity certificate.

    Compares psi on the mid line of the rectangle with the Cauchy integral of
    its boundary values.  Analytic data agree to quadrature accuracy; data
    that are not the boundary values of one analytic function do not.
    """
    mid = 0.5 * (im_lo + im_hi)
    z = np.linspace(-half_width / 2, half_width / 2, n_points) + 1j * mid
    direct = psi.sample(z)
    return _scaled_sup(cauchy_reconstruct(psi, z, im_lo, im_hi, half_width) - direct, direct)


def proto_crossing_residual(psi: WedgeWaveFunction, grid: ComplexGrid | None = None,
                            conventions: ConventionPackage = CONVENTIONS) -> float:
    """delta^{1/2} j psi (p) against conj(psi(-p)).

    The backward shell is reached through the strip on which s* = delta^{1/2} j
    is defined, i.e. theta -> theta - continuation_sign * i pi.  The residual
    also includes the analyticity certificate on that strip, since the identity
    is only meaningful for boundary values of an analytic function.
    """
    grid = grid or real_grid()
    shift = -conventions.continuation_sign * 1j * np.pi
    lhs = apply_s_adjoint(psi, conventions).sample(grid)
    rhs = np.conj(psi.sample(grid.points + shift))
    identity = _scaled_sup(lhs - rhs, rhs)
    lo, hi = sorted((0.0, shift.imag))
    return max(identity, analyticity_residual(psi, lo, hi))


def k_space_membership(psi: WedgeWaveFunction, tol: float = 1e-8, grid: ComplexGrid | None = None) -> bool:
    """True iff s psi = psi on the strip grid within ``tol`` (relative to sup |psi|)."""
    grid = grid or strip_grid()
    return grid_residual(apply_s(psi), psi, grid) <= tol


def symmetrize(phi: WedgeWaveFunction) -> WedgeWaveFunction:
    """phi + s phi, an element of the real subspace K."""
    return phi + apply_s(phi)


# ------------------------------------------------------------------- grid IO

def dump_tabulated(psi: WedgeWaveFunction, path, n_re: int = WEDGE_GRID["n_re"],
                   n_im: int = WEDGE_GRID["n_im"], re_min: float = WEDGE_GRID["re_min"],
                   re_max: float = WEDGE_GRID["re_max"], im_min: float = 0.0,
                   im_max: float = np.pi) -> None:
    """Write psi on the strip grid: one ``re im`` pair per node, rows = Im lines."""
    im = np.linspace(im_min, im_max, n_im)
    vals = psi.sample(ComplexGrid.strip(re_min, re_max, n_re, im))
    lines = [f"# strip {float(re_min)!r} {float(re_max)!r} {int(n_re)} "
             f"{float(im_min)!r} {float(im_max)!r} {int(n_im)}"]
    lines += [f"{float(v.real)!r} {float(v.imag)!r}" for v in vals]
    Path(path).write_text("\n".join(lines) + "\n")


def load_tabulated(path, mass: float = 1.0) -> WedgeWaveFunction:
    """Read a grid file written by ``dump_tabulated``.

    Files without a ``# strip`` header are taken to use the default grid.
    """
    spec = dict(WEDGE_GRID, im_min=0.0, im_max=np.pi)
    values = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "strip":
                re_min, re_max, n_re, im_min, im_max, n_im = parts[1:7]
                spec = dict(re_min=float(re_min), re_max=float(re_max), n_re=int(n_re),
                            im_min=float(im_min), im_max=float(im_max), n_im=int(n_im))
            continue
        re_s, im_s = line.split()[:2]
        values.append(complex(float(re_s), float(im_s)))
    expected = spec["n_re"] * spec["n_im"]
    if len(values) != expected:
        raise ValueError(f"grid file has {len(values)} nodes, header implies {expected}")
    table = TabulatedStripFunction(np.linspace(spec["re_min"], spec["re_max"], spec["n_re"]),
                                   np.linspace(spec["im_min"], spec["im_max"], spec["n_im"]),
                                   values)
    return WedgeWaveFunction(StripFunction(table, spec["im_min"], spec["im_max"], str(path)), mass)
