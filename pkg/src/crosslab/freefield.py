"""Wick-contraction engine for the free massive scalar in d = 1+1.

Every operator is expanded into legs.  A leg carries a creation kernel c and
an annihilation kernel a (functions of rapidity); the contraction of leg i
standing left of leg j is

    <i j> = integral of a_i(theta) c_j(theta) dtheta/2.

For the smeared field A(f) with rapidity wave function phi, c = phi and
a = phi(theta + i pi): wedge localization makes phi(p) analytic on the strip
and phi(-p) is its boundary value at theta + i pi.  A ket particle has only
the creation kernel, a bra particle only the annihilation kernel j psi.
Vacuum expectation values are sums over perfect matchings of legs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import CONVENTIONS, PAIRING_LINE, ConventionPackage
from .errors import ContinuationError
from .modular import (WedgeWaveFunction, apply_delta, apply_j, apply_s_adjoint, gaussian_wave)
from .numerics import gauss_legendre, segment_nodes


@dataclass(frozen=True)
class SmearedField:
    """A(f) for kind "A", or the Wick power :A(h)^k: for kind "C"."""

    wave: WedgeWaveFunction
    kind: str = "A"
    power: int = 1
    wick_ordered: bool = True

    def __post_init__(self):
        if self.kind not in ("A", "C"):
            raise ValueError("kind must be 'A' or 'C'")
        if self.power < 1:
            raise ValueError("composite power must be at least 1")
        if self.kind == "A" and self.power != 1:
            raise ValueError("an elementary field has power 1")


def field_op(wave: WedgeWaveFunction) -> SmearedField:
    return SmearedField(wave, "A")


def composite(wave: WedgeWaveFunction, k: int, wick_ordered: bool = True) -> SmearedField:
    return SmearedField(wave, "C", k, wick_ordered)


@dataclass(frozen=True)
class Particle:
    """External one-particle state smeared with ``wave``; side is "bra" or "ket".

    ``marked`` flags the particle taking part in a crossing, so that the
    contractions-omitted rule can find its leg.
    """

    wave: WedgeWaveFunction
    side: str = "ket"
    marked: bool = False

    def __post_init__(self):
        if self.side not in ("bra", "ket"):
            raise ValueError("side must be 'bra' or 'ket'")


@dataclass(frozen=True)
class Leg:
    create: Callable | None
    annihilate: Callable | None
    group: int
    tag: str = ""


@dataclass(frozen=True)
class ContractionTerm:
    pairing: tuple[tuple[int, int], ...]
    coefficient: complex


@dataclass
class PairingLine:
    half_width: float = PAIRING_LINE["half_width"]
    order: int = PAIRING_LINE["order"]
    subdivisions: int = PAIRING_LINE["subdivisions"]
    _cache: tuple = field(default=None, init=False, repr=False)

    def nodes(self):
        if self._cache is None:
            self._cache = segment_nodes(-self.half_width, self.half_width,
                                        gauss_legendre(self.order), self.subdivisions)
        return self._cache


def _shifted(wave: WedgeWaveFunction, shift: complex):
    return lambda z: wave(z + shift)


def expand_legs(ops: Sequence, conventions: ConventionPackage = CONVENTIONS) -> list[Leg]:
    """Legs in operator order; legs of one Wick-ordered composite share a group."""
    legs = []
    up = conventions.continuation_sign * 1j * np.pi
    for g, op in enumerate(ops):
        if isinstance(op, Particle):
            tag = op.side + ("*" if op.marked else "")
            if op.side == "ket":
                legs.append(Leg(op.wave, None, g, tag))
            else:
                legs.append(Leg(None, apply_j(op.wave), g, tag))
            continue
        tag = "A" if op.kind == "A" else "C"
        group = g if (op.kind == "C" and op.wick_ordered) else None
        for r in range(op.power):
            legs.append(Leg(op.wave, _shifted(op.wave, up), g if group is not None else (g, r), tag))
    return legs


def _sample_kernel(func, nodes) -> np.ndarray:
    if func is None:
        return np.zeros(nodes.shape, dtype=complex)
    vals = np.asarray(func(nodes), dtype=complex)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape).astype(complex)
    if not np.all(np.isfinite(vals)):
        raise ContinuationError("continued wave function is not finite on the pairing line")
    return vals


def contraction_matrix(legs: Sequence[Leg], line: PairingLine | None = None) -> np.ndarray:
    """M[i, j] = <i j> for i < j (leg i to the left of leg j)."""
    z, w = (line or PairingLine()).nodes()
    a = np.array([_sample_kernel(l.annihilate, z) for l in legs])
    c = np.array([_sample_kernel(l.create, z) for l in legs])
    return 0.5 * (a * w[None, :]) @ c.T


def perfect_matchings(n: int, allowed: Callable[[int, int], bool] | None = None):
    """Perfect matchings of range(n) as sorted pair tuples, in lexicographic order."""
    if n % 2:
        return

    def rec(rest):
        if not rest:
            yield ()
            return
        i = rest[0]
        for pos in range(1, len(rest)):
            j = rest[pos]
            if allowed is not None and not allowed(i, j):
                continue
            for tail in rec(rest[1:pos] + rest[pos + 1:]):
                yield ((i, j),) + tail

    yield from rec(tuple(range(n)))


def contraction_terms(ops: Sequence, exclude: Callable[[Leg, Leg], bool] | None = None,
                      line: PairingLine | None = None,
                      conventions: ConventionPackage = CONVENTIONS) -> list[ContractionTerm]:
    legs = expand_legs(ops, conventions)
    if len(legs) % 2:
        return []
    m = contraction_matrix(legs, line)

    def allowed(i, j):
        if legs[i].group == legs[j].group:
            return False
        return not (exclude and exclude(legs[i], legs[j]))

    terms = []
    for pairing in perfect_matchings(len(legs), allowed):
        coeff = complex(np.prod([m[i, j] for i, j in pairing]))
        terms.append(ContractionTerm(pairing, coeff))
    return terms


def npoint(ops: Sequence, exclude=None, line: PairingLine | None = None,
           conventions: ConventionPackage = CONVENTIONS) -> complex:
    """Vacuum expectation of the operator product (leftmost first).

    An odd total number of legs gives zero by definition.  Terms are summed in
    the fixed lexicographic matching order.
    """
    return complex(sum((t.coefficient for t in contraction_terms(ops, exclude, line, conventions)), 0j))


# --------------------------------------------------------------------- KMS

def modular_continued(wave: WedgeWaveFunction, conventions: ConventionPackage = CONVENTIONS) -> WedgeWaveFunction:
    """Wave of A(f) Delta standing at the vacuum on the left: delta^{-1} f."""
    return apply_delta(wave, -1.0, conventions)


def kms_sides(f: Sequence[WedgeWaveFunction], h: SmearedField, split: int, continued: bool = True,
              line: PairingLine | None = None, conventions: ConventionPackage = CONVENTIONS):
    """Both sides of the KMS identity, f = [f_1, ..., f_n], 1 <= split <= n."""
    n = len(f)
    if not 1 <= split <= n:
        raise ValueError("split must satisfy 1 <= l <= n")
    right = [field_op(w) for w in reversed(f[1:split])]            # A(f_l) .. A(f_2)
    middle = [field_op(w) for w in f[split:]] + [h]                  # A(f_{l+1}) .. A(f_n) C(h)
    lhs = npoint(middle + right + [field_op(f[0])], line=line, conventions=conventions)
    first = modular_continued(f[0], conventions) if continued else f[0]
    rhs = npoint([field_op(first)] + middle + right, line=line, conventions=conventions)
    return lhs, rhs


def kms_residual(f, h, split, continued: bool = True, line=None, conventions=CONVENTIONS) -> float:
    lhs, rhs = kms_sides(f, h, split, continued, line, conventions)
    return abs(lhs - rhs)


def boost_kms_residual(f: WedgeWaveFunction, g: WedgeWaveFunction, chis: Sequence[float],
                       line: PairingLine | None = None,
                       conventions: ConventionPackage = CONVENTIONS) -> float:
    """Single-operator KMS along the boost orbit.

    F(chi) = <A(f) A(g_chi)> and G(chi) = <A(g_chi) A(f)> with g_chi the wave of g
    boosted by rapidity chi.  F continued by the full strip width,
    chi -> chi + continuation_sign * (-2 pi i), must equal G(chi).
    """
    step = -conventions.continuation_sign * 2j * np.pi
    worst = 0.0
    for chi in chis:
        chi = complex(chi)
        boosted = WedgeWaveFunction(type(g.value)(lambda z, c=chi: g(z - c), g.value.im_min, g.value.im_max), g.mass)
        continued = WedgeWaveFunction(type(g.value)(lambda z, c=chi + step: g(z - c), g.value.im_min, g.value.im_max), g.mass)
        F = npoint([field_op(f), field_op(continued)], line=line, conventions=conventions)
        G = npoint([field_op(boosted), field_op(f)], line=line, conventions=conventions)
        worst = max(worst, abs(F - G))
    return worst


# ------------------------------------------------------------- formfactors

def free_formfactor(k: int, bra: Sequence, ket: Sequence) -> int:
    """Matrix element of :A^k:(0) between plane-wave states, distinct rapidities.

    Each external particle takes one leg of the composite (plane-wave factor 1
    at x = 0).  Wick ordering forbids self-contractions, so all k legs must be
    used: the value is k! when #bra + #ket = k and zero otherwise, including
    the parity-violating cases.
    """
    if k < 1:
        raise ValueError("composite power must be at least 1")
    m = len(bra) + len(ket)
    if m != k:
        return 0
    out = 1
    for r in range(2, k + 1):
        out *= r
    return out


def _external_with_marked(a: Leg, b: Leg) -> bool:
    ext = ("bra", "ket")
    return a.tag[:3] in ext and b.tag[:3] in ext and (a.tag.endswith("*") or b.tag.endswith("*"))


def crossing_sides(h: SmearedField, bra: Sequence[WedgeWaveFunction], ket: Sequence[WedgeWaveFunction],
                   crossed_index: int = -1, omit_subtraction: bool = False,
                   line: PairingLine | None = None, conventions: ConventionPackage = CONVENTIONS):
    """Uncrossed and crossed smeared matrix elements.

    ``bra`` and ``ket`` list wave functions left to right.  The ket particle
    ``ket[crossed_index]`` moves to the far left of the bra side as the state
    s* phi, whose bra kernel is phi continued to the backward shell.  With
    contractions omitted, the crossed particle is never paired directly with
    another external particle on either side.
    """
    ket = list(ket)
    crossed_index %= len(ket)
    phi = ket[crossed_index]
    rest = ket[:crossed_index] + ket[crossed_index + 1:]
    chi = apply_s_adjoint(phi, conventions)
    exclude = None if omit_subtraction else _external_with_marked

    before = ([Particle(w, "bra") for w in bra] + [h]
              + [Particle(w, "ket", i == crossed_index) for i, w in enumerate(ket)])
    after = ([Particle(chi, "bra", True)] + [Particle(w, "bra") for w in bra] + [h]
             + [Particle(w, "ket") for w in rest])
    return (npoint(before, exclude, line, conventions), npoint(after, exclude, line, conventions))


def crossing_residual(h, bra, ket, crossed_index: int = -1, omit_subtraction: bool = False,
                      line=None, conventions=CONVENTIONS) -> float:
    u, c = crossing_sides(h, bra, ket, crossed_index, omit_subtraction, line, conventions)
    return abs(u - c)


def default_waves(n: int, width: float = 4.0) -> list[WedgeWaveFunction]:
    """Gaussian family with distinct centers used by the suites."""
    centers = [0.35, -0.6, 1.1, -1.4, 0.8, -0.2]
    amps = [1.0, 0.8 - 0.3j, 0.6 + 0.2j, 1.2, 0.9 + 0.1j, 0.7]
    return [gaussian_wave(centers[i % 6], width, amps[i % 6]) for i in range(n)]
