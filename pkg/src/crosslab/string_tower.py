"""Bosonic open-string oscillator tower with exact rational linear algebra.

Conventions: [a_m^mu, a_n^nu] = m delta_{m+n,0} eta^{mu nu} with
eta = diag(-1, +1, ..., +1), alpha' = 1/2 so that a_0 = p, and

    L_0 = p.p / 2 + N,   L_m = sum_{j=1}^{m-1} a_{m-j}.a_j / 2 + p.a_m + sum_{k>=1} a_{-k}.a_{k+m}.

Level-N states are monomials in the creation modes acting on |p>, stored as
sorted tuples of ((mode, index), multiplicity).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Occupation = tuple[tuple[tuple[int, int], int], ...]
Vector = dict  # Occupation -> Fraction


@dataclass(frozen=True)
class OscillatorFockState:
    occupations: Occupation
    momentum: tuple[Fraction, ...]

    @property
    def level(self) -> int:
        return sum(n * k for (n, _), k in self.occupations)

    @property
    def dimension(self) -> int:
        return len(self.momentum)

    def __str__(self) -> str:
        ops = " ".join(f"a(-{n},{mu})" + (f"^{k}" if k > 1 else "") for (n, mu), k in self.occupations)
        return (ops + " " if ops else "") + "|p>"


def eta(mu: int) -> int:
    return -1 if mu == 0 else 1


# ------------------------------------------------------------- symbolic

def wave_equation_check(truncation: int = 5):
    """(d_tau^2 - d_sigma^2) of the open-string mode expansion, term by term.

    Returns the simplified sum over the zero mode and all modes 0 < |n| <= truncation;
    each term vanishes identically, so the result is exactly 0.
    """
    import sympy as sp

    tau, sigma, x, p = sp.symbols("tau sigma x p")
    total = sp.diff(x + p * tau, tau, 2) - sp.diff(x + p * tau, sigma, 2)
    for n in range(1, truncation + 1):
        for m in (n, -n):
            a = sp.Symbol(f"a_{m}".replace("-", "m"))
            term = sp.I * a / m * sp.exp(-sp.I * m * tau) * sp.cos(m * sigma)
            total += sp.simplify(sp.diff(term, tau, 2) - sp.diff(term, sigma, 2))
    return sp.simplify(total)


# ------------------------------------------------------------------ basis

def _partitions(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for part in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def level_occupations(N: int, d: int) -> tuple[Occupation, ...]:
    """All occupations of total level N in d dimensions, in canonical order."""
    if N < 0:
        return ()
    out = set()
    for parts in _partitions(N, N):
        # assign Lorentz indices, non-decreasing within equal modes
        def assign(i, prev_mode, prev_mu, acc):
            if i == len(parts):
                occ: dict = {}
                for key in acc:
                    occ[key] = occ.get(key, 0) + 1
                out.add(tuple(sorted(occ.items())))
                return
            n = parts[i]
            start = prev_mu if n == prev_mode else 0
            for mu in range(start, d):
                assign(i + 1, n, mu, acc + [(n, mu)])

        assign(0, None, 0, [])
    return tuple(sorted(out))


def mass_shell_momentum(N: int, d: int, a=1) -> tuple[Fraction, ...]:
    """Rational p with p.p = 2(a - N): p0 = (M+1)/2, p1 = (M-1)/2, M = 2(N - a)."""
    if d < 2:
        raise ValueError("need d >= 2")
    M = 2 * (Fraction(N) - Fraction(a))
    return (Fraction(M + 1, 2), Fraction(M - 1, 2)) + (Fraction(0),) * (d - 2)


def build_level_basis(N: int, d: int, p: Sequence | None = None, a=1) -> list[OscillatorFockState]:
    if not 0 <= N <= 4:
        raise ValueError("levels 0..4 are supported")
    if d < 2:
        raise ValueError("need d >= 2")
    mom = tuple(Fraction(x) for x in p) if p is not None else mass_shell_momentum(N, d, a)
    return [OscillatorFockState(o, mom) for o in level_occupations(N, d)]


def minkowski(p: Sequence, q: Sequence) -> Fraction:
    return sum((eta(mu) * Fraction(p[mu]) * Fraction(q[mu]) for mu in range(len(p))), Fraction(0))


# ------------------------------------------------------------- operators

def _norm_of_occupation(occ: Occupation) -> Fraction:
    out = Fraction(1)
    for (n, mu), k in occ:
        f = n * eta(mu)
        for j in range(1, k + 1):
            out *= f * j
    return out


@dataclass(frozen=True)
class GramMatrix:
    basis: tuple[OscillatorFockState, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i]
                   for i in range(self.size) for j in range(i))


def gram_matrix(N: int, d: int, p: Sequence | None = None) -> GramMatrix:
    """<b_i | b_j> in the monomial basis; diagonal because distinct monomials are orthogonal."""
    basis = tuple(build_level_basis(N, d, p))
    rows = []
    for i, b in enumerate(basis):
        row = [Fraction(0)] * len(basis)
        row[i] = _norm_of_occupation(b.occupations)
        rows.append(tuple(row))
    return GramMatrix(basis, tuple(rows))


def _remove(occ: Occupation, key) -> tuple[int, Occupation] | None:
    d = dict(occ)
    k = d.get(key, 0)
    if not k:
        return None
    if k == 1:
        del d[key]
    else:
        d[key] = k - 1
    return k, tuple(sorted(d.items()))


def _add(occ: Occupation, key) -> Occupation:
    d = dict(occ)
    d[key] = d.get(key, 0) + 1
    return tuple(sorted(d.items()))


def apply_mode(vec: Vector, n: int, mu: int, p: Sequence) -> Vector:
    """a_n^mu on a vector of monomials (n < 0 creates, n > 0 annihilates, a_0 = p)."""
    out: Vector = {}
    for occ, c in vec.items():
        if n == 0:
            if p[mu]:
                out[occ] = out.get(occ, 0) + c * Fraction(p[mu])
        elif n < 0:
            new = _add(occ, (-n, mu))
            out[new] = out.get(new, 0) + c
        else:
            hit = _remove(occ, (n, mu))
            if hit:
                k, new = hit
                out[new] = out.get(new, 0) + c * k * n * eta(mu)
    return {k: v for k, v in out.items() if v}


def _axpy(acc: Vector, vec: Vector, scale) -> None:
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + scale * v


def virasoro(m: int, occ: Occupation, p: Sequence) -> Vector:
    """L_m (m >= 1) on the monomial ``occ``; the result lies at level N - m."""
    if m < 1:
        raise ValueError("only lowering operators L_m, m >= 1")
    d = len(p)
    out: Vector = {}
    start = {occ: Fraction(1)}
    occupied = {key for key, _ in occ}
    for j in range(1, m):
        # a_{m-j} . a_j / 2
        for mu in range(d):
            if (j, mu) in occupied:
                _axpy(out, apply_mode(apply_mode(start, j, mu, p), m - j, mu, p), Fraction(eta(mu), 2))
    for mu in range(d):
        if p[mu] and (m, mu) in occupied:
            _axpy(out, apply_mode(start, m, mu, p), eta(mu) * Fraction(p[mu]))
    for (n, mu) in occupied:
        k = n - m
        if k >= 1:
            _axpy(out, apply_mode(apply_mode(start, n, mu, p), -k, mu, p), eta(mu))
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class VirasoroConstraintSet:
    level: int
    intercept: Fraction
    momentum: tuple[Fraction, ...]
    columns: tuple[Occupation, ...]
    # matrices[m] maps column index -> {target occupation: coefficient}
    matrices: dict


def constraint_set(N: int, d: int, a=1, p: Sequence | None = None) -> VirasoroConstraintSet:
    mom = tuple(Fraction(x) for x in p) if p is not None else mass_shell_momentum(N, d, a)
    cols = level_occupations(N, d)
    mats = {m: {i: virasoro(m, occ, mom) for i, occ in enumerate(cols)} for m in (1, 2)}
    return VirasoroConstraintSet(N, Fraction(a), mom, cols, mats)


# ----------------------------------------------------------- exact algebra

def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact kernel basis of a rational matrix by reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def signature(matrix: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    """(positive, zero, negative) inertia of a symmetric rational matrix by congruence."""
    a = [list(map(Fraction, row)) for row in matrix]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/column i += row/column j makes the diagonal 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if a[i][piv] != 0:
                f = a[i][piv] / d
                for k in active:
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return pos, n - pos - neg, neg


def _components(n_cols: int, col_rows: list[set]) -> list[list[int]]:
    parent = list(range(n_cols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict = {}
    for c, rows in enumerate(col_rows):
        for r in rows:
            if r in owner:
                ra, rb = find(owner[r]), find(c)
                if ra != rb:
                    parent[ra] = rb
            else:
                owner[r] = c
    groups: dict = {}
    for c in range(n_cols):
        groups.setdefault(find(c), []).append(c)
    return [sorted(g) for _, g in sorted(groups.items())]


@dataclass(frozen=True)
class PhysicalSubspace:
    level: int
    dimension: int
    intercept: Fraction
    momentum: tuple[Fraction, ...]
    columns: tuple[Occupation, ...]
    vectors: tuple[tuple[tuple[int, Fraction], ...], ...]   # sparse kernel vectors
    signature: tuple[int, int, int]

    @property
    def size(self) -> int:
        return len(self.vectors)


def physical_subspace(N: int, d: int, a=1, p: Sequence | None = None,
                      constraints: Iterable[int] = (1, 2)) -> PhysicalSubspace:
    """Exact kernel of the stacked L_m constraints at level N on the mass shell.

    Distinct monomials are orthogonal, so the kernel and its Gram matrix split
    over connected components of the constraint graph; each component is
    handled separately.
    """
    if N > 3:
        raise ValueError("physical subspace implemented for N <= 3")
    cs = constraint_set(N, d, a, p)
    ms = tuple(constraints)
    cols = cs.columns
    col_rows = [{(m, t) for m in ms for t in cs.matrices[m][i]} for i in range(len(cols))]
    vectors = []
    pos = zero = neg = 0
    for comp in _components(len(cols), col_rows):
        rows_keys = sorted({r for c in comp for r in col_rows[c]})
        idx = {r: k for k, r in enumerate(rows_keys)}
        rows = [[Fraction(0)] * len(comp) for _ in rows_keys]
        for j, c in enumerate(comp):
            for m in ms:
                for t, v in cs.matrices[m][c].items():
                    rows[idx[(m, t)]][j] = v
        kern = nullspace(rows, len(comp)) if rows else [
            [Fraction(int(i == j)) for i in range(len(comp))] for j in range(len(comp))]
        if not kern:
            continue
        g = [_norm_of_occupation(cols[c]) for c in comp]
        gram = [[sum((u[k] * g[k] * v[k] for k in range(len(comp))), Fraction(0)) for v in kern] for u in kern]
        sp, sz, sn = signature(gram)
        pos, zero, neg = pos + sp, zero + sz, neg + sn
        for v in kern:
            vectors.append(tuple((comp[k], x) for k, x in enumerate(v) if x))
    return PhysicalSubspace(N, d, Fraction(a), cs.momentum, cols, tuple(vectors), (pos, zero, neg))


def ghost_signature(N: int, d: int, a=1) -> tuple[int, int, int]:
    return physical_subspace(N, d, a).signature


def ghost_scan(dims: Iterable[int], N: int = 2, a=1) -> list[dict]:
    out = []
    for d in dims:
        npos, nzero, nneg = ghost_signature(N, d, a)
        out.append({"d": d, "N": N, "a": Fraction(a), "n_pos": npos, "n_zero": nzero, "n_neg": nneg})
    return out


def mass_tower(levels: Iterable[int], a=1, alpha_prime=Fraction(1, 2)) -> list[Fraction]:
    """m^2_N = (N - a) / alpha'."""
    ap = Fraction(alpha_prime)
    if ap <= 0:
        raise ValueError("alpha' must be positive")
    return [(Fraction(N) - Fraction(a)) / ap for N in levels]
