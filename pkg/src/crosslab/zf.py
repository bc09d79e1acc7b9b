"""Zamolodchikov-Faddeev algebra with a formal scattering function.

Generators are Z(x) (annihilator, kind "a") and Z*(x) (creator, kind "c")
with formal rapidity labels.  Exchange relations used for rewriting:

    Z(x) Z(y)   = s(x - y) Z(y) Z(x)
    Z*(x) Z*(y) = s(x - y) Z*(y) Z*(x)
    Z(x) Z*(y)  = s(y - x) Z*(y) Z(x) + delta(x - y)

The canonical normal form lists creators, then annihilators, each block
sorted by label.  s-factors are kept as integer exponents on ordered label
pairs: with unitarity s(x)s(-x) = 1, s(y - x) is stored as s(x - y)^-1 for
x < y, and s(0)^2 = 1.  A delta identifies its two labels, so factors inside
a delta term are rewritten in terms of the smaller label.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import FORMFACTOR_GRID, TOLERANCES
from .errors import DegenerateRapidityError
from .numerics import ComplexGrid, StripFunction

ZERO = "0"


# ------------------------------------------------------ scattering functions

@dataclass(frozen=True)
class ScatteringFunction:
    evaluator: StripFunction
    family: str
    params: tuple = ()

    def __call__(self, theta):
        return self.evaluator(theta)

    @classmethod
    def constant(cls, value: complex) -> "ScatteringFunction":
        c = complex(value)
        return cls(StripFunction(lambda z: np.full(np.shape(z), c, dtype=complex), label=f"const({c.real:g})"),
                   "const", (c,))

    @classmethod
    def sinh_gordon(cls, a: float) -> "ScatteringFunction":
        """s_a(theta) = (sinh theta - i sin a) / (sinh theta + i sin a)."""
        sa = np.sin(float(a))

        def s(z):
            sh = np.sinh(z)
            with np.errstate(divide="ignore", invalid="ignore"):
                return (sh - 1j * sa) / (sh + 1j * sa)

        return cls(StripFunction(s, label=f"s_a({a:g})"), "s_a", (float(a),))

    @property
    def label(self) -> str:
        return self.evaluator.label


def strip_lines_grid(grid=FORMFACTOR_GRID) -> ComplexGrid:
    return ComplexGrid.strip(grid["re_min"], grid["re_max"], grid["n_re"], grid["im_lines"],
                             "formfactor strip lines")


@dataclass(frozen=True)
class AxiomReport:
    unitarity: float
    crossing: float
    modulus: float
    label: str = ""

    @property
    def worst(self) -> float:
        return max(self.unitarity, self.crossing, self.modulus)

    def passed(self, tol: float = TOLERANCES["zf_axioms"]) -> bool:
        return self.worst <= tol

    def as_dict(self) -> dict:
        return {"unitarity": self.unitarity, "crossing": self.crossing, "modulus": self.modulus}


def axiom_report(s: ScatteringFunction, grid: ComplexGrid | None = None) -> AxiomReport:
    """Unitarity and crossing on every grid point, |s| = 1 on the real ones."""
    z = (grid or strip_lines_grid()).points
    unit = np.max(np.abs(s(z) * s(-z) - 1.0))
    cross = np.max(np.abs(s(z) - s(1j * np.pi - z)))
    real = z[np.abs(z.imag) < 1e-15]
    mod = np.max(np.abs(np.abs(s(real)) - 1.0)) if real.size else 0.0
    return AxiomReport(float(unit), float(cross), float(mod), s.label)


# --------------------------------------------------------------- words

Generator = tuple[str, str]   # ("a" | "c", label)


def Z(label) -> Generator:
    return ("a", str(label))


def Zs(label) -> Generator:
    return ("c", str(label))


def parse_word(text: str) -> tuple[Generator, ...]:
    """'Z(t1) Zs(t2)' -> ((a, t1), (c, t2))."""
    out = []
    for tok in text.replace(")", ") ").split():
        head, _, rest = tok.partition("(")
        label = rest.rstrip(")")
        if head in ("Z", "Z*") and label:
            out.append(("a", label))
        elif head in ("Zs", "Z+") and label:
            out.append(("c", label))
        else:
            raise ValueError(f"cannot parse generator {tok!r}")
    return tuple(out)


def _label_key(label: str):
    # numeric-looking labels sort numerically, others lexicographically
    try:
        return (0, float(label), label)
    except ValueError:
        return (1, 0.0, label)


def _lt(x: str, y: str) -> bool:
    return _label_key(x) < _label_key(y)


@dataclass(frozen=True)
class Term:
    word: tuple[Generator, ...]
    sfactors: tuple[tuple[tuple[str, str], int], ...] = ()
    deltas: tuple[tuple[str, str], ...] = ()

    def is_canonical(self) -> bool:
        return _first_rewrite(self.word) is None


def _first_rewrite(word) -> int | None:
    for pos in _rewrite_positions(word):
        return pos
    return None


def _rewrite_positions(word):
    for i in range(len(word) - 1):
        (k1, x), (k2, y) = word[i], word[i + 1]
        if k1 == "a" and k2 == "c":
            yield i
        elif k1 == k2 and _lt(y, x):
            yield i


def _add_s(factors: dict, x: str, y: str, power: int = 1) -> None:
    """Multiply by s(x - y)^power."""
    if x == y:
        key, e = (ZERO, ZERO), power
    elif _lt(x, y):
        key, e = (x, y), power
    else:
        key, e = (y, x), -power
    new = factors.get(key, 0) + e
    if key == (ZERO, ZERO):
        new %= 2
    if new:
        factors[key] = new
    else:
        factors.pop(key, None)


def _merge(factors: dict, keep: str, drop: str) -> dict:
    out: dict = {}
    for (x, y), e in factors.items():
        if (x, y) == (ZERO, ZERO):
            _add_s(out, ZERO, ZERO, e)
            continue
        x2 = keep if x == drop else x
        y2 = keep if y == drop else y
        _add_s(out, x2, y2, e)
    return out


def _apply(term: Term, pos: int, printed: bool) -> list[Term]:
    word = term.word
    (k1, x), (k2, y) = word[pos], word[pos + 1]
    swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2:]
    factors = dict(term.sfactors)
    if k1 == k2:
        _add_s(factors, x, y)
        return [Term(swapped, tuple(sorted(factors.items())), term.deltas)]
    # annihilator left of creator
    if printed:
        _add_s(factors, x, y)
    else:
        _add_s(factors, y, x)
    out = [Term(swapped, tuple(sorted(factors.items())), term.deltas)]
    keep, drop = (x, y) if _lt(x, y) or x == y else (y, x)
    merged = _merge(dict(term.sfactors), keep, drop)
    rest = tuple((k, keep if lab == drop else lab) for k, lab in word[:pos] + word[pos + 2:])
    deltas = tuple(sorted(term.deltas + ((keep, drop),)))
    out.append(Term(rest, tuple(sorted(merged.items())), deltas))
    return out


@dataclass(frozen=True)
class NormalForm:
    terms: tuple[tuple[Term, int], ...]

    def as_dict(self) -> dict:
        return dict(self.terms)

    def to_text(self) -> str:
        return "\n".join(f"{c:+d} {format_term(t)}" for t, c in self.terms) + "\n"

    def __len__(self):
        return len(self.terms)


def format_term(t: Term) -> str:
    parts = []
    for (x, y), e in t.sfactors:
        base = "s(0)" if (x, y) == (ZERO, ZERO) else f"s({x}-{y})"
        parts.append(base if e == 1 else f"{base}^{e}")
    parts += [f"d({x},{y})" for x, y in t.deltas]
    parts += [("Zs" if k == "c" else "Z") + f"({lab})" for k, lab in t.word]
    return " ".join(parts) if parts else "1"


def _canonical(acc: dict) -> NormalForm:
    items = [(t, c) for t, c in acc.items() if c]
    items.sort(key=lambda tc: format_term(tc[0]))
    return NormalForm(tuple(items))


def normal_order(word: Sequence[Generator], rng: random.Random | None = None,
                 printed: bool = False) -> NormalForm:
    """Rewrite to canonical normal form with formal s.

    ``rng`` picks which pending term and which rewrite position to use next;
    without it the leftmost rewrite of the first pending term is taken.
    ``printed=True`` uses s(x - y) instead of s(y - x) in the mixed relation.
    """
    pending: list[tuple[Term, int]] = [(Term(tuple(word)), 1)]
    done: dict[Term, int] = {}
    while pending:
        idx = rng.randrange(len(pending)) if rng else 0
        term, coeff = pending.pop(idx)
        positions = list(_rewrite_positions(term.word))
        if not positions:
            done[term] = done.get(term, 0) + coeff
            continue
        pos = rng.choice(positions) if rng else positions[0]
        pending.extend((t, coeff) for t in _apply(term, pos, printed))
    return _canonical(done)


def specialize_constant(nf: NormalForm, value: int) -> NormalForm:
    """Set s identically equal to ``value`` (+1 or -1) and collect terms."""
    acc: dict[Term, int] = {}
    for t, c in nf.terms:
        total = sum(e for _, e in t.sfactors)
        sign = value ** (total % 2) if value in (1, -1) else None
        if sign is None:
            raise ValueError("only s = +1 or -1 can be specialised exactly")
        key = Term(t.word, (), t.deltas)
        acc[key] = acc.get(key, 0) + c * sign
    return _canonical(acc)


def evaluate_sfactors(t: Term, s: Callable, values: dict) -> complex:
    out = 1.0 + 0j
    for (x, y), e in t.sfactors:
        arg = 0.0 if (x, y) == (ZERO, ZERO) else values[x] - values[y]
        out *= complex(s(np.asarray(arg, dtype=complex))) ** e
    return out


def vacuum_expectation(nf: NormalForm, s: Callable, values: dict, atol: float = 1e-12) -> complex:
    """<Omega| word |Omega> with deltas realised as Kronecker deltas on test points."""
    total = 0j
    for t, c in nf.terms:
        if t.word:
            continue
        if all(abs(values[x] - values[y]) <= atol for x, y in t.deltas):
            total += c * evaluate_sfactors(t, s, values)
    return total


def wick_oracle(word: Sequence[Generator]) -> NormalForm:
    """Bosonic (s = 1) normal ordering by brute-force enumeration of contractions.

    Every set of disjoint pairs (annihilator at i, creator at j > i) contributes
    the product of its deltas times the sorted remaining monomial.
    """
    word = tuple(word)
    candidates = [(i, j) for i, j in combinations(range(len(word)), 2)
                  if word[i][0] == "a" and word[j][0] == "c"]
    acc: dict[Term, int] = {}
    for r in range(len(candidates) + 1):
        for chosen in combinations(candidates, r):
            used = [p for pair in chosen for p in pair]
            if len(set(used)) != len(used):
                continue
            deltas = []
            rename = {}
            for i, j in chosen:
                x, y = word[i][1], word[j][1]
                keep, drop = (x, y) if _lt(x, y) or x == y else (y, x)
                deltas.append((keep, drop))
                rename[drop] = keep
            rest = [(k, rename.get(lab, lab)) for p, (k, lab) in enumerate(word) if p not in used]
            creators = sorted((g for g in rest if g[0] == "c"), key=lambda g: _label_key(g[1]))
            annihilators = sorted((g for g in rest if g[0] == "a"), key=lambda g: _label_key(g[1]))
            key = Term(tuple(creators + annihilators), (), tuple(sorted(deltas)))
            acc[key] = acc.get(key, 0) + 1
    return _canonical(acc)


def random_word(rng: random.Random, length: int, labels: Iterable[str] | None = None) -> tuple[Generator, ...]:
    labels = list(labels or [f"t{i}" for i in range(1, length + 1)])
    rng.shuffle(labels)
    return tuple((rng.choice("ac"), labels[i]) for i in range(length))


# ---------------------------------------------------------- states

def theta_order(rapidities: Sequence[float], s: Callable):
    """Bubble-sort Z*(t1)...Z*(tn) into descending order.

    Each adjacent swap Z*(x)Z*(y) -> s(x - y) Z*(y)Z*(x) contributes one factor.
    """
    th = [float(t) for t in rapidities]
    if len(set(th)) != len(th):
        raise DegenerateRapidityError("theta ordering needs distinct rapidities")
    coeff = 1.0 + 0j
    changed = True
    while changed:
        changed = False
        for i in range(len(th) - 1):
            if th[i] < th[i + 1]:
                coeff *= complex(s(np.asarray(th[i] - th[i + 1], dtype=complex)))
                th[i], th[i + 1] = th[i + 1], th[i]
                changed = True
    return tuple(th), coeff


def inout_overlap(rapidities: Sequence[float], s: Callable) -> complex:
    """Coefficient between the two-particle in- and out-vectors: s(|t1 - t2|)."""
    if len(rapidities) != 2:
        raise ValueError("the in/out relation is implemented for two particles")
    t1, t2 = (float(t) for t in rapidities)
    if t1 == t2:
        raise DegenerateRapidityError("in/out overlap needs distinct rapidities")
    return complex(s(np.asarray(abs(t1 - t2), dtype=complex)))


def state_gram(points: Sequence[float], n: int, s: Callable) -> np.ndarray:
    """Gram matrix of theta-ordered n-particle states built from test points."""
    states = [tuple(sorted(c, reverse=True)) for c in combinations(points, n)]
    gram = np.zeros((len(states), len(states)), dtype=complex)
    for i, bra in enumerate(states):
        for j, ket in enumerate(states):
            # <Z*(b1)..Z*(bn) Omega, Z*(k1)..Z*(kn) Omega> = <Z(bn)..Z(b1) Z*(k1)..Z*(kn)>
            word = tuple(("a", f"b{r}") for r in reversed(range(n))) + tuple(("c", f"k{r}") for r in range(n))
            values = {f"b{r}": bra[r] for r in range(n)} | {f"k{r}": ket[r] for r in range(n)}
            gram[i, j] = vacuum_expectation(_cached_normal_form(word), s, values)
    return gram


_NF_CACHE: dict = {}


def _cached_normal_form(word):
    if word not in _NF_CACHE:
        _NF_CACHE[word] = normal_order(word)
    return _NF_CACHE[word]
