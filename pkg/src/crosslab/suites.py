"""Suite configuration and the registry of verification suites."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import dual, formfactors, freefield, modular, string_tower, zf
from .config import TOLERANCES, ConventionPackage
from .errors import ConfigError, UnknownSuiteError
from .reports import AMPLITUDE_HEADER, SIGNATURE_HEADER, CheckRecord, VerificationReport

FORMATS = ("json", "csv")


@dataclass
class SuiteConfig:
    suite: str
    grids: dict = field(default_factory=dict)        # name -> list of numbers
    tolerances: dict = field(default_factory=dict)   # overrides of TOLERANCES
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, TOLERANCES[name]))

    def param(self, name: str):
        return self.params.get(name, SUITES[self.suite].params[name])

    def grid(self, name: str) -> list:
        return list(self.grids.get(name, SUITES[self.suite].grids[name]))

    def conventions(self) -> ConventionPackage:
        b = int(self.params.get("boost_sign", -1))
        return ConventionPackage(boost_sign=b, continuation_sign=-b)

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES:
            raise UnknownSuiteError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        spec = SUITES[self.suite]
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        for name, value in self.tolerances.items():
            if name not in TOLERANCES:
                raise ConfigError(f"unknown tolerance {name!r}")
            if not (isinstance(value, (int, float)) and value > 0 and np.isfinite(value)):
                raise ConfigError(f"tolerance {name} must be positive, got {value!r}")
        for name, values in self.grids.items():
            if name not in spec.grids:
                raise ConfigError(f"suite {self.suite!r} has no grid {name!r}")
            if len(values) == 0:
                raise ConfigError(f"grid {name!r} is empty")
        for name in self.params:
            if name not in spec.params and name != "boost_sign":
                raise ConfigError(f"suite {self.suite!r} has no parameter {name!r}")
        if self.params.get("boost_sign", -1) not in (-1, 1):
            raise ConfigError("boost_sign must be +1 or -1")
        return self

    def echo(self) -> dict:
        spec = SUITES[self.suite]
        return {"suite": self.suite,
                "grids": {k: self.grid(k) for k in spec.grids},
                "params": {k: self.param(k) for k in spec.params} | (
                    {"boost_sign": self.params["boost_sign"]} if "boost_sign" in self.params else {}),
                "tolerances": {k: self.tol(k) for k in spec.tolerances}}


@dataclass(frozen=True)
class SuiteSpec:
    runner: Callable
    grids: dict
    params: dict
    tolerances: tuple


SUITES: dict[str, SuiteSpec] = {}


def suite(name: str, grids=None, params=None, tolerances=()):
    def deco(fn):
        SUITES[name] = SuiteSpec(fn, dict(grids or {}), dict(params or {}), tuple(tolerances))
        return fn
    return deco


class _Recorder:
    def __init__(self):
        self.records: list[CheckRecord] = []

    def check(self, name: str, tol: float, fn: Callable[[], float], bound: str = "upper"):
        t0 = time.perf_counter()
        value = float(fn())
        self.records.append(CheckRecord(name, value, tol, bound, 1000 * (time.perf_counter() - t0)))
        return value


# ------------------------------------------------------------------ suites

@suite("kms", grids={"chi": [-2.0, -1.0, 0.0, 1.0, 2.0]}, params={"n_max": 4, "k_max": 3},
       tolerances=("kms", "kms_negative", "boost_kms"))
def _kms(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    conv = cfg.conventions()
    waves = freefield.default_waves(6)
    h_wave = waves[5]
    n_max, k_max = int(cfg.param("n_max")), int(cfg.param("k_max"))
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            h = freefield.composite(h_wave, k)
            rec.check(f"kms[n={n},k={k}]", cfg.tol("kms"),
                      lambda: max(freefield.kms_residual(waves[:n], h, l, conventions=conv)
                                  for l in range(1, n + 1)))
    rec.check("kms_uncontinued_control", cfg.tol("kms_negative"),
              lambda: freefield.kms_residual(waves[:2], freefield.composite(h_wave, 2), 1, continued=False,
                                             conventions=conv), bound="lower")
    rec.check("boost_kms", cfg.tol("boost_kms"),
              lambda: freefield.boost_kms_residual(waves[0], waves[1], cfg.grid("chi"), conventions=conv))


@suite("crossing", tolerances=("crossing", "crossing_negative"))
def _crossing(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    conv = cfg.conventions()
    w = freefield.default_waves(6)
    h = freefield.composite(w[5], 2)
    family = [("bra1_ket1", [w[2]], [w[0]], -1), ("ket2", [], [w[1], w[0]], -1),
              ("bra1_ket3", [w[3]], [w[2], w[1], w[0]], -1), ("bra1_ket3_middle", [w[3]], [w[2], w[1], w[0]], 1)]
    for name, bra, ket, idx in family:
        rec.check(f"crossing[{name}]", cfg.tol("crossing"),
                  lambda: freefield.crossing_residual(h, bra, ket, idx, conventions=conv))
    rec.check("crossing_no_subtraction_control", cfg.tol("crossing_negative"),
              lambda: freefield.crossing_residual(h, [w[3]], [w[2], w[1], w[0]], omit_subtraction=True,
                                                  conventions=conv), bound="lower")
    raw = freefield.composite(w[5], 2, wick_ordered=False)
    rec.check("crossing_unordered_no_subtraction_control", cfg.tol("crossing_negative"),
              lambda: freefield.crossing_residual(raw, [], [w[1], w[0]], omit_subtraction=True,
                                                  conventions=conv), bound="lower")


_GAUSSIANS = [(0.0, 1.0, 1.0), (0.3, 2.0, 1.0), (-1.1, 0.7, 0.5 - 0.2j), (0.4 + 0.6j, 1.5, 1.0)]


@suite("modular", params={"n_re": 201, "n_im": 41},
       tolerances=("s_squared", "proto_crossing", "j_delta_j", "group_law"))
def _modular(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    conv = cfg.conventions()
    strip = modular.strip_grid(int(cfg.param("n_re")), int(cfg.param("n_im")))
    line = modular.real_grid(int(cfg.param("n_re")))
    for c, width, amp in _GAUSSIANS:
        psi = modular.gaussian_wave(c, width, amp)
        tag = f"gauss[c={c},w={width}]"
        rec.check(f"s_squared{tag}", cfg.tol("s_squared"), lambda: modular.s_squared_residual(psi, strip))
        rec.check(f"proto_crossing{tag}", cfg.tol("proto_crossing"),
                  lambda: modular.proto_crossing_residual(psi, line, conv))
        rec.check(f"j_delta_j{tag}", cfg.tol("j_delta_j"), lambda: modular.j_delta_j_residual(psi, line))
        rec.check(f"group_law{tag}", cfg.tol("group_law"),
                  lambda: modular.group_law_residual(psi, 0.13, -0.41, strip))


def _all_words(max_len: int):
    for n in range(1, max_len + 1):
        labels = [f"t{i}" for i in range(1, n + 1)]
        for kinds in itertools.product("ac", repeat=n):
            yield tuple(zip(kinds, labels))


@suite("zf", grids={"a": [0.3, 0.7, 1.2]}, params={"max_length": 6, "orders": 100, "seed": 2024},
       tolerances=("zf_axioms",))
def _zf(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    max_len = int(cfg.param("max_length"))
    words = list(_all_words(max_len))

    def mismatches():
        return sum(zf.specialize_constant(zf.normal_order(w), 1) != zf.wick_oracle(w) for w in words)

    rec.check(f"wick_oracle_mismatches[{len(words)} words]", 0.0, mismatches)
    rng = random.Random(int(cfg.param("seed")))
    sample = [zf.random_word(rng, n) for n in (3, 4, 5, 6, 6, 6)]
    orders = int(cfg.param("orders"))

    def non_confluent():
        bad = 0
        for w in sample:
            ref = zf.normal_order(w)
            bad += any(zf.normal_order(w, random.Random(seed)) != ref for seed in range(orders))
        return bad

    rec.check(f"confluence_failures[{orders} orders]", 0.0, non_confluent)
    for a in cfg.grid("a"):
        rep = zf.axiom_report(zf.ScatteringFunction.sinh_gordon(float(a)))
        rec.check(f"unitarity[s_{a}]", cfg.tol("zf_axioms"), lambda: rep.unitarity)
        rec.check(f"crossing[s_{a}]", cfg.tol("zf_axioms"), lambda: rep.crossing)
        rec.check(f"modulus[s_{a}]", cfg.tol("zf_axioms"), lambda: rep.modulus)


@suite("formfactor", grids={"a": [0.7]}, tolerances=("watson", "ff_crossing", "sinh_ratio"))
def _formfactor(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    family = [("1", zf.ScatteringFunction.constant(1)), ("-1", zf.ScatteringFunction.constant(-1))]
    family += [(f"s_{a}", zf.ScatteringFunction.sinh_gordon(float(a))) for a in cfg.grid("a")]
    for name, s in family:
        rep = formfactors.minimal_report(s)
        rec.check(f"watson[{name}]", cfg.tol("watson"), lambda: rep["watson"])
        rec.check(f"crossing_symmetry[{name}]", cfg.tol("ff_crossing"), lambda: rep["crossing"])
        rec.check(f"normalisation[{name}]", cfg.tol("watson"), lambda: rep["normalisation"])
        if "sinh_ratio" in rep:
            rec.check(f"sinh_ratio[{name}]", cfg.tol("sinh_ratio"), lambda: rep["sinh_ratio"])


def _fit_residual(t, r, degree: int) -> float:
    """Relative max deviation of the degree-``degree`` least-squares polynomial fit."""
    t, r = np.asarray(t, dtype=float), np.asarray(r, dtype=complex)
    fit = np.polyval(np.polyfit(t, r.real, degree), t) + 1j * np.polyval(np.polyfit(t, r.imag, degree), t)
    return float(np.max(np.abs(fit - r)) / max(1.0, float(np.max(np.abs(r)))))


@suite("veneziano",
       grids={"s": [-1.2, -1.8, complex(-2.5, 0.7), -3.3, complex(-4.1, -0.4)],
              "t": [-1.5, complex(-2.2, -0.3), -2.9, complex(-3.6, 1.1)]},
       params={"n_max": 5, "pole_terms": 40, "intercept": 1.0, "slope": 1.0},
       tolerances=("veneziano_integral", "duality", "residue_fit"))
def _veneziano(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    traj = dual.Trajectory(float(cfg.param("intercept")), float(cfg.param("slope")))
    pts = [(s, t) for s in cfg.grid("s") for t in cfg.grid("t")]
    closed = [dual.veneziano(s, t, traj) for s, t in pts]
    rec.check(f"integral_vs_closed_form[{len(pts)} points]", cfg.tol("veneziano_integral"),
              lambda: max(abs(dual.veneziano_integral(s, t, traj) / a - 1) for (s, t), a in zip(pts, closed)))
    rec.check("s_t_symmetry", cfg.tol("duality"),
              lambda: max(abs(dual.veneziano(s, t, traj) - dual.veneziano(t, s, traj)) / max(1.0, abs(a))
                          for (s, t), a in zip(pts, closed)))
    N = int(cfg.param("pole_terms"))
    margin = []
    for s, t in pts:
        r = dual.duality_residual(s, t, traj, N)
        margin.append(r["pole_sum_error"] / r["tail_estimate"])
    rec.check(f"pole_sum_error_over_tail_bound[N={N}]", 1.0, lambda: max(margin))
    for d in dual.schannel_pole_data(traj, int(cfg.param("n_max")), fit_tol=cfg.tol("residue_fit")):
        rec.check(f"residue_degree_excess[n={d.n}]", 0.0, lambda: max(0, d.degree - d.n))
        rec.check(f"residue_fit[n={d.n}]", cfg.tol("residue_fit"),
                  lambda: _fit_residual(d.t_samples, d.residues, d.n))
    tables["primary"] = {"header": list(AMPLITUDE_HEADER),
                         "rows": [[s, t, a.real, a.imag] for (s, t), a in zip(pts, closed)]}


@suite("mellin", grids={"x": list(np.linspace(0.1, 5.0, 40))}, tolerances=("mellin",))
def _mellin(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    xs = [float(x) for x in cfg.grid("x")]
    if min(xs) <= 0:
        raise ConfigError("Mellin grid needs x > 0")
    for name, pair in (("exp", dual.gamma_pair), ("beta", dual.beta_pair)):
        M, f = pair()
        rec.check(f"mellin[{name}]", cfg.tol("mellin"),
                  lambda: max(abs(dual.mellin_reconstruct(M, x) - f(x)) for x in xs))


@suite("string-ghosts", grids={"d": list(range(2, 31)), "levels": [0, 1, 2]},
       params={"N": 2, "a": Fraction(1), "alpha_prime": Fraction(1, 2), "critical": 26})
def _string_ghosts(cfg: SuiteConfig, rec: _Recorder, tables: dict):
    N, a = int(cfg.param("N")), Fraction(cfg.param("a"))
    crit = int(cfg.param("critical"))
    dims = [int(d) for d in cfg.grid("d")]
    if N > 3 or N < 0:
        raise ConfigError("ghost scan supports levels 0..3")
    rows = string_tower.ghost_scan(dims, N, a)
    tables["primary"] = {"header": list(SIGNATURE_HEADER),
                         "rows": [[r[k] for k in SIGNATURE_HEADER] for r in rows]}
    neg = {r["d"]: r["n_neg"] for r in rows}
    rec.check(f"negative_states[d<={crit}]", 0.0, lambda: sum(neg[d] for d in dims if d <= crit))
    rec.check(f"ghost_free_dims[d>{crit}]", 0.0, lambda: sum(neg[d] == 0 for d in dims if d > crit))
    levels = [int(n) for n in cfg.grid("levels")]
    ap = Fraction(cfg.param("alpha_prime"))
    tower = string_tower.mass_tower(levels, a, ap)
    tables["mass_tower"] = {"header": ["N", "m2"], "rows": [[n, m] for n, m in zip(levels, tower)]}
    rec.check("mass_tower_deviation", 0.0,
              lambda: float(max((abs(m - (n - a) / ap) for n, m in zip(levels, tower)), default=0)))


# ------------------------------------------------------------------ runner

def run_suite(config: SuiteConfig) -> VerificationReport:
    config.validate()
    rec = _Recorder()
    tables: dict = {}
    SUITES[config.suite].runner(config, rec, tables)
    return VerificationReport(config.suite, config.echo(), rec.records,
                              config.conventions().fingerprint(), tables)


# ------------------------------------------------------------------ parsing

def parse_number(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except ValueError as exc:
            raise ConfigError(f"bad number {text!r}") from exc
    try:
        return float(text)
    except ValueError:
        pass
    try:
        z = complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad number {text!r}") from exc
    return z.real if z.imag == 0 else z


def parse_grid(spec: str) -> list:
    """'lo:hi:n' (n evenly spaced points), 'lo:hi' (integer range, inclusive) or 'v1,v2,...'."""
    spec = spec.strip()
    if not spec:
        return []
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) == 2:
            lo, hi = (int(parse_number(p)) for p in parts)
            return list(range(lo, hi + 1))
        if len(parts) == 3:
            lo, hi = float(parse_number(parts[0])), float(parse_number(parts[1]))
            n = parse_number(parts[2])
            if not isinstance(n, int) or n < 0:
                raise ConfigError(f"grid point count must be a non-negative integer in {spec!r}")
            return [float(v) for v in np.linspace(lo, hi, n)]
        raise ConfigError(f"bad grid spec {spec!r}")
    return [parse_number(v) for v in spec.split(",") if v.strip()]


def _split_assignment(text: str, what: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"{what} must look like NAME=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def read_config_file(path) -> dict:
    """Flat 'key = value' lines; '#' starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            k, v = _split_assignment(line, "config line")
            out[k] = v
    return out


def build_config(suite_name: str | None, entries: dict | None = None, tol=(), grid=(),
                 out: str | None = None, fmt: str | None = None) -> SuiteConfig:
    """Merge flat config entries with command-line overrides (which win)."""
    entries = dict(entries or {})
    name = suite_name or entries.pop("suite", None)
    entries.pop("suite", None)
    if not name:
        raise ConfigError("no suite given")
    cfg = SuiteConfig(name)
    for k, v in entries.items():
        if k.startswith("tol."):
            cfg.tolerances[k[4:]] = float(parse_number(v))
        elif k.startswith("grid."):
            cfg.grids[k[5:]] = parse_grid(v)
        elif k == "out":
            cfg.out = v
        elif k == "format":
            cfg.format = v
        else:
            cfg.params[k] = parse_number(v)
    for item in tol:
        k, v = _split_assignment(item, "--tol")
        cfg.tolerances[k] = float(parse_number(v))
    for item in grid:
        k, v = _split_assignment(item, "--grid")
        cfg.grids[k] = parse_grid(v)
    if out is not None:
        cfg.out = out
    if fmt is not None:
        cfg.format = fmt
    return cfg.validate()
