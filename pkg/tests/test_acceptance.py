"""Acceptance criteria 1-11 at their stated tolerances and runtime budgets.

Each test appends one PASS/FAIL line to RESULTS; conftest prints them in the
terminal summary.
"""
import random
import time
from contextlib import contextmanager

import numpy as np

from crosslab import dual, formfactors, freefield, modular, string_tower, zf
from crosslab.cli import main
from crosslab.suites import SUITES

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, budget_s: float):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        RESULTS[number] = f"[{number:2d}] FAIL  {title}: {type(exc).__name__}: {exc}"
        print(RESULTS[number])
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < budget_s
    RESULTS[number] = f"[{number:2d}] {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f} s, budget {budget_s:g} s)"
    print(RESULTS[number])
    assert ok, f"criterion {number} took {elapsed:.2f} s, budget {budget_s} s"


def test_01_critical_dimension():
    with criterion(1, "critical dimension from the level-2 ghost scan", 5):
        rows = {r["d"]: r for r in string_tower.ghost_scan(range(2, 31), N=2, a=1)}
        assert all(rows[d]["n_neg"] == 0 for d in range(2, 27))
        assert all(rows[d]["n_neg"] >= 1 for d in (27, 28, 30))
        # the boundary: the one d where the count of null physical states jumps by an extra unit
        jumps = [d for d in range(3, 31) if rows[d]["n_zero"] - rows[d - 1]["n_zero"] != 1]
        assert jumps == [26, 27]
        assert rows[26]["n_pos"] == 324


def test_02_mass_tower():
    with criterion(2, "mass tower m^2 = -2, 0, 2", 1):
        assert string_tower.mass_tower([0, 1, 2], a=1, alpha_prime=0.5) == [-2, 0, 2]


GRID20 = [(s, t) for s in (-1.2, -1.8, -2.5 + 0.7j, -3.3, -4.1 - 0.4j)
          for t in (-1.5, -2.2 - 0.3j, -2.9, -3.6 + 1.1j)]


def test_03_veneziano():
    with criterion(3, "Veneziano integral, duality and residue polynomials", 30):
        assert len(GRID20) == 20
        rel = max(abs(dual.veneziano_integral(s, t) / dual.veneziano(s, t) - 1) for s, t in GRID20)
        assert rel <= 1e-8, rel
        sym = max(abs(dual.veneziano(s, t) - dual.veneziano(t, s)) for s, t in GRID20)
        assert sym <= 1e-12, sym
        for d in dual.schannel_pole_data(n_max=5, fit_tol=1e-6):
            assert d.degree <= d.n and d.fit_residual <= 1e-6


def test_04_mellin():
    with criterion(4, "Mellin reconstruction of exp(-x) and (1+x)^-2", 10):
        xs = np.linspace(0.1, 5.0, 50)
        for pair in (dual.gamma_pair, dual.beta_pair):
            M, f = pair()
            err = max(abs(dual.mellin_reconstruct(M, x) - f(x)) for x in xs)
            assert err <= 1e-6, (M.label, err)


def test_05_kms():
    with criterion(5, "free-field KMS, n <= 4, k <= 3", 60):
        waves = freefield.default_waves(6)
        worst = 0.0
        for n in range(1, 5):
            for k in range(1, 4):
                h = freefield.composite(waves[5], k)
                for split in range(1, n + 1):
                    worst = max(worst, freefield.kms_residual(waves[:n], h, split))
        assert worst <= 1e-6, worst
        control = freefield.kms_residual(waves[:2], freefield.composite(waves[5], 2), 1, continued=False)
        assert control > 1e-2, control


def test_06_crossing():
    with criterion(6, "free formfactor crossing with contractions omitted", 60):
        w = freefield.default_waves(6)
        h = freefield.composite(w[5], 2)
        family = [([w[2]], [w[0]], -1), ([], [w[1], w[0]], -1),
                  ([w[3]], [w[2], w[1], w[0]], -1), ([w[3]], [w[2], w[1], w[0]], 1)]
        worst = max(freefield.crossing_residual(h, bra, ket, i) for bra, ket, i in family)
        assert worst <= 1e-8, worst
        control = freefield.crossing_residual(h, [w[3]], [w[2], w[1], w[0]], omit_subtraction=True)
        assert control > 1e-3, control


def test_07_modular():
    with criterion(7, "one-particle Tomita relations on the Gaussian family", 10):
        family = [modular.gaussian_wave(0.0, 1.0), modular.gaussian_wave(0.3, 2.0),
                  modular.gaussian_wave(-1.1, 0.7, 0.5 - 0.2j), modular.gaussian_wave(0.4 + 0.6j, 1.5)]
        for psi in family:
            assert modular.s_squared_residual(psi) <= 1e-10
            assert modular.proto_crossing_residual(psi) <= 1e-10
            assert modular.j_delta_j_residual(psi) <= 1e-10


def test_08_zf_oracle():
    with criterion(8, "ZF normal ordering vs Wick enumerator, confluence", 30):
        from itertools import product
        count = 0
        for n in range(1, 7):
            labels = [f"t{i}" for i in range(1, n + 1)]
            for kinds in product("ac", repeat=n):
                w = tuple(zip(kinds, labels))
                assert zf.specialize_constant(zf.normal_order(w), 1) == zf.wick_oracle(w), w
                count += 1
        assert count == 126
        rng = random.Random(7)
        for length in (4, 5, 6, 6):
            w = zf.random_word(rng, length)
            ref = zf.normal_order(w)
            assert all(zf.normal_order(w, random.Random(seed)) == ref for seed in range(100))


def test_09_scattering_axioms():
    with criterion(9, "unitarity and crossing of s_a on the strip grid", 5):
        for a in (0.3, 0.7, 1.2):
            rep = zf.axiom_report(zf.ScatteringFunction.sinh_gordon(a))
            assert rep.unitarity <= 1e-12 and rep.crossing <= 1e-12, rep


def test_10_minimal_formfactor():
    with criterion(10, "minimal formfactor for s = 1, -1, s_0.7", 60):
        for s in (zf.ScatteringFunction.constant(1), zf.ScatteringFunction.constant(-1),
                  zf.ScatteringFunction.sinh_gordon(0.7)):
            rep = formfactors.minimal_report(s)
            assert rep["watson"] <= 1e-6 and rep["crossing"] <= 1e-6, (s.label, rep)
            if "sinh_ratio" in rep:
                assert rep["sinh_ratio"] <= 1e-4


def test_11_determinism(tmp_path):
    with criterion(11, "byte-identical report files for repeated runs of every suite", 120):
        for name in SUITES:
            for fmt in ("json", "csv"):
                a, b = tmp_path / f"{name}-1.{fmt}", tmp_path / f"{name}-2.{fmt}"
                assert main([name, "--format", fmt, "--out", str(a), "--quiet"]) == 0
                assert main([name, "--format", fmt, "--out", str(b), "--quiet"]) == 0
                assert a.read_bytes() == b.read_bytes(), (name, fmt)
