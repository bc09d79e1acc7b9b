import itertools
import random

import numpy as np
import pytest

from crosslab.config import TOLERANCES
from crosslab.errors import DegenerateRapidityError
from crosslab.zf import (ScatteringFunction, Z, Zs, axiom_report, inout_overlap, normal_order,
                         parse_word, random_word, specialize_constant, state_gram,
                         theta_order, vacuum_expectation, wick_oracle)

S_ONE = ScatteringFunction.constant(1)
S_MINUS = ScatteringFunction.constant(-1)

GOLDEN_4 = """\
+1 d(t1,t4) d(t2,t3)
+1 s(t1-t2) d(t1,t3) d(t2,t4)
+1 s(t1-t2) s(t1-t3)^-1 s(t2-t3)^-1 d(t1,t4) Zs(t3) Z(t2)
+1 s(t1-t2) s(t2-t4)^-1 d(t1,t3) Zs(t4) Z(t2)
+1 s(t1-t3)^-1 s(t1-t4)^-1 s(t2-t3)^-1 s(t2-t4)^-1 Zs(t3) Zs(t4) Z(t1) Z(t2)
+1 s(t1-t3)^-1 s(t2-t3)^-1 d(t2,t4) Zs(t3) Z(t1)
+1 s(t1-t4)^-1 d(t2,t3) Zs(t4) Z(t1)
"""


def all_words(max_len):
    for n in range(1, max_len + 1):
        labels = [f"t{i}" for i in range(1, n + 1)]
        for kinds in itertools.product("ac", repeat=n):
            yield tuple(zip(kinds, labels))


def test_mixed_pair():
    nf = normal_order(parse_word("Z(t1) Zs(t2)"))
    # s(t1-t2)^-1 = s(t2-t1) by unitarity
    assert nf.to_text() == "+1 d(t1,t2)\n+1 s(t1-t2)^-1 Zs(t2) Z(t1)\n"


def test_creators_already_normal():
    nf = normal_order([Zs("t1"), Zs("t2")])
    assert nf.to_text() == "+1 Zs(t1) Zs(t2)\n"


def test_four_generator_golden():
    nf = normal_order(parse_word("Z(t1) Z(t2) Zs(t3) Zs(t4)"))
    assert nf.to_text() == GOLDEN_4
    bos = specialize_constant(nf, 1)
    ndelta = sorted(len(t.deltas) for t, _ in bos.terms)
    assert ndelta == [0, 1, 1, 1, 1, 2, 2]


def test_wick_oracle_all_words_up_to_six():
    count = 0
    for w in all_words(6):
        assert specialize_constant(normal_order(w), 1) == wick_oracle(w), w
        count += 1
    assert count == 126


def test_confluence_random_orders():
    rng = random.Random(2024)
    words = [random_word(rng, n) for n in (3, 4, 5, 6, 6, 6)]
    for w in words:
        ref = normal_order(w)
        for seed in range(100):
            assert normal_order(w, random.Random(seed)) == ref


def test_printed_relation_is_not_confluent():
    w = (("a", "t1"), ("a", "t4"), ("a", "t3"), ("c", "t2"))
    forms = {normal_order(w, random.Random(seed), printed=True).to_text() for seed in range(40)}
    assert len(forms) > 1


def test_fermionic_specialisation():
    # s = -1: Z(1)Z*(2) = -Z*(2)Z(1) + delta
    nf = specialize_constant(normal_order(parse_word("Z(t1) Zs(t2)")), -1)
    assert {(t.word, c) for t, c in nf.terms} == {((("c", "t2"), ("a", "t1")), -1), ((), 1)}


def test_parse_word_errors():
    with pytest.raises(ValueError):
        parse_word("Y(t1)")


@pytest.mark.parametrize("a", [0.3, 0.7, 1.2])
def test_axioms_sa(a):
    assert axiom_report(ScatteringFunction.sinh_gordon(a)).passed(TOLERANCES["zf_axioms"])


def test_axioms_constants():
    for s in (S_ONE, S_MINUS):
        r = axiom_report(s)
        assert (r.unitarity, r.crossing, r.modulus) == (0.0, 0.0, 0.0)


def test_axiom_negative_control():
    s = ScatteringFunction(ScatteringFunction.sinh_gordon(0.7).evaluator, "broken")
    shifted = ScatteringFunction(type(s.evaluator)(lambda z: np.exp(0.3j) * s(z)), "phase")
    assert axiom_report(shifted).unitarity > 0.1


def test_theta_order():
    s = ScatteringFunction.sinh_gordon(0.7)
    assert theta_order([0.9, 0.2, -0.3], s) == ((0.9, 0.2, -0.3), 1)
    order, c = theta_order([0.1, 0.5], s)
    assert order == (0.5, 0.1) and c == pytest.approx(s(0.1 - 0.5))
    t1, t2, t3 = 0.1, 0.5, 0.9
    order, c = theta_order([t1, t2, t3], s)
    assert order == (t3, t2, t1)
    assert c == pytest.approx(s(t1 - t2) * s(t1 - t3) * s(t2 - t3), abs=1e-15)
    rng = np.random.default_rng(5)
    for _ in range(20):
        _, c = theta_order(rng.uniform(-3, 3, 5), s)
        assert abs(abs(c) - 1) <= 1e-13
    with pytest.raises(DegenerateRapidityError):
        theta_order([0.2, 0.2], s)


def test_inout_overlap():
    assert inout_overlap([0.3, -0.2], S_ONE) == 1
    assert inout_overlap([0.3, -0.2], S_MINUS) == -1
    s = ScatteringFunction.sinh_gordon(0.7)
    assert inout_overlap([1.5, 0.5], s) == s(1.0)
    assert inout_overlap([0.5, 1.5], s) == s(1.0)
    with pytest.raises(DegenerateRapidityError):
        inout_overlap([1.0, 1.0], s)
    with pytest.raises(ValueError):
        inout_overlap([1.0, 2.0, 3.0], s)


@pytest.mark.parametrize("n", [2, 3])
def test_gram_positive(n):
    s = ScatteringFunction.sinh_gordon(0.7)
    g = state_gram([1.3, 0.2, -0.5, -1.1], n, s)
    assert np.allclose(g, np.eye(len(g)), atol=1e-13)
    assert np.all(np.linalg.eigvalsh(g) > 0)


def test_vacuum_expectation_with_phase():
    # <Z(b) Z(a) Z*(a) Z*(b)> with b > a: only the crossed pairing survives
    s = ScatteringFunction.sinh_gordon(0.7)
    nf = normal_order([Z("b"), Z("a"), Zs("c"), Zs("d")])
    vals = {"a": 0.2, "b": 1.3, "c": 1.3, "d": 0.2}
    # Z(a)Z*(c) with c = b needs a swap, then deltas d(a,d) d(b,c)
    assert vacuum_expectation(nf, s, vals) == pytest.approx(s(vals["c"] - vals["a"]))
