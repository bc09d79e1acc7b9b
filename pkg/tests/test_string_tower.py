from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

import pytest

from crosslab.string_tower import (apply_mode, build_level_basis, constraint_set, eta, ghost_scan,
                                   ghost_signature, gram_matrix, level_occupations, mass_shell_momentum,
                                   mass_tower, minkowski, nullspace, physical_subspace, signature,
                                   virasoro, wave_equation_check)


# ---------------------------------------------------------------- oracles

def pushed_vev(word):
    """<p| w_1 ... w_k |p> for oscillators (n, mu), n != 0, by commuting annihilators right."""
    if not word:
        return Fraction(1)
    if word[-1][0] > 0 or word[0][0] < 0:
        return Fraction(0)
    i = max(k for k, (n, _) in enumerate(word) if n > 0)
    (m, mu), (n, nu) = word[i], word[i + 1]
    swapped = word[:i] + [word[i + 1], word[i]] + word[i + 2:]
    out = pushed_vev(swapped)
    if m + n == 0 and mu == nu:
        out += m * eta(mu) * pushed_vev(word[:i] + word[i + 2:])
    return out


def creators(occ):
    return [(-n, mu) for (n, mu), k in occ for _ in range(k)]


def oracle_gram(N, d):
    occs = level_occupations(N, d)
    return [[pushed_vev([(-n, mu) for n, mu in reversed(creators(a))] + creators(b)) for b in occs] for a in occs]


def generic_virasoro(m, occ, p):
    """(1/2) sum over all n of eta_{mu mu} a_{m-n}^mu a_n^mu."""
    N = sum(n * k for (n, _), k in occ)
    out = {}
    for n in range(-(N + m), N + m + 1):
        for mu in range(len(p)):
            v = apply_mode(apply_mode({occ: Fraction(1)}, n, mu, p), m - n, mu, p)
            for key, c in v.items():
                out[key] = out.get(key, 0) + Fraction(eta(mu), 2) * c
    return {k: v for k, v in out.items() if v}


# ------------------------------------------------------------------ tests

def test_wave_equation_modes_vanish():
    assert wave_equation_check(0) == 0
    assert wave_equation_check(1) == 0
    assert wave_equation_check(6) == 0


@pytest.mark.parametrize("d", [2, 3, 5, 26])
def test_level_basis_counts(d):
    assert len(build_level_basis(0, d)) == 1
    assert len(build_level_basis(1, d)) == d
    assert len(build_level_basis(2, d)) == d + d * (d + 1) // 2


def test_level_three_count_by_enumeration():
    d = 4
    brute = {((3, a),) for a in range(d)}
    brute |= {tuple(sorted([(2, a), (1, b)])) for a in range(d) for b in range(d)}
    brute |= {tuple(sorted((1, m) for m in mus)) for mus in combinations_with_replacement(range(d), 3)}
    assert len(build_level_basis(3, d)) == len(brute) == d + d * d + comb(d + 2, 3)


def test_level_consistency_and_bounds():
    for st in build_level_basis(3, 3):
        assert st.level == 3 and st.dimension == 3
    with pytest.raises(ValueError):
        build_level_basis(5, 3)
    with pytest.raises(ValueError):
        build_level_basis(1, 1)


def test_gram_level_one_is_eta():
    g = gram_matrix(1, 4)
    assert [list(r) for r in g.entries] == [[eta(i) if i == j else 0 for j in range(4)] for i in range(4)]
    assert gram_matrix(0, 3).entries == ((Fraction(1),),)


def test_gram_level_two_d2_matches_oracle():
    g = gram_matrix(2, 2)
    assert g.size == 5 and g.is_symmetric()
    assert [list(r) for r in g.entries] == oracle_gram(2, 2)


@pytest.mark.parametrize("N,d", [(n, d) for n in (1, 2, 3) for d in (2, 3, 4, 6)])
def test_gram_matches_pushing_oracle(N, d):
    assert [list(r) for r in gram_matrix(N, d).entries] == oracle_gram(N, d)


@pytest.mark.parametrize("N,d", [(1, 3), (2, 3), (2, 5), (3, 3)])
def test_virasoro_matches_generic_sum_and_grades(N, d):
    p = mass_shell_momentum(N, d)
    for occ in level_occupations(N, d):
        for m in (1, 2):
            fast = virasoro(m, occ, p)
            assert fast == generic_virasoro(m, occ, p)
            assert all(sum(n * k for (n, _), k in key) == N - m for key in fast)


def test_mass_shell_momentum():
    for N in range(4):
        p = mass_shell_momentum(N, 5)
        assert minkowski(p, p) == 2 * (1 - N)
        assert all(isinstance(x, Fraction) for x in p)


def test_level_one_physical_states():
    for d in (2, 3, 7, 26):
        ps = physical_subspace(1, d, 1)
        assert ps.size == d - 1
        assert ps.signature == (d - 2, 1, 0)


def test_vacuum_is_tachyonic():
    ps = physical_subspace(0, 4, 1)
    assert ps.size == 1
    assert minkowski(ps.momentum, ps.momentum) == 2  # alpha' m^2 = -p.p/2 = -a
    assert mass_tower([0])[0] == -2


def test_light_cone_count_at_26():
    ps = physical_subspace(2, 26, 1)
    transverse = 24
    light_cone = transverse * (transverse + 1) // 2 + transverse
    assert ps.signature[0] == light_cone == 324
    assert ps.size - ps.signature[1] == light_cone


def test_constraints_monotone():
    for N, d in [(2, 4), (2, 26), (3, 3)]:
        dims = [physical_subspace(N, d, 1, constraints=c).size for c in ((), (1,), (1, 2))]
        assert dims[0] == len(level_occupations(N, d))
        assert dims[0] >= dims[1] >= dims[2]


def test_critical_dimension_scan():
    rows = ghost_scan(list(range(2, 31)))
    neg = {r["d"]: r["n_neg"] for r in rows}
    zero = {r["d"]: r["n_zero"] for r in rows}
    assert all(neg[d] == 0 for d in range(2, 27))
    assert all(neg[d] >= 1 for d in (27, 28, 30))
    # an extra null state appears exactly at d = 26
    assert zero[26] == zero[25] + 2
    assert all(zero[d + 1] == zero[d] + 1 for d in range(2, 25))


def test_level_three_no_ghosts_at_26():
    assert ghost_signature(3, 26)[2] == 0
    assert ghost_signature(3, 27)[2] >= 1


def test_mass_tower_exact():
    assert mass_tower([0, 1, 2]) == [-2, 0, 2]
    m = mass_tower(range(6), a=1, alpha_prime=Fraction(1, 3))
    assert {b - a for a, b in zip(m, m[1:])} == {3}
    with pytest.raises(ValueError):
        mass_tower([0], alpha_prime=0)


def test_exact_helpers():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    ker = nullspace(rows, 3)
    assert len(ker) == 2
    assert all(sum(r[i] * v[i] for i in range(3)) == 0 for r in rows for v in ker)
    assert signature([[0, 1], [1, 0]]) == (1, 0, 1)
    assert signature([[1, 0, 0], [0, 0, 0], [0, 0, -3]]) == (1, 1, 1)
    assert signature([[2, 1], [1, 2]]) == (2, 0, 0)


def test_constraint_set_structure():
    cs = constraint_set(2, 3)
    assert set(cs.matrices) == {1, 2}
    assert len(cs.columns) == 9
