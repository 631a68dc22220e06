from __future__ import annotations

import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from cnqkz import weyl
from cnqkz.ring import Ring
from cnqkz.weyl import SignedPerm


def coxeter_order(i: int, j: int, n: int) -> int:
    if i == j:
        return 1
    if {i, j} == {n - 1, n}:
        return 4
    return 3 if abs(i - j) == 1 else 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_group_order_and_closure(n):
    W = weyl.elements(n)
    assert len(W) == 2 ** n * factorial(n)
    Wset = set(W)
    for a, b in itertools.islice(itertools.product(W, W), 2000):
        assert a * b in Wset


@pytest.mark.parametrize("n", [2, 3, 4])
def test_coxeter_relations(n):
    e = SignedPerm.identity(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            si, sj = weyl.simple_reflection(i, n), weyl.simple_reflection(j, n)
            m = coxeter_order(i, j, n)
            assert (si * sj) ** m == e
            if m > 1:
                assert (si * sj) ** (m - 1) != e


@pytest.mark.parametrize("n", [1, 2, 3])
def test_simple_reflections_generate(n):
    gens = [weyl.simple_reflection(i, n) for i in range(1, n + 1)]
    seen = {SignedPerm.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                g = w * s
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    assert seen == set(weyl.elements(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_root_system(n):
    roots = weyl.roots(n)
    assert len(roots) == 2 * n * n
    assert len(weyl.positive_roots(n)) == n * n
    assert sum(weyl.is_long(a) for a in roots) == 2 * n
    for a in roots:
        s = weyl.reflection(a)
        assert s * s == SignedPerm.identity(n)
        assert s.apply(a) == tuple(-x for x in a)
        assert weyl.pairing(weyl.coroot(a), a) == 2
        for b in roots:
            assert s.apply(b) in roots


@pytest.mark.parametrize("n", [2, 3, 4])
def test_highest_root_dominates(n):
    theta = weyl.highest_root(n)
    assert theta == (2,) + (0,) * (n - 1)
    for a in weyl.positive_roots(n):
        diff = tuple(x - y for x, y in zip(theta, a))
        assert weyl.in_positive_root_cone(diff)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_orbit_matches_brute_force(mu):
    assert weyl.orbit(mu) == weyl.orbit_brute_force(mu)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coset_representatives(n):
    reps = weyl.coset_reps(n)
    assert len(reps) == 2 * n
    images = [w.apply(weyl.unit(1, n)) for w in reps]
    expected = [weyl.unit(i, n) for i in range(1, n + 1)] + \
               [tuple(-x for x in weyl.unit(i, n)) for i in range(n, 0, -1)]
    assert images == expected
    assert len(weyl.stabilizer_eps1(n)) * 2 * n == len(weyl.elements(n))
    for k, w in enumerate(reps, start=1):
        assert weyl.coset_index(w) == k
        for g in weyl.stabilizer_eps1(n):
            assert weyl.coset_index(w * g) == k


def test_dominance_examples():
    assert weyl.dominance_less((1, 1), (2, 0))
    assert weyl.dominance_less((0, 0), (2, 0))
    assert not weyl.dominance_less((2, 0), (1, 1))
    assert not weyl.dominance_less((2, 0), (2, 0))
    assert not weyl.dominance_less((1, 0), (2, 0))  # different lattice class


def test_words_roundtrip():
    w = weyl.parse_word("s1*s2*s1", 2)
    assert w == weyl.word([1, 2, 1], 2)
    assert weyl.parse_word("e", 3) == SignedPerm.identity(3)
    assert weyl.format_word([]) == "e"
    with pytest.raises(ValueError):
        SignedPerm((1, 1))


def test_action_on_functions_is_a_group_action():
    n = 2
    R = Ring(n)
    f = R.frac(R.y(1) * R.y(2, -1) + R.t * R.y(1, 2), 1 - R.t * R.y(2) * R.x)
    for a in weyl.elements(n):
        for b in weyl.elements(n):
            lhs = weyl.act_on_ratfunc(a * b, f)
            rhs = weyl.act_on_ratfunc(a, weyl.act_on_ratfunc(b, f))
            assert lhs == rhs


def test_s0_is_an_involution():
    R = Ring(2)
    f = R.frac(R.y(1) + R.y(2, -1), 1 - R.t * R.y(1) * R.x)
    assert weyl.act_s0(weyl.act_s0(f)) == f
    assert weyl.act_s0(R.frac(R.y(1))) == R.frac(R.q * R.y(1, -1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbit_sums_are_invariant(n):
    m = weyl.orbit_sum((2,) + (0,) * (n - 1), n)
    for i in range(1, n + 1):
        assert weyl.act_on_ratfunc(weyl.simple_reflection(i, n), m) == m
