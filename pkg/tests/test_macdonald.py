from __future__ import annotations

import itertools

import pytest
import sympy

from cnqkz import macdonald, weyl
from cnqkz.macdonald import SymLaurent
from cnqkz.ring import RatFunc, Ring, to_sympy

v = sympy.Symbol("v", positive=True)
t = sympy.Symbol("t")


def _sym(f):
    """sympy form in v (= sqrt q) and t."""
    q = sympy.Symbol("q")
    expr = to_sympy(f.num) / to_sympy(f.den) if isinstance(f, RatFunc) else to_sympy(f)
    return expr.subs(q, v ** 2)


def oracle_macdonald(n: int, lam: int):
    """Solve E P = c P by brute force in sympy: P monic on m_(lam,0..), unknown
    coefficients on every dominated orbit sum, c unknown."""
    ys = sympy.symbols(f"y1:{n + 1}")
    top = (lam,) + (0,) * (n - 1)

    def m(mu):
        return sum(sympy.Mul(*[y ** e for y, e in zip(ys, nu)]) for nu in weyl.orbit(mu))

    lower = [mu for mu in itertools.product(range(lam, -1, -1), repeat=n)
             if list(mu) == sorted(mu, reverse=True) and mu != top and weyl.dominance_less(mu, top)]
    cs = sympy.symbols(f"a0:{len(lower)}")
    P = m(top) + sum(c * m(mu) for c, mu in zip(cs, lower))

    def E(f):
        out = 0
        for a in itertools.product((1, -1), repeat=n):
            coef = 1
            for i in range(n):
                for j in range(i + 1, n):
                    z = ys[i] ** a[i] * ys[j] ** a[j]
                    coef *= (1 - t * z) / (1 - z)
                z = ys[i] ** (2 * a[i])
                coef *= (1 - t * z) / (1 - z)
            out += coef * f.subs({y: v ** ai * y for y, ai in zip(ys, a)}, simultaneous=True)
        return out

    lead = sympy.Symbol("c")
    expr = sympy.together(E(P) - lead * P)
    num = sympy.Poly(sympy.numer(expr), *ys)
    sol = sympy.solve(num.coeffs(), list(cs) + [lead], dict=True)
    assert len(sol) == 1
    return sol[0], dict(zip(lower, cs)), lead


@pytest.mark.parametrize("n,lam", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_against_brute_force_eigen_solve(n, lam):
    sol, lower, lead = oracle_macdonald(n, lam)
    P = macdonald.macdonald_onerow(n, lam)
    mb = macdonald.m_basis(P)
    for mu, c in lower.items():
        got = _sym(mb.get(mu, RatFunc.constant(n, 0)))
        assert sympy.simplify(got - sol[c]) == 0, mu
    assert sympy.simplify(_sym(macdonald.eigenvalue_c((lam,) + (0,) * (n - 1), n)) - sol[lead]) == 0


def test_rogers_polynomial_n1_lambda2():
    R = Ring(1)
    P = macdonald.macdonald_onerow(1, 2)
    mb = macdonald.m_basis(P)
    assert mb[(2,)] == 1
    assert mb[(0,)] == RatFunc((1 + R.q) * (1 - R.t), 1 - R.q * R.t)


def test_n2_lambda2_coefficient():
    R = Ring(2)
    mb = macdonald.m_basis(macdonald.macdonald_onerow(2, 2))
    assert mb[(1, 1)] == RatFunc((1 + R.q) * (1 - R.t), 1 - R.q * R.t)
    assert mb[(1, 1)] != RatFunc(1 + R.q, 1 + R.t)


EIGEN_RANGE = [(1, l) for l in range(1, 6)] + [(2, l) for l in range(1, 5)] + [(3, l) for l in range(1, 4)]


@pytest.mark.parametrize("n,lam", EIGEN_RANGE)
def test_eigen_and_triangularity(n, lam):
    assert macdonald.verify_eigen(n, lam).passed
    assert macdonald.verify_triangularity(n, lam).passed


@pytest.mark.parametrize("n,lam", [(1, 2), (2, 2), (3, 1)])
def test_self_tests_fail(n, lam):
    assert not macdonald.verify_eigen(n, lam, mutate=True).passed
    assert not macdonald.verify_triangularity(n, lam, mutate=True).passed


def test_fast_route_matches_termwise_definition():
    n = 2
    R = Ring(n)
    f = R.y(1) + R.y(1, -1) + R.t * R.y(2, 2)
    slow = RatFunc.constant(n, 0)
    for signs in itertools.product((1, -1), repeat=n):
        slow = slow + macdonald._e_coefficient(signs, n) * macdonald.half_shift(RatFunc(f), signs)
    assert macdonald.apply_E(f, n) == slow
    # a y-dependent denominator takes the termwise route
    g = RatFunc(f, 1 - R.t * R.y(1))
    assert macdonald.apply_E(g, n) != macdonald.apply_E(f, n)


def test_constant_eigenvalue_forms():
    for n in (1, 2, 3):
        R = Ring(n)
        c0 = macdonald.eigenvalue_c((0,) * n, n)
        prod = R.one
        for j in range(1, n + 1):
            prod = prod * (1 + R.t ** j)
        assert c0 == prod
        rel = macdonald.eigenvalue_sum_form((0,) * n, n) * R.mono(u=n * (n + 1) // 2)
        assert rel == c0


def test_sym_laurent_guards():
    R = Ring(2)
    with pytest.raises(macdonald.NotInvariantError):
        SymLaurent.make(R.y(1), invariant=True)
    with pytest.raises(ValueError):
        SymLaurent.make(R.x)
    with pytest.raises(macdonald.NotInvariantError):
        macdonald.m_basis(SymLaurent.make(R.y(1) + R.y(2), check=False, invariant=True))


def test_compositions_and_q_multinomial():
    comps = list(macdonald.compositions(2, 3))
    assert len(comps) == 6 and len(set(comps)) == 6
    R = Ring(1)
    # [2; 1,1]_q = (q;q)_2 / (q;q)_1^2 = 1 + q
    assert macdonald.q_multinomial((1, 1), 1) == 1 + R.q


def test_desk_guard(monkeypatch):
    monkeypatch.delenv("CNQKZ_MAX_RANK", raising=False)
    with pytest.raises(ValueError):
        macdonald.verify_eigen(4, 1)
    with pytest.raises(ValueError):
        macdonald.macdonald_onerow(0, 1)
