from __future__ import annotations

import warnings

import mpmath
import numpy as np
import pytest

from cnqkz import qintegral as qi
from cnqkz.rmatrix import QKZParams

CONFIGS = [(1, 1), (1, 2), (2, 1), (2, 2)]


def points(n, lam, k=3, seed=0):
    rng = np.random.default_rng(seed)
    return [qi.random_point(n, lam, rng) for _ in range(k)]


def contour_bracket(psi, pt, depth=25, nodes=200):
    """Independent oracle: sum of small-circle contour integrals of the integrand
    around the first ``depth`` poles of every ladder."""
    th = np.linspace(0, 2 * np.pi, nodes, endpoint=False)
    total = 0j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for b in (pt.twisted() if psi.startswith("s0") else pt).bases():
            for m in range(depth):
                x0 = b * pt.q ** m
                r = 0.02 * abs(x0)
                dx = r * np.exp(1j * th)
                total += np.mean([qi.integrand(x0 + d, psi, pt) * d for d in dx])
    return total


@pytest.mark.parametrize("a", [0.5, -0.7 + 0.2j, 3.0, 12.0 - 4j])
def test_qpochhammer_matches_mpmath(a):
    pt = qi.NumericPoint(0.3, 0.7, (1.1,))
    ref = complex(mpmath.qp(a, 0.3))
    assert abs(qi.qpoch_inf(a, pt) - ref) <= 1e-13 * max(1, abs(ref))


def test_qpochhammer_reference_value():
    pt = qi.NumericPoint(0.5, 0.7, (1.1,))
    assert abs(qi.qpoch_inf(0.5, pt) - 0.2887880950866024) < 1e-13


@pytest.mark.parametrize("n,lam,psi", [(1, 1, "one"), (1, 2, "phi_2"), (2, 1, "phi_3"), (2, 2, "s0_phi_1")])
def test_residue_sum_matches_contour_integrals(n, lam, psi):
    pt = points(n, lam, k=1, seed=5)[0]
    got = qi.bracket(psi, pt)
    assert got.converged
    ref = contour_bracket(psi, pt)
    assert abs(got.value - ref) <= 1e-9 * abs(ref)


@pytest.mark.parametrize("n,lam", CONFIGS)
def test_qkz_equations(n, lam):
    for pt in points(n, lam):
        rep = qi.verify_qkz(pt)
        assert rep.passed, [(c.identity, c.residual) for c in rep.checks]
        assert len(rep.checks) == n + 1


def test_qkz_at_real_point():
    pt = qi.NumericPoint(0.25, 0.6, (0.83, 1.27), 2)
    assert qi.verify_qkz(pt).passed


@pytest.mark.parametrize("n,lam", [(1, 1), (2, 1)])
def test_qkz_reversed_products_fail(n, lam):
    pt = points(n, lam, k=1)[0]
    assert not qi.verify_qkz(pt, reverse=True).passed


def test_residuals_shrink_with_tighter_truncation():
    pt = points(2, 1, k=1)[0]
    loose, tight = qi.qkz_truncation_study(pt, loose_tol=1e-5)
    assert tight < loose
    assert tight < 1e-8


@pytest.mark.parametrize("n,lam", CONFIGS)
def test_s0_bracket_relations(n, lam):
    for pt in points(n, lam):
        assert qi.verify_lemma43(pt).passed
    assert not qi.verify_lemma43(pt, QKZParams(n, lam, mutation="swap_ac")).passed


@pytest.mark.parametrize("n,lam", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_ratio_and_weighted_phi_sum(n, lam):
    rep = qi.verify_cor51(n, lam, seed=3)
    assert rep.passed, [(c.identity, c.residual) for c in rep.checks]
    assert not qi.verify_cor51(n, lam, seed=3, q_power_offset=1).passed


def test_ratio_with_wrong_eigenfunction_fails():
    assert not qi.ratio_test_macdonald(2, 1, wrong=True).passed
    assert not qi.ratio_test_macdonald(1, 2, wrong=True).passed


def test_non_generic_points_are_rejected():
    with pytest.raises(qi.NonGenericPointError):
        qi.bracket("one", qi.NumericPoint(0.3, 0.7, (1.0, 1.0)))
    with pytest.raises(qi.NonGenericPointError):
        qi.bracket("one", qi.NumericPoint(0.3, 1.0, (0.9,)))
    with pytest.raises(qi.NonGenericPointError):
        qi.bracket("one", qi.NumericPoint(0.3, 0.7, (0.9, 0.9 * 0.3)))
    for bad in (dict(q=1.1), dict(q=0.0), dict(t=-1.0)):
        kw = dict(q=0.3, t=0.7, y=(0.9,)) | bad
        with pytest.raises(ValueError):
            qi.NumericPoint(**kw)


def test_ladder_cap_reports_non_convergence():
    pt = qi.NumericPoint(0.3, 0.7, (0.9 + 0.1j,), ladder_trunc=4)
    assert not qi.bracket("one", pt).converged


def test_random_points_are_reproducible():
    a = points(2, 1, seed=11)
    b = points(2, 1, seed=11)
    assert [p.y for p in a] == [p.y for p in b]


def test_unknown_selector():
    with pytest.raises(ValueError):
        qi.psi_from_selector("phi_9", 2)
    with pytest.raises(ValueError):
        qi.psi_from_selector("banana", 2)


def test_qpochhammer_functional_equation_and_trivial_value():
    pt = qi.NumericPoint(0.3, 0.7, (1.1,))
    assert qi.qpoch_inf(0, pt) == 1
    for a in (0.4, 2.5 - 1j, -7.0):
        lhs, rhs = qi.qpoch_inf(a, pt), (1 - a) * qi.qpoch_inf(a * pt.q, pt)
        assert abs(lhs - rhs) <= 1e-14 * max(1, abs(lhs))


def test_integrand_collapses_at_t_equal_one():
    pt = qi.NumericPoint(0.3, 1.0, (0.9, 1.3), 2)
    for x in (0.37 + 0.2j, 2.1):
        assert abs(qi.integrand(x, "one", pt) - x ** 2 / x) < 1e-12 * abs(x)


def test_truncation_stability():
    pt = points(2, 2, k=1, seed=9)[0]
    bumped = qi.NumericPoint(pt.q, pt.t, pt.y, pt.lam, prod_trunc=pt.prod_trunc + 10,
                             ladder_trunc=pt.ladder_trunc + 10)
    for psi in ("one", "phi_2", "s0_phi_4"):
        a, b = qi.bracket(psi, pt).value, qi.bracket(psi, bumped).value
        assert abs(a - b) <= 1e-10 * abs(a)


def test_bracket_of_one_is_w_invariant():
    pt = qi.NumericPoint(0.3, 0.7, (0.9 + 0.2j, 1.25 - 0.1j, 0.85 + 0.3j), 1)
    ref = qi.bracket("one", pt).value
    y = pt.y
    for image in ((y[1], y[0], y[2]), (y[0], y[2], y[1]), (y[0], y[1], 1 / y[2])):
        assert abs(qi.bracket("one", pt.with_y(image)).value - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("pt", [
    qi.NumericPoint(0.3, 0.7, (0.9,), 1),
    qi.NumericPoint(0.25, 0.6, (0.9, 1.3), 2),
])
def test_documented_points(pt):
    assert qi.verify_lemma43(pt).passed
    assert qi.verify_qkz(pt).passed
    worst = max(c.residual for c in qi.verify_qkz(pt, reverse=True).checks)
    assert worst > 1e-3
    assert qi.verify_shifted_ratio(pt).passed
