"""Acceptance gates 1-11.  Each test prints exactly one PASS/FAIL line with
the worst residual (numeric gates) and the wall time against its budget."""
from __future__ import annotations

import time

import numpy as np
import pytest

from cnqkz import cli, hecke, macdonald, qintegral, rmatrix
from cnqkz.report import Report

NUMERIC_CONFIGS = [(1, 1), (1, 2), (2, 1), (2, 2)]
EIGEN_RANGE = [(1, l) for l in range(1, 6)] + [(2, l) for l in range(1, 5)] + [(3, l) for l in range(1, 4)]
TOL = 1e-8


@pytest.fixture
def gate(capsys):
    def record(number: int, title: str, reports: list[Report], start: float, budget: float, extra: str = ""):
        elapsed = time.perf_counter() - start
        checks = [c for r in reports for c in r.checks]
        ok = bool(checks) and all(c.passed for c in checks)
        res = [c.residual for c in checks if c.residual is not None]
        worst = f", max residual {max(res):.2e}" if res else ""
        status = "PASS" if ok and elapsed < budget else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {status}  {title}: {sum(c.passed for c in checks)}/{len(checks)} checks"
                  f"{worst}{extra}, {elapsed:.1f}s (budget {budget:.0f}s)")
        failed = [c.identity for c in checks if not c.passed]
        assert ok, failed[:10]
        assert elapsed < budget
    return record


def numeric_points(n, lam, k=3, seed=2024):
    rng = np.random.default_rng(seed + 10 * n + lam)
    return [qintegral.random_point(n, lam, rng) for _ in range(k)]


def test_criterion_01_yang_baxter(gate):
    t0 = time.perf_counter()
    reps = [rmatrix.verify_ybe(n) for n in (2, 3)]
    gate(1, "Yang-Baxter, both families, n=2,3, exact", reps, t0, 120)


def test_criterion_02_inverse_and_conjugation(gate):
    t0 = time.perf_counter()
    reps = []
    for n in (1, 2, 3):
        reps += [rmatrix.verify_inverse(n), rmatrix.verify_conjugation(n)]
    gate(2, "R_b R_-b = id and r_w R_a = R_w(a) r_w, n<=3, exact", reps, t0, 60)


def test_criterion_03_identity_suite(gate):
    t0 = time.perf_counter()
    reps = []
    for n in (1, 2, 3, 4):
        reps += [hecke.verify_si_action(n), hecke.verify_partial_fractions(n),
                 rmatrix.verify_induced_lemmas(n), hecke.verify_identity_53(n)]
    gate(3, "s_i action, partial fractions, induced R-action, phi sum identity, n<=4, exact",
         reps, t0, 60)


def test_criterion_04_integrand_covariance(gate):
    t0 = time.perf_counter()
    reps = [hecke.verify_prop31_integrand(n) for n in (1, 2, 3)]
    gate(4, "r_s_i Psi = R_alpha_i Psi at integrand level, n<=3, exact", reps, t0, 60)


def test_criterion_05_hecke(gate):
    t0 = time.perf_counter()
    reps = []
    for n in (1, 2, 3, 4):
        reps += [hecke.verify_hecke_relations(n), hecke.verify_prop61(n)]
    gate(5, "Hecke relations and T_i phi_k formulas on the phi-span, n<=4, exact", reps, t0, 120)


def test_criterion_06_eigen(gate):
    t0 = time.perf_counter()
    reps = [macdonald.verify_eigen(n, lam) for n, lam in EIGEN_RANGE]
    gate(6, "E P = c P, (1,1..5) (2,1..4) (3,1..3), exact", reps, t0, 300)


def test_criterion_07_triangularity(gate):
    t0 = time.perf_counter()
    reps = [macdonald.verify_triangularity(n, lam) for n, lam in EIGEN_RANGE]
    gate(7, "P = m_top + lower orbit sums, unit leading coefficient, exact", reps, t0, 60)


def test_criterion_08_numeric_qkz(gate):
    t0 = time.perf_counter()
    reps = []
    for n, lam in NUMERIC_CONFIGS:
        for pt in numeric_points(n, lam):
            reps.append(qintegral.verify_qkz(pt))
    shrink = Report("truncation")
    for n, lam in NUMERIC_CONFIGS:
        pt = numeric_points(n, lam, k=1)[0]
        loose, tight = qintegral.qkz_truncation_study(pt, loose_tol=1e-5)
        shrink.add(f"residual shrinks under tighter truncation ({n},{lam})", tight < loose,
                   n=n, lam=lam, loose=loose, tight=tight)
    reps.append(shrink)
    extra = ", loose/tight " + " ".join(f"{c.parameters['loose']:.0e}/{c.parameters['tight']:.0e}"
                                        for c in shrink.checks)
    gate(8, f"all n+1 QKZ equations at 3 points per config, tol {TOL:g}", reps, t0, 120, extra)


def test_criterion_09_s0_bracket_relations(gate):
    t0 = time.perf_counter()
    reps = []
    for n, lam in NUMERIC_CONFIGS:
        for pt in numeric_points(n, lam):
            reps.append(qintegral.verify_lemma43(pt))
    gate(9, f"s0 relations between <phi_1>, <phi_2n> and their twists, tol {TOL:g}", reps, t0, 30)


def test_criterion_10_integral_vs_macdonald(gate):
    t0 = time.perf_counter()
    reps = []
    for n, lam in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)]:
        reps.append(qintegral.verify_cor51(n, lam, seed=100 + 10 * n + lam, ratio_samples=5))
    gate(10, f"shifted-ratio identity, <1>/P over 5 samples, weighted phi sum, tol {TOL:g}",
         reps, t0, 120)


def test_criterion_11_mutation_sensitivity(gate, capsys):
    t0 = time.perf_counter()
    rep = Report("mutations")
    for suite in cli.SUITES:
        code = cli.main(["verify", suite, "--n", "2", "--lambda", "1", "--points", "1", "--self-test"])
        rep.add(f"{suite} fails under '{cli.SELF_TESTS[suite]}'", code == 1, exit_code=code)
    capsys.readouterr()
    rep.add("ratio test fails for a wrong eigenfunction",
            not qintegral.ratio_test_macdonald(2, 1, wrong=True).passed)
    gate(11, "every suite exits 1 under its self-test perturbation", [rep], t0, 60)
