"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line in the summary."""
import math
import time

import numpy as np
import pytest

from heunwell.heun import params_antisymmetric, params_symmetric
from heunwell.oracle import shoot_eigenvalue
from heunwell.spectrum import Parity, build_state, delta_determinant, eigenvalue, special_strengths
from heunwell.wavefn import psi, sample, schrodinger_residual

from test_heun import heun_ode_residual
from test_spectrum import _random_params, cofactor_det, dense_termination_matrix

pytestmark = pytest.mark.acceptance

S, A = Parity.SYMMETRIC, Parity.ANTISYMMETRIC


def within(found, expected, tol):
    return len(found) >= len(expected) and all(abs(f - e) <= tol for f, e in zip(found, expected))


def fmt(values):
    return "[" + ", ".join(f"{v:.4f}" for v in values) + "]"


def check_roots(report, label, n, parity, expected, tol=0.01):
    found = special_strengths(n, parity, 1.0, 5000.0)
    ok = within(found, expected, tol)
    report(label, ok, f"found {fmt(found)}, expected {expected} +-{tol}")
    assert ok, f"{fmt(found)} vs {expected}"
    return found


def shoot_near(u0, n, parity, d=1.0):
    eps = eigenvalue(n, parity, u0, d)
    window = max(0.05 * abs(eps), 0.05)
    return eps, shoot_eigenvalue(u0, d, eps - window, min(eps + window, 0.5 * eps), parity)


def test_ac1_n1_symmetric_roots(report):
    t0 = time.perf_counter()
    found = special_strengths(1, S, 1.0, 5000.0)
    elapsed = time.perf_counter() - t0
    ok = within(found, [149.57, 595.84], 0.01) and len(found) == 2 and elapsed < 5.0
    report("AC1 N=1 symmetric roots", ok, f"found {fmt(found)} in {elapsed:.2f} s (target < 5 s)")
    assert ok


def test_ac2_n1_antisymmetric_roots(report):
    check_roots(report, "AC2 N=1 antisymmetric roots", 1, A, [426.23, 1092.80])


def test_ac3_n2_antisymmetric_roots(report):
    check_roots(report, "AC3 N=2 antisymmetric roots", 2, A, [642.50, 1445.59, 1740.79])


def test_ac4_n2_symmetric_roots(report):
    found = special_strengths(2, S, 1.0, 5000.0)
    first_two = within(found, [279.14, 860.32], 0.01)
    third = found[2] if len(found) > 2 else None
    rel = math.inf
    if third is not None:
        eps, shot = shoot_near(third, 2, S)
        rel = abs(shot.eps - eps) / abs(eps)
    ok = first_two and rel <= 1e-6
    report("AC4 N=2 symmetric roots", ok,
           f"found {fmt(found)}; third root eps closed-form vs shooting rel diff {rel:.1e} (tol 1e-6)")
    assert ok


def test_ac5_eigenvalue_reproduction(report, roots):
    u0 = roots[(1, S)][0]
    eps = eigenvalue(1, S, u0, 1.0)
    ok = abs(eps - (-6.838)) <= 0.005 and abs(eps - (-6.84)) <= 0.005
    report("AC5 eigenvalue at U0=149.57", ok, f"eps = {eps:.6f} at U0 = {u0:.6f} (target -6.838 +-0.005)")
    assert ok


def test_ac6_cross_method_agreement(report, roots):
    worst, count = 0.0, 0
    for n in range(3):
        for parity in Parity:
            for u0 in roots[(n, parity)]:
                eps, shot = shoot_near(u0, n, parity)
                worst = max(worst, abs(shot.eps - eps) / abs(eps))
                count += 1
    ok = worst <= 1e-6 and count == 12
    report("AC6 closed-form vs Numerov", ok, f"{count} states, worst rel diff {worst:.2e} (tol 1e-6, step 1e-4)")
    assert ok


def test_ac7_node_laws(report, roots):
    bad = []
    for (n, parity), found in roots.items():
        start = 2 * n if parity is S else 2 * n + 1
        expected = [start - 2 * k for k in range(n + 1)]
        got = [sample(build_state(n, parity, u0, 1.0), 8.0, 8001).nodes for u0 in found]
        if got != expected:
            bad.append(f"N={n} {parity.value}: {got} vs {expected}")
    report("AC7 node-count laws", not bad, "; ".join(bad) or "all (N, parity) with N <= 3 follow 2N..0 / 2N+1..1")
    assert not bad


def test_ac8_root_count(report, roots):
    counts = {f"{n}{p.value}": len(r) for (n, p), r in roots.items()}
    ok = all(len(r) == n + 1 for (n, _), r in roots.items())
    report("AC8 N+1 roots per (N, parity)", ok, f"counts {counts}")
    assert ok


def test_ac9a_heun_ode_residual(report):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(60):
        u0, eps, xi = rng.uniform(1, 60), rng.uniform(-10, -0.1), rng.uniform(0.05, 0.9)
        p = (params_antisymmetric if rng.random() < 0.5 else params_symmetric)(u0, 1.0, eps)
        res, scale = heun_ode_residual(p, xi)
        worst = max(worst, res / scale)
    ok = worst <= 1e-4
    report("AC9a Heun ODE residual", ok, f"worst scaled residual {worst:.1e} over 60 draws (tol 1e-4)")
    assert ok


def test_ac9b_determinant_vs_cofactor(report):
    worst = 0.0
    for n in range(5):
        rng = np.random.default_rng(100 + n)
        for _ in range(100):
            p = _random_params(rng)
            m = dense_termination_matrix(p, n)
            exact = float(cofactor_det(m))
            err = abs(delta_determinant(p, n) - exact) / abs(exact)
            worst = max(worst, err)
    ok = worst <= 1e-12
    report("AC9b tridiagonal minors vs cofactor", ok, f"worst rel diff {worst:.1e} over 500 draws (tol 1e-12)")
    assert ok


def test_ac9c_schrodinger_residual_suite(report, roots):
    xs = np.linspace(-4, 4, 101)
    worst = 0.0
    for (n, parity), found in roots.items():
        for u0 in found:
            state = build_state(n, parity, u0, 1.0)
            res = np.array([schrodinger_residual(state, x) for x in xs])
            worst = max(worst, np.mean(np.abs(res)) / np.max(np.abs(state.eps * psi(state, xs))))
    ok = worst <= 1e-3
    report("AC9c Schrodinger residual suite", ok, f"worst mean residual / ||eps psi|| = {worst:.1e} (tol 1e-3)")
    assert ok


def test_ac9d_step_halving(report, roots):
    u0 = roots[(1, S)][0]
    eps0 = eigenvalue(1, S, u0, 1.0)
    eps = [shoot_eigenvalue(u0, 1.0, eps0 - 0.3, eps0 + 0.3, S, z_max=12.0, step=h, tol=1e-14).eps
           for h in (0.04, 0.02, 0.01)]
    ratio = (eps[0] - eps[1]) / (eps[1] - eps[2])
    ok = 8 <= ratio <= 32
    report("AC9d Numerov step-halving ratio", ok, f"ratio {ratio:.2f} for steps 0.04/0.02/0.01 (range [8, 32])")
    assert ok


def test_ac10_scale_invariance(report):
    worst = 0.0
    for parity in Parity:
        r1 = np.array(special_strengths(1, parity, 1.0, 5000.0))
        r2 = np.array(special_strengths(1, parity, 2.0, 1250.0))
        assert len(r1) == len(r2) == 2
        worst = max(worst, float(np.max(np.abs(r2 - r1 / 4))))
    ok = worst <= 2e-10
    report("AC10 d=2 roots equal d=1 roots / 4", ok, f"max |dU0| {worst:.1e} (combined root tol 2e-10)")
    assert ok
