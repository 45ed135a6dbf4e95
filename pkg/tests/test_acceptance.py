"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
while pytest captures output) or directly as ``python3 tests/test_acceptance.py``.
"""
import time

import numpy as np

from hurwitz_tau.covering import branch_data
from hurwitz_tau.hyperelliptic import period_matrices
from hurwitz_tau.numkit import agm, fd_derivative
from hurwitz_tau.sampling import random_chain_curve, random_pairs, two_fold_covering
from hurwitz_tau.tau import (
    connection_genus0,
    tau_wirtinger,
    thomae_check,
    wirtinger_closed_form_dlog,
    wirtinger_correction_residual,
)
from hurwitz_tau.theta import (
    enumerate_characteristics,
    even_characteristics,
    jacobi_thetas,
    riemann_theta,
    theta_constants,
)
from hurwitz_tau.verify import (
    JobConfig,
    check_flatness,
    check_gauge,
    check_jm,
    check_monodromy,
    check_residue,
    cross_genus1_residual,
    rauch_residual,
)

FD = JobConfig().fd


def _line(k, text, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {k}: {text} | {detail}"


def _emit(capsys, line):
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _gate(capsys, k, text, parts, elapsed, budget=None):
    """``parts``: list of (label, residual, tolerance)."""
    ok = all(np.isfinite(r) and r < t for _, r, t in parts)
    detail = ", ".join(f"{lab} {r:.2e} < {t:.0e}" for lab, r, t in parts)
    if budget is not None:
        ok = ok and elapsed < budget
        detail += f", runtime {elapsed:.1f}s < {budget:.0f}s"
    _emit(capsys, _line(k, text, ok, detail))
    assert ok, detail


def test_criterion_01_two_fold_genus_zero(capsys):
    t0 = time.perf_counter()
    rel_b, s_err = 0.0, 0.0
    for l1, l2 in random_pairs(np.random.default_rng(101), 20):
        R = two_fold_covering(l1, l2)
        lams = np.array([b.lambda_m for b in branch_data(R, 8)])
        m = int(np.argmin(np.abs(lams - l1)))
        B = connection_genus0(R, m, 8)
        rel_b = max(rel_b, abs(B - 1 / (4 * (l1 - l2))) * abs(4 * (l1 - l2)))
        S = branch_data(R, 8)[m].schwarzian()
        s_err = max(s_err, abs(S - 3 / (l2 - l1)))
    _gate(capsys, 1, "two-fold genus-0 connection and Schwarzian (20 pairs)",
          [("rel B", rel_b, 1e-9), ("S", s_err, 1e-9)], time.perf_counter() - t0, 1)


def test_criterion_02_genus_one_cross_check(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    worst = max(cross_genus1_residual(random_chain_curve(rng, 1), FD) for _ in range(10))
    _gate(capsys, 2, "genus-1 theta formula vs determinant formula dlog (10 curves)",
          [("max |diff|", worst, 1e-6)], time.perf_counter() - t0, 30)


def test_criterion_03_genus_two_wirtinger(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(5):
        curve = random_chain_curve(rng, 2)
        t = tau_wirtinger(curve, fd=FD)
        worst = max(worst, float(np.max(np.abs(t.dlog - wirtinger_closed_form_dlog(curve)))))
    _gate(capsys, 3, "genus-2 theta-based Wirtinger dlog vs 1/20 closed form (5 curves)",
          [("max |diff|", worst, 1e-5)], time.perf_counter() - t0, 120)


def test_criterion_04_thomae(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(104)
    g2 = max(thomae_check(period_matrices(random_chain_curve(rng, 2))) for _ in range(3))
    g1 = max(thomae_check(period_matrices(random_chain_curve(rng, 1))) for _ in range(3))
    _gate(capsys, 4, "Thomae multiset match of Theta^8",
          [("g=2 rel", g2, 1e-8), ("g=1 rel", g1, 1e-8)], time.perf_counter() - t0, 60)


def test_criterion_05_flatness(capsys):
    t0 = time.perf_counter()
    rep = check_flatness(JobConfig(seed=105))
    parts = [(c.label, c.residual, c.tolerance) for c in rep.cases]
    _gate(capsys, 5, "flatness of B and A (genus 0 degree 3, genus 1, genus 2)", parts, time.perf_counter() - t0, 180)


def test_criterion_06_rauch(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(106)
    g1 = rauch_residual(random_chain_curve(rng, 1), FD)
    g2 = rauch_residual(random_chain_curve(rng, 2), FD)
    _gate(capsys, 6, "Rauch closed form vs FD of the Riemann matrix",
          [("g=1 rel", g1, 1e-6), ("g=2 rel", g2, 1e-6)], time.perf_counter() - t0, 60)


def test_criterion_07_riemann_hilbert(capsys):
    t0 = time.perf_counter()
    cfg = JobConfig(seed=107)
    mono = check_monodromy(cfg, det_points=50)
    jm = check_jm(cfg)
    parts = [(c.label, c.residual, c.tolerance) for c in mono.cases + jm.cases]
    _gate(capsys, 7, "det Psi, monodromy, trace identity, tau_JM tau_W^(1/2)", parts, time.perf_counter() - t0, 60)


def test_criterion_08_residue_formula(capsys):
    t0 = time.perf_counter()
    rep = check_residue(JobConfig(seed=108))
    parts = [(c.label, c.residual, c.tolerance) for c in rep.cases]
    _gate(capsys, 8, "residue of the Bergmann pair sum vs Schwarzian value", parts, time.perf_counter() - t0, 30)


def test_criterion_09_theta_kernel(capsys):
    eps = 1e-15
    rng = np.random.default_rng(109)
    odd, dbl = 0.0, 0.0
    for g in (1, 2, 3):
        X, Y = rng.standard_normal((g, g)), rng.standard_normal((g, g))
        B = 0.3 * (X + X.T) + 0.5j * (Y @ Y.T + g * np.eye(g))
        odd = max(odd, max(abs(v) for _, v in theta_constants(B, eps, "odd")))
        for c in even_characteristics(g):
            a = riemann_theta(None, B, c, eps).value
            b = riemann_theta(None, B, c, eps, radius_factor=2.0).value
            dbl = max(dbl, abs(a - b) / max(1.0, abs(a)))
    count = max(abs(len(even_characteristics(g)) - 2 ** (g - 1) * (2**g + 1)) for g in (1, 2, 3, 4))
    count += max(abs(len(enumerate_characteristics(g)) - 4**g) for g in (1, 2, 3, 4))
    # heat equation, genus 2, symmetric perturbation of each entry
    B = period_matrices(random_chain_curve(rng, 2)).B
    z = np.array([0.1 + 0.05j, -0.07j])
    c = even_characteristics(2)[3]
    heat = 0.0
    for j in range(2):
        for k in range(j, 2):
            E = np.zeros((2, 2))
            E[j, k] = E[k, j] = 1.0
            num, _ = fd_derivative(lambda t: riemann_theta(z, B + (t - B[j, k]) * E, c).value, B[j, k])
            d2 = riemann_theta(z, B, c, deriv=(j, k)).value
            heat = max(heat, abs(num - (2 - (j == k)) / (4j * np.pi) * d2))
    jac = 0.0
    for mu in (1j, 2j, 0.3 + 0.8j):
        t = jacobi_thetas(mu)
        jac = max(jac, abs(t.theta1p - np.pi * t.theta2 * t.theta3 * t.theta4))
    t3 = riemann_theta(None, [[1j]]).value
    agm_err = abs(t3**2 - np.sqrt(2.0) / agm(1.0, np.sqrt(2.0)))
    _gate(capsys, 9, "theta kernel health", [
        ("odd constants", odd, eps), ("even count defect", float(count), 0.5), ("doubling", dbl, eps),
        ("heat FD", heat, 1e-6), ("Jacobi", jac, 1e-10), ("theta3(i) vs AGM", agm_err, 1e-10)],
        0.0)


def test_criterion_10_gauge(capsys):
    t0 = time.perf_counter()
    rep = check_gauge(JobConfig(seed=110))
    parts = [(c.label, c.residual, c.tolerance) for c in rep.cases]
    _gate(capsys, 10, "Moebius gauge law of dlog tau", parts, time.perf_counter() - t0)


def test_criterion_11_wirtinger_correction(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(111)
    g1 = wirtinger_correction_residual(random_chain_curve(rng, 1), FD, "genus1")
    g2 = wirtinger_correction_residual(random_chain_curve(rng, 2), FD, "svfay")
    _gate(capsys, 11, "A_m - B_m + 4/(4^g+2^g) dlog prod Theta_even",
          [("g=1", g1, 1e-5), ("g=2", g2, 1e-5)], time.perf_counter() - t0)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                failed += 1
    raise SystemExit(1 if failed else 0)
