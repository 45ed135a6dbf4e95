import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz_tau.covering import RationalCovering, branch_data, monodromy_permutations
from hurwitz_tau.errors import InputError
from hurwitz_tau.isomonodromy import (
    RiemannHilbertProblem,
    cauchy_determinant_check,
    jm_log_derivative,
    monodromy_rep,
    psi_matrix,
    schlesinger_residues,
    trace_identity_residual,
)
from hurwitz_tau.sampling import random_covering, two_fold_covering
from hurwitz_tau.tau import tau_rational

L1, L2 = 0.4 + 0.1j, -0.9 + 0.6j
TWO_FOLD = two_fold_covering(L1, L2)
CUBIC = random_covering(np.random.default_rng(11), 3)


def _probe_points(rh, n, seed=0):
    rng = np.random.default_rng(seed)
    c = rh.branch_points.mean()
    out = []
    while len(out) < n:
        lam = c + rng.uniform(-2, 2) + 1j * rng.uniform(-2, 2)
        if np.min(np.abs(rh.branch_points - lam)) > 0.2:
            out.append(lam)
    return out


# -- Cauchy determinant ------------------------------------------------

def test_cauchy_two_by_two_by_hand():
    z, mu = np.array([0.0, 1.0]), np.array([2.0, 3.0])
    lhs = np.linalg.det(1.0 / (z[:, None] - mu[None, :]))
    rhs = (z[0] - z[1]) * (mu[1] - mu[0]) / np.prod(z[:, None] - mu[None, :])
    assert abs(lhs + 1 / 12) < 1e-15 and abs(rhs + 1 / 12) < 1e-15
    assert cauchy_determinant_check(z, mu) < 1e-14


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=0, max_value=10**6))
def test_cauchy_random(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    mu = rng.standard_normal(n) + 1j * rng.standard_normal(n) + 3.0
    if np.min(np.abs(z[:, None] - mu[None, :])) < 1e-3:
        return
    assert cauchy_determinant_check(z, mu) < 1e-10


def test_cauchy_rejects_singular_input():
    with pytest.raises(InputError):
        cauchy_determinant_check([1.0, 2.0], [1.0, 3.0])
    with pytest.raises(InputError):
        cauchy_determinant_check([1.0, 2.0], [3.0])


# -- Psi ---------------------------------------------------------------

def test_psi_is_identity_at_base_point():
    rh = RiemannHilbertProblem(TWO_FOLD)
    assert np.allclose(rh.psi(rh.basepoint), np.eye(2))


@pytest.mark.parametrize("R, tol", [(TWO_FOLD, 1e-12), (CUBIC, 1e-10)])
def test_unit_determinant(R, tol):
    rh = RiemannHilbertProblem(R)
    for lam in _probe_points(rh, 10):
        assert abs(np.linalg.det(rh.psi(lam)) - 1) < tol


def test_psi_matrix_wrapper():
    lam = 0.3 - 1.0j
    assert np.allclose(psi_matrix(TWO_FOLD, lam), RiemannHilbertProblem(TWO_FOLD).psi(lam))


def test_log_derivative_matches_fd_of_psi():
    rh = RiemannHilbertProblem(CUBIC)
    lam = _probe_points(rh, 1, seed=3)[0]
    h = 1e-5
    dpsi = (rh.psi(lam + h) - rh.psi(lam - h)) / (2 * h)
    assert np.max(np.abs(dpsi @ np.linalg.inv(rh.psi(lam)) - rh.log_derivative(lam))) < 1e-7


# -- monodromy ---------------------------------------------------------

def test_two_fold_monodromy_is_signed_transposition():
    rep = monodromy_rep(TWO_FOLD)
    for M in rep.matrices:
        assert abs(M[0, 0]) < 1e-12 and abs(M[1, 1]) < 1e-12
        assert abs(abs(M[0, 1]) - 1) < 1e-10 and abs(M[0, 1] + M[1, 0]) < 1e-10


@pytest.mark.parametrize("R", [CUBIC, random_covering(np.random.default_rng(12), 4)])
def test_quasi_permutation_and_trivial_product(R):
    rep = monodromy_rep(R)
    assert rep.is_quasi_permutation()
    assert rep.entry_defect() < 1e-8
    assert np.max(np.abs(rep.product() - np.eye(R.degree))) < 1e-8


def test_monodromy_matches_sheet_permutations():
    rep = monodromy_rep(CUBIC)
    _, perms = monodromy_permutations(CUBIC, rep.basepoint)
    for M, p in zip(rep.integer_matrices(), perms):
        for k in range(3):
            assert M[p[k]][k] != 0


# -- residues and tau --------------------------------------------------

def test_residue_matrices():
    A = schlesinger_residues(CUBIC)
    assert np.max(np.abs(sum(A))) < 1e-10
    for Am in A:
        assert abs(np.trace(Am @ Am) - 0.125) < 1e-10


@pytest.mark.parametrize("R", [TWO_FOLD, CUBIC])
def test_trace_identity(R):
    rh = RiemannHilbertProblem(R)
    for lam in _probe_points(rh, 5, seed=1):
        assert trace_identity_residual(R, lam, rh) < 1e-8


def test_jm_two_fold_value():
    lams = [b.lambda_m for b in branch_data(TWO_FOLD, 6)]
    m = int(np.argmin(np.abs(np.array(lams) - L1)))
    j = jm_log_derivative(TWO_FOLD, m)
    # tau_JM = (l1 - l2)^(-1/8)
    assert abs(j.from_schwarzian + 1 / (8 * (L1 - L2))) < 1e-12
    assert j.residual < 1e-8


def test_jm_quadrature_matches_jet_degree_three():
    for m in range(4):
        assert jm_log_derivative(CUBIC, m).residual < 1e-6


def test_jm_independent_of_base_point():
    a = RiemannHilbertProblem(CUBIC)
    b = RiemannHilbertProblem(CUBIC, basepoint=a.basepoint * 1j + 0.5)
    for m in range(4):
        va = jm_log_derivative(CUBIC, m, a).from_residue
        vb = jm_log_derivative(CUBIC, m, b).from_residue
        assert abs(va - vb) < 1e-10


def test_jm_is_inverse_square_root_of_wirtinger():
    tw = tau_rational(CUBIC)
    for m in range(4):
        assert abs(jm_log_derivative(CUBIC, m).from_residue + 0.5 * tw.dlog[m]) < 1e-7


def test_higher_ramification_is_rejected():
    # z^3 / (z^2 - 1) has three sheets meeting over 0
    R = RationalCovering([0, 0, 0, 1], [-1, 0, 1])
    with pytest.raises(InputError):
        RiemannHilbertProblem(R)
