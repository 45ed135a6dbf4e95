import mpmath
import numpy as np
import pytest

from hurwitz_tau.errors import InputError
from hurwitz_tau.hyperelliptic import (
    HyperellipticCurve,
    PeriodData,
    infinity_expansions,
    local_expansions,
    period_matrices,
    rauch_derivative,
)
from hurwitz_tau.numkit import FDConfig, ellipk_agm, fd_derivative
from hurwitz_tau.sampling import random_chain_curve
from hurwitz_tau.tau import tau_bergmann_hyperelliptic

CURVE_0123 = HyperellipticCurve([0, 1, 2, 3])


def _agm_modulus(e):
    # y^2 = prod (x - e_i), e real increasing; a around [e1, e2], b across [e2, e3]
    k2 = (e[1] - e[0]) * (e[3] - e[2]) / ((e[2] - e[0]) * (e[3] - e[1]))
    k, kp = np.sqrt(k2), np.sqrt(1 - k2)
    return 1j * ellipk_agm(kp) / ellipk_agm(k)


def test_modulus_matches_agm_oracle():
    B = period_matrices(CURVE_0123).B[0, 0]
    assert abs(B - _agm_modulus([0, 1, 2, 3])) < 1e-10
    # independent oracle: mpmath elliptic integrals
    ref = 1j * mpmath.ellipk(0.75) / mpmath.ellipk(0.25)
    assert abs(B - complex(ref)) < 1e-10


@pytest.mark.parametrize("a", [1.5, 2.0, 4.0])
def test_symmetric_curve_has_imaginary_modulus(a):
    B = period_matrices(HyperellipticCurve([-a, -1, 1, a])).B[0, 0]
    assert abs(B.real) < 1e-10
    assert abs(B - _agm_modulus([-a, -1, 1, a])) < 1e-10


@pytest.mark.parametrize("genus", [1, 2, 3, 4])
def test_riemann_matrix_is_symmetric_with_positive_imaginary_part(genus):
    rng = np.random.default_rng(10 + genus)
    for _ in range(3):
        pd = period_matrices(random_chain_curve(rng, genus))
        assert np.max(np.abs(pd.B - pd.B.T)) < 1e-11
        assert np.min(np.linalg.eigvalsh(pd.B.imag)) > 0
        assert np.allclose(pd.C @ pd.A.T, np.eye(genus), atol=1e-12)


def test_local_coefficient_at_first_branch_point():
    pd = period_matrices(CURVE_0123)
    A = pd.A[0, 0]
    f1 = local_expansions(pd, 0, 2).values[0]
    l = CURVE_0123.points
    expected = 2 / A / np.sqrt((l[0] - l[1]) * (l[0] - l[2]) * (l[0] - l[3]))
    assert abs(f1**2 - expected**2) < 1e-12


def test_infinity_coefficients_genus_one():
    pd = period_matrices(HyperellipticCurve([0.1j, 1, 2 + 0.3j, 3]))
    A = pd.A[0, 0]
    for k in (1, 2):
        h = infinity_expansions(pd, k, 2).values[0]
        assert abs(h - (-1) ** k / A) < 1e-12


def test_rauch_genus_one():
    pd = period_matrices(CURVE_0123)
    for m in range(4):
        num, _ = fd_derivative(lambda x: period_matrices(CURVE_0123.moved(m, x)).B, CURVE_0123.points[m], FDConfig(1e-3, 3))
        assert abs(num[0, 0] - rauch_derivative(pd, m)[0, 0]) < 1e-7


def test_rauch_genus_two():
    curve = random_chain_curve(np.random.default_rng(21), 2)
    pd = period_matrices(curve)
    for m in range(6):
        exact = rauch_derivative(pd, m)
        num, _ = fd_derivative(lambda x: period_matrices(curve.moved(m, x)).B, curve.points[m])
        assert np.max(np.abs(num - exact)) < 1e-6 * np.max(np.abs(exact))


def test_a_cycle_flip_negates_det_and_keeps_pow12():
    curve = random_chain_curve(np.random.default_rng(22), 2)
    pd = period_matrices(curve)
    S = np.diag([-1.0, 1.0])
    A2, Bp2 = S @ pd.A, S @ pd.Bp
    C2 = np.linalg.inv(A2).T
    flipped = PeriodData(curve, A2, Bp2, C2, C2 @ Bp2.T)
    assert np.allclose(flipped.B, S @ pd.B @ S, atol=1e-13)
    assert abs(np.linalg.det(flipped.A) + np.linalg.det(pd.A)) < 1e-13
    t1 = tau_bergmann_hyperelliptic(curve, pd, fd=None)
    t2 = tau_bergmann_hyperelliptic(curve, flipped, fd=None)
    assert abs(t1.tau_pow12 - t2.tau_pow12) < 1e-12 * abs(t1.tau_pow12)


def test_periods_are_stable_under_tolerance():
    curve = random_chain_curve(np.random.default_rng(23), 2)
    a = period_matrices(curve, 1e-13).B
    b = period_matrices(curve, 1e-10).B
    assert np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize(
    "points, msg",
    [
        ([0, 1, 2], "even"),
        ([0, 1, 1, 3], "distinct"),
        ([0, 2, 2j + 1, -1j + 1], "intersect"),
        ([0, 1], ">= 4"),
    ],
)
def test_invalid_curves(points, msg):
    with pytest.raises(InputError, match=msg):
        HyperellipticCurve(points)


def test_curve_json_roundtrip():
    c = random_chain_curve(np.random.default_rng(24), 2)
    assert np.allclose(HyperellipticCurve.from_json(c.to_json()).points, c.points)
