import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz_tau.errors import ConvergenceError, InputError
from hurwitz_tau.numkit import (
    Contour,
    FDConfig,
    Jet,
    agm,
    contour_integral,
    ellipk_agm,
    fd_derivative,
    fd_gradient,
    polynomial_roots,
    residue,
    root_multiplicities,
    schwarzian,
)
from hurwitz_tau.sampling import two_fold_covering
from hurwitz_tau.covering import branch_data


# -- roots ----------------------------------------------------------------

def test_double_root_is_resolved():
    # (z + 1)(z - 2)^2 = z^3 - 3 z^2 + 4
    expanded = np.polynomial.polynomial.polyfromroots([-1, 2, 2])
    assert np.allclose(expanded, [4, 0, -3, 1])
    r = polynomial_roots([4, 0, -3, 1])
    assert np.allclose(r, [-1, 2, 2], atol=1e-12)
    mult = root_multiplicities(r)
    assert sorted(m for _, m in mult) == [1, 2]


def test_triple_root():
    r = polynomial_roots(np.polynomial.polynomial.polyfromroots([0.5j, 0.5j, 0.5j, -1]))
    assert np.allclose(np.sort_complex(r), np.sort_complex([0.5j, 0.5j, 0.5j, -1]), atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=2, max_size=7))
def test_roots_match_numpy_for_separated_roots(roots):
    roots = np.array(roots)
    d = np.abs(roots[:, None] - roots[None, :]) + np.diag(np.full(roots.size, np.inf))
    if d.min() < 0.05:
        return
    found = polynomial_roots(np.polynomial.polynomial.polyfromroots(roots))
    for z in roots:
        assert np.min(np.abs(found - z)) < 1e-8


def test_roots_reject_constant():
    with pytest.raises(InputError):
        polynomial_roots([3.0])


# -- jets -----------------------------------------------------------------

def test_schwarzian_of_square():
    # w = z^2 around z = 1: S = -3/(2 z^2)
    w = Jet.from_polynomial([0, 0, 1], 1.0, 6)
    assert abs(schwarzian(w) - (-1.5)) < 1e-14


def test_schwarzian_mobius_vanishes():
    x = Jet.variable(8)
    w = (2 * x + 1) / (x + 3)
    assert abs(w.schwarzian_at_zero()) < 1e-13


def test_schwarzian_of_two_fold_inverse():
    l1, l2 = 0.3 + 0.2j, -1.1 + 0.7j
    bd = branch_data(two_fold_covering(l1, l2), 10)
    m = [abs(b.lambda_m - l1) for b in bd].index(min(abs(b.lambda_m - l1) for b in bd))
    assert abs(bd[m].schwarzian() - 3 / (l2 - l1)) < 1e-12


def _random_jet(rng, order, c0=0.0, c1=None):
    c = (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)) / np.arange(1, order + 2)
    c[0] = c0
    if c1 is not None:
        c[1] = c1
    return Jet(c)


def test_composition_is_associative():
    rng = np.random.default_rng(3)
    f, g, h = (_random_jet(rng, 8) for _ in range(3))
    a = f.compose(g).compose(h)
    b = f.compose(g.compose(h))
    assert np.allclose(a.c, b.c, rtol=1e-13, atol=1e-13)


def test_schwarzian_cocycle():
    rng = np.random.default_rng(4)
    for _ in range(5):
        f = _random_jet(rng, 9, c1=1.0 + rng.random())
        g = _random_jet(rng, 9, c1=1.0 + rng.random())
        lhs = f.compose(g).schwarzian_at_zero()
        rhs = f.schwarzian_at_zero() * g.c[1] ** 2 + g.schwarzian_at_zero()
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_schwarzian_invariant_under_mobius():
    rng = np.random.default_rng(5)
    f = _random_jet(rng, 9, c1=1.0)
    x = Jet.variable(9)
    a, b, c, d = 2.0, 0.5, 0.3, 1.0
    mob = (a * f + b) / (c * f + d)
    assert abs(mob.schwarzian_at_zero() - f.schwarzian_at_zero()) < 1e-11
    assert abs(((a * x + b) / (c * x + d)).schwarzian_at_zero()) < 1e-13


def test_schwarzian_needs_nonzero_derivative():
    x = Jet.variable(6)
    with pytest.raises(InputError):
        (x * x).schwarzian_at_zero()


def test_jet_exp_log_roundtrip():
    x = Jet.variable(10)
    u = 1.5 + x + 0.3 * x * x
    back = u.log().exp()
    assert np.allclose(back.c, u.c, atol=1e-13)


def test_jet_sqrt_and_reciprocal():
    x = Jet.variable(9)
    u = 2.0 - x + 0.5j * x**3
    s = u.sqrt()
    assert np.allclose((s * s).c, u.c, atol=1e-13)
    assert np.allclose((u * u.reciprocal()).c, Jet.constant(1.0, 9).c, atol=1e-13)


def test_reversion_of_sin_is_arcsin():
    x = Jet.variable(9)
    sin = (x * 1j).exp()
    sin = (sin - (x * -1j).exp()) / 2j
    asin = sin.reversion()
    expect = [0, 1, 0, 1 / 6, 0, 3 / 40, 0, 5 / 112, 0, 35 / 1152]
    assert np.allclose(asin.c, expect, atol=1e-13)


def test_compose_matches_evaluation():
    x = Jet.variable(8)
    f = Jet([1.0, 2.0, -1.0, 0.5, 0, 0, 0, 0, 0])
    inner = 0.3 * x + 0.1 * x * x
    comp = f.compose(inner)
    t = 1e-2
    exact = np.polyval(f.c[::-1], 0.3 * t + 0.1 * t * t)
    assert abs(comp(t) - exact) < 1e-14


# -- quadrature -----------------------------------------------------------

def test_contour_integral_simple_pole():
    val = contour_integral(lambda z: 1.0 / (z * z - 4.0), Contour.circle(2.0, 1.0))
    assert abs(val - 2j * np.pi / 4) < 1e-13


def test_residue_higher_order_pole():
    r = residue(lambda z: np.exp(z) / z**3, 0.0, 0.5)
    assert abs(r - 0.5) < 1e-13


def test_contour_integral_trivial_cases():
    unit = Contour.circle(0.0, 1.0)
    assert abs(contour_integral(lambda z: 1 / z, unit) - 2j * np.pi) < 1e-14
    assert abs(contour_integral(lambda z: z, unit)) < 1e-14


def test_contour_integral_array_valued():
    f = lambda z: np.array([1.0 / z, 1.0 / z**2, z])
    val = contour_integral(f, Contour.circle(0.0, 1.0))
    assert np.allclose(val, [2j * np.pi, 0.0, 0.0], atol=1e-13)


def test_loop_contour_is_closed():
    loop = Contour.loop(0.0, 1.0 + 1.0j, 0.2)
    assert loop.is_closed()
    assert abs(contour_integral(lambda z: 1 / (z - 1 - 1j), loop) - 2j * np.pi) < 1e-12


# -- finite differences ---------------------------------------------------

def test_fd_derivative_of_log_tau_two_fold():
    # log tau = 1/4 log(l1 - l2) at (0, 1): derivative -1/4
    val, err = fd_derivative(lambda x: 0.25 * cmath.log(x - 1.0), 0.0, FDConfig())
    assert abs(val + 0.25) < 1e-12
    assert err < 1e-9


def test_fd_gradient():
    g = lambda p: p[0] ** 2 * p[1]
    grad, _ = fd_gradient(g, np.array([1.0 + 1j, 2.0]))
    assert np.allclose(grad, [2 * (1 + 1j) * 2, (1 + 1j) ** 2], atol=1e-11)


def test_fd_detects_inconsistency():
    with pytest.raises(ConvergenceError):
        fd_derivative(lambda x: abs((x - 3e-4).real) ** 0.5, 0.0, FDConfig(1e-3, 3))


def test_fd_trivial_cases():
    assert abs(fd_derivative(lambda x: x * x, 1.0)[0] - 2) < 1e-12
    assert abs(fd_derivative(lambda x: 1 / x, 2.0)[0] + 0.25) < 1e-12


# -- agm ------------------------------------------------------------------

def test_agm_value():
    assert abs(agm(1.0, 1.0) - 1.0) < 1e-16
    assert abs(agm(1.0, np.sqrt(2.0)) - 1.1981402347355922) < 1e-15
    assert abs(agm(1.0, np.sqrt(2.0)) - float(mpmath.agm(1, mpmath.sqrt(2)))) < 1e-15


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.3 + 0.4j])
def test_ellipk_matches_mpmath(k):
    assert abs(ellipk_agm(k) - complex(mpmath.ellipk(k * k))) < 1e-13


def test_agm_rejects_zero():
    with pytest.raises(InputError):
        agm(0.0, 1.0)
