"""Connection coefficients and tau functions.

``B_m`` are the coefficients of the Bergmann connection and ``A_m`` those of
the Wirtinger connection; a tau function is a horizontal section, i.e.
``d log tau / d lambda_m = B_m`` (Bergmann) or ``A_m`` (Wirtinger).  Every
closed formula is paired with a finite-difference derivative through the
underlying family so the two can be compared.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.optimize import linear_sum_assignment

from .covering import (
    RationalCovering,
    branch_data,
    deform_to_branch_points,
    infinity_series,
)
from .errors import InputError, VanishingThetaConstantError
from .hyperelliptic import (
    HyperellipticCurve,
    PeriodData,
    infinity_expansions,
    local_expansions,
    period_matrices,
)
from .numkit import FDConfig, Jet, contour_integral, fd_derivative
from .numkit.quadrature import Contour
from .theta import (
    dlog_theta1p_dmu,
    even_characteristics,
    even_theta_log_hessian,
    jacobi_thetas,
    odd_characteristics,
    riemann_theta,
    theta_constants,
    theta_jet,
)


@dataclass
class TauResult:
    log_tau: complex
    tau_pow12: complex
    dlog: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    dlog_error: np.ndarray | None = None

    def to_json(self) -> dict:
        from .serialize import encode_complex, encode_complex_list

        return {
            "log_tau": encode_complex(self.log_tau),
            "tau_pow12": encode_complex(self.tau_pow12),
            "dlog": encode_complex_list(self.dlog),
        }


def _log_ratio(new, old) -> complex:
    """``log(new / old)`` on the branch closest to 0, ignoring a sign flip of the factor.

    Factors built from square roots are defined only up to sign; a flip
    between neighbouring FD points would otherwise add ``i pi``.
    """
    q = complex(new) / complex(old)
    if q.real < 0:
        q = -q
    return complex(np.log(q))


def wirtinger_exponent(genus: int) -> float:
    """Power of the even theta-constant product in ``tau_W / tau_B``."""
    return -4.0 / (4.0**genus + 2.0**genus)


# -- genus zero --------------------------------------------------------

def connection_genus0(R: RationalCovering, m: int, jet_order: int = 12) -> complex:
    """``B_m = -(d/dx)^(r-2) {z, x}|_0 / (6 r (r-2)!)`` from the local inverse jet."""
    bd = branch_data(R, jet_order)
    if not 0 <= m < len(bd):
        raise InputError("branch point index out of range")
    return _connection_from_datum(bd[m])


def _connection_from_datum(b) -> complex:
    r = b.r
    if b.local_inverse.order < r + 2:
        raise InputError(f"jet order must be at least r + 2 = {r + 2}")
    S = b.local_inverse.schwarzian()
    # (d/dx)^(r-2) S at 0 equals (r-2)! S[r-2]
    return complex(-S[r - 2] / (6.0 * r))


def connection_coefficients_genus0(R: RationalCovering, jet_order: int = 12, reference=None) -> np.ndarray:
    return np.array([_connection_from_datum(b) for b in branch_data(R, jet_order, reference=reference)])


def _rational_factors(R: RationalCovering, reference=None, pole_reference=None):
    bd = branch_data(R, 6, reference=reference)
    poles = R.poles()
    if pole_reference is not None:
        cost = np.abs(np.asarray(pole_reference)[:, None] - poles[None, :])
        rows, cols = linear_sum_assignment(cost)
        poles = poles[cols[np.argsort(rows)]]
    rho = np.array([R.P(q) / R.Q.deriv()(q) for q in poles])
    dzdx = np.array([b.dz_dx for b in bd])
    r = np.array([b.r for b in bd])
    return rho, dzdx, r, np.array([b.lambda_m for b in bd]), poles


def tau_rational(R: RationalCovering, fd: FDConfig | None = FDConfig(), jet_order: int = 12) -> TauResult:
    """Bergmann (= Wirtinger) tau function of a genus-zero covering.

    ``log tau = 1/6 sum_k log dz/dzeta_k - sum_m (r_m - 1)/12 log dz/dx_m``
    where ``k`` runs over the finite poles (sheets 2..N).
    """
    Rn = R.normalized()
    rho, dzdx, r, lam, poles = _rational_factors(Rn)
    log_tau = np.sum(np.log(rho)) / 6.0 - np.sum((r - 1) * np.log(dzdx)) / 12.0
    pow12 = np.prod(rho**2) / np.prod(dzdx ** (r - 1))
    if fd is None:
        return TauResult(complex(log_tau), complex(pow12))
    if np.any(r != 2):
        raise InputError("finite-difference dlog needs simple branch points")

    def shifted(m, x):
        target = lam.copy()
        target[m] = x
        Rx = deform_to_branch_points(Rn, target)
        rho2, dzdx2, _, _, _ = _rational_factors(Rx, reference=target, pole_reference=poles)
        d = sum(_log_ratio(a, b) for a, b in zip(rho2, rho)) / 6.0
        d -= sum(_log_ratio(a, b) for a, b in zip(dzdx2, dzdx)) / 12.0
        return d

    dlog, err = [], []
    for m in range(lam.size):
        v, e = fd_derivative(lambda x, m=m: shifted(m, x), lam[m], fd)
        dlog.append(complex(v))
        err.append(e)
    return TauResult(complex(log_tau), complex(pow12), np.array(dlog), np.array(err))


def residue_formula_genus0(R: RationalCovering, m: int, radius: float | None = None, tol: float = 1e-13) -> complex:
    """``res_{lambda_m} (1/dlambda) sum_{j != k} B(z_j, z_k)`` over the sheets.

    ``B(z, z') = dz dz' / (z - z')^2`` is the Bergmann kernel of the sphere,
    pulled back to the ``lambda`` plane on every pair of sheets.
    """
    bd = branch_data(R, 4)
    lam = np.array([b.lambda_m for b in bd])
    others = np.delete(lam, m)
    dist = float(np.min(np.abs(others - lam[m]))) if others.size else 1.0
    rad = 0.3 * dist if radius is None else float(radius)
    if others.size and rad >= 0.9 * dist:
        raise InputError("the residue contour is too close to another branch point")

    def integrand(x):
        z = R.preimages(x)
        dz = 1.0 / R.derivative(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        K = np.outer(dz, dz) / diff**2
        np.fill_diagonal(K, 0.0)
        return K.sum()

    val = contour_integral(integrand, Contour.circle(lam[m], rad), tol=tol)
    return complex(val / (2j * np.pi))


def residue_formula_check_genus0(R: RationalCovering, m: int, radius: float | None = None) -> float:
    return abs(residue_formula_genus0(R, m, radius) - connection_genus0(R, m))


def mobius_covering(R: RationalCovering, a, b, c, d) -> RationalCovering:
    """Covering of the ``lambda~ = (a lambda + b)/(c lambda + d)`` sphere.

    When ``c != 0`` the new pole at infinity is placed over the preimage of
    ``lambda = -d/c`` with the largest modulus, via ``z = z* + 1/w``.
    """
    a, b, c, d = (complex(t) for t in (a, b, c, d))
    det = a * d - b * c
    if abs(det) < 1e-14:
        raise InputError("the Moebius map is degenerate")
    s = np.sqrt(det)
    a, b, c, d = a / s, b / s, c / s, d / s
    Poly = np.polynomial.Polynomial
    if c == 0:
        return RationalCovering((a * R.P + b * R.Q).coef, (d * R.Q).coef)
    zs = R.preimages(-d / c)
    zstar = zs[np.argmax(np.abs(zs))]
    N = R.degree
    lin = Poly([1.0, zstar])  # z* w + 1
    w = Poly([0.0, 1.0])
    Ph = sum((R.P.coef[k] * lin**k * w ** (N - k) for k in range(N + 1)), Poly([0.0]))
    Qh = sum((R.Q.coef[k] * lin**k * w ** (N - 1 - k) for k in range(N)), Poly([0.0]))
    num = a * Ph + b * w * Qh
    den = c * Ph + d * w * Qh
    den_c = den.coef.copy()
    if den_c.size > N:
        den_c = den_c[:N]
    return RationalCovering(num.coef, den_c)


def gauge_check(R: RationalCovering, mobius=(1.0, 0.0, 0.3, 1.0), fd: FDConfig = FDConfig()) -> float:
    """Residual of the Moebius transformation law of ``d log tau``.

    With ``log tau~ = log tau - 1/4 sum_n log(c lambda_n + d)`` one needs
    ``dlog~_m = (d lambda_m / d lambda~_m) (dlog_m - c / (4 (c lambda_m + d)))``.
    """
    a, b, c, d = (complex(t) for t in mobius)
    s = np.sqrt(a * d - b * c)
    a, b, c, d = a / s, b / s, c / s, d / s
    lam = np.array([bd.lambda_m for bd in branch_data(R, 3)])
    Rt = mobius_covering(R, a, b, c, d)
    lam_t = (a * lam + b) / (c * lam + d)
    tau = tau_rational(R, fd)
    tau_t = tau_rational(Rt, fd)
    lam_t_sorted = np.array([bd.lambda_m for bd in branch_data(Rt, 3)])
    cost = np.abs(lam_t_sorted[None, :] - lam_t[:, None])
    rows, cols = linear_sum_assignment(cost)
    dlog_t = tau_t.dlog[cols[np.argsort(rows)]]
    dlam = (c * lam + d) ** 2  # d lambda / d lambda~
    predicted = dlam * (tau.dlog - c / (4.0 * (c * lam + d)))
    return float(np.max(np.abs(dlog_t - predicted)))


# -- genus one --------------------------------------------------------

def _require_genus(curve: HyperellipticCurve, g: int):
    if curve.genus != g:
        raise InputError(f"expected a genus-{g} curve, got genus {curve.genus}")


def connection_genus1(curve: HyperellipticCurve, m: int, pd: PeriodData | None = None, jet_order: int = 8) -> complex:
    """``B_m = 2/3 d log theta1'/d lambda_m - {z, x_m}|_0 / 12`` for a two-fold elliptic curve.

    ``z`` is the normalised abelian integral, so ``dz/dx = f(x)``; the
    modulus derivative comes from the Rauch formula, and
    ``d log theta1'/d mu`` from the heat equation.
    """
    _require_genus(curve, 1)
    pd = period_matrices(curve) if pd is None else pd
    mu = pd.B[0, 0]
    if mu.imag <= 0:
        raise InputError("Im mu must be positive")
    f = local_expansions(pd, m, jet_order).jets[0]
    z = f.integ()
    S = z.schwarzian_at_zero()
    dmu = np.pi * 1j * f[0] ** 2
    return complex(2.0 / 3.0 * dlog_theta1p_dmu(mu) * dmu - S / 12.0)


def tau_elliptic(f, h, mu, ramification=None, kind: str = "bergmann") -> TauResult:
    """``tau_B = theta1'^(2/3) prod h_k^(1/6) / prod f_m^((r_m-1)/12)``; ``tau_W`` drops ``theta1'``."""
    f = np.asarray(f, dtype=complex)
    h = np.asarray(h, dtype=complex)
    r = np.full(f.size, 2) if ramification is None else np.asarray(ramification)
    if complex(mu).imag <= 0:
        raise InputError("Im mu must be positive")
    if np.any(f == 0) or np.any(h == 0):
        raise InputError("the local coefficients f_m and h_k must be nonzero")
    # Riemann-Hurwitz for genus one: sum (r - 1) = 2 N
    if np.sum(r - 1) != 2 * h.size:
        raise InputError("ramification data violate Riemann-Hurwitz for genus one")
    log_tau = np.sum(np.log(h)) / 6.0 - np.sum((r - 1) * np.log(f)) / 12.0
    pow12 = np.prod(h**2) / np.prod(f ** (r - 1))
    if kind == "bergmann":
        t1 = jacobi_thetas(mu).theta1p
        log_tau += 2.0 / 3.0 * np.log(t1)
        pow12 *= t1**8
    elif kind != "wirtinger":
        raise InputError("kind must be 'bergmann' or 'wirtinger'")
    return TauResult(complex(log_tau), complex(pow12))


def _elliptic_data(curve: HyperellipticCurve, pd: PeriodData | None = None):
    pd = period_matrices(curve) if pd is None else pd
    f = np.array([local_expansions(pd, m, 1).values[0] for m in range(4)])
    h = np.array([infinity_expansions(pd, k, 0).values[0] for k in (1, 2)])
    return f, h, pd.B[0, 0]


def tau_elliptic_two_fold(curve: HyperellipticCurve, kind: str = "bergmann", fd: FDConfig | None = FDConfig()) -> TauResult:
    """``tau_elliptic`` for ``nu^2 = prod (lambda - lambda_m)`` with FD ``dlog``."""
    _require_genus(curve, 1)
    f, h, mu = _elliptic_data(curve)
    base = tau_elliptic(f, h, mu, kind=kind)
    if fd is None:
        return base
    t1 = jacobi_thetas(mu).theta1p

    def shifted(m, x):
        f2, h2, mu2 = _elliptic_data(curve.moved(m, x))
        d = sum(_log_ratio(a, b) for a, b in zip(h2, h)) / 6.0
        d -= sum(_log_ratio(a, b) for a, b in zip(f2, f)) / 12.0
        if kind == "bergmann":
            d += 2.0 / 3.0 * _log_ratio(jacobi_thetas(mu2).theta1p, t1)
        return d

    dl, err = _fd_all(shifted, curve.points, fd)
    return TauResult(base.log_tau, base.tau_pow12, dl, err)


def _fd_all(shifted, points, fd: FDConfig):
    dl, err = [], []
    for m, p in enumerate(points):
        v, e = fd_derivative(lambda x, m=m: shifted(m, x), p, fd)
        dl.append(complex(v))
        err.append(e)
    return np.array(dl), np.array(err)


# -- hyperelliptic ----------------------------------------------------

def _pair_log(points) -> complex:
    return sum(np.log(a - b) for a, b in itertools.combinations(points, 2))


def _pair_dlog(points, weight: float = 0.25) -> np.ndarray:
    p = np.asarray(points, dtype=complex)
    diff = p[:, None] - p[None, :]
    np.fill_diagonal(diff, np.inf)
    return weight * np.sum(1.0 / diff, axis=1)


def tau_bergmann_hyperelliptic(curve: HyperellipticCurve, pd: PeriodData | None = None, fd: FDConfig | None = FDConfig()) -> TauResult:
    """``log tau_B = log det A + 1/4 sum_{m<n} log(lambda_m - lambda_n)``."""
    pd = period_matrices(curve) if pd is None else pd
    detA = np.linalg.det(pd.A)
    if abs(detA) < 1e-300:
        raise InputError("det A vanishes; the period quadrature failed")
    log_tau = np.log(detA) + 0.25 * _pair_log(curve.points)
    g = curve.genus
    pairs = np.prod([(a - b) ** 3 for a, b in itertools.combinations(curve.points, 2)])
    pow12 = detA**12 * pairs
    if fd is None:
        return TauResult(complex(log_tau), complex(pow12))

    def shifted(m, x):
        return _log_ratio(np.linalg.det(period_matrices(curve.moved(m, x)).A), detA)

    dl, err = _fd_all(shifted, curve.points, fd)
    return TauResult(complex(log_tau), complex(pow12), dl + _pair_dlog(curve.points), err)


def _theta_subset(B, subset: bool):
    consts = theta_constants(B)
    vals = np.array([v for _, v in consts])
    if not subset:
        mods = np.abs(vals)
        if mods.min() < 1e-8 * mods.max():
            raise VanishingThetaConstantError("an even theta constant vanishes; use the Thomae subset")
        return vals, np.arange(vals.size)
    g = np.asarray(B).shape[0]
    count = comb(2 * g + 2, g + 1) // 2
    idx = np.sort(np.argsort(-np.abs(vals))[:count])
    return vals[idx], idx


def tau_wirtinger(
    curve: HyperellipticCurve,
    pd: PeriodData | None = None,
    fd: FDConfig | None = FDConfig(),
    subset: bool = False,
) -> TauResult:
    """Wirtinger tau of a hyperelliptic curve.

    ``subset=False``: ``tau_W = tau_B * (prod_even Theta)^(-4/(4^g+2^g))``
    (genus <= 2 only).  ``subset=True``: the variant built from the
    ``C(2g+2, g+1)/2`` non-vanishing even constants with exponent
    ``-4/C(2g+2, g+1)``.
    """
    pd = period_matrices(curve) if pd is None else pd
    g = curve.genus
    if not subset and g > 2:
        raise VanishingThetaConstantError("for genus > 2 some even theta constants vanish; use subset=True")
    tb = tau_bergmann_hyperelliptic(curve, pd, fd)
    vals, idx = _theta_subset(pd.B, subset)
    expo = -4.0 / comb(2 * g + 2, g + 1) if subset else wirtinger_exponent(g)
    log_prod = np.sum(np.log(vals))
    log_tau = tb.log_tau + expo * log_prod
    pow12 = np.exp(12.0 * log_tau)
    if fd is None:
        return TauResult(complex(log_tau), complex(pow12))
    chars = [c for c, _ in theta_constants(pd.B)]
    used = [chars[i] for i in idx]

    def shifted(m, x):
        Bx = period_matrices(curve.moved(m, x)).B
        new = [riemann_theta(None, Bx, c).value for c in used]
        return sum(_log_ratio(a, b) for a, b in zip(new, vals))

    dl, err = _fd_all(shifted, curve.points, fd)
    return TauResult(complex(log_tau), complex(pow12), tb.dlog + expo * dl, np.abs(expo) * err + tb.dlog_error)


def wirtinger_closed_form_dlog(curve: HyperellipticCurve) -> np.ndarray:
    """``d log tau*_W / d lambda_m = sum_{n != m} 1 / (4 (2g+1) (lambda_m - lambda_n))``."""
    return _pair_dlog(curve.points, 1.0 / (4.0 * (2 * curve.genus + 1)))


def thomae_rhs(pd: PeriodData) -> np.ndarray:
    """``(det A)^2 / (2 pi i)^(2g) * prod_T prod_Tbar (lambda_i - lambda_j)`` over partitions."""
    lam = pd.curve.points
    g = pd.genus
    n = lam.size
    pref = np.linalg.det(pd.A) ** 2 / (2j * np.pi) ** (2 * g)
    out = []
    for rest in itertools.combinations(range(1, n), g):
        T = (0,) + rest
        Tb = [i for i in range(n) if i not in T]
        p = np.prod([lam[i] - lam[j] for i, j in itertools.combinations(T, 2)])
        p *= np.prod([lam[i] - lam[j] for i, j in itertools.combinations(Tb, 2)])
        out.append(pref * p)
    return np.array(out)


def thomae_check(pd: PeriodData) -> float:
    """Set-level Thomae identity: match ``{Theta^8}`` with ``{rhs^2}``; returns the worst relative error."""
    vals = np.array([v for _, v in theta_constants(pd.B)])
    rhs2 = thomae_rhs(pd) ** 2
    count = rhs2.size
    th8 = vals[np.argsort(-np.abs(vals))[:count]] ** 8
    cost = np.abs(th8[:, None] - rhs2[None, :]) / np.abs(rhs2[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# -- projective connections on hyperelliptic curves --------------------

@dataclass
class SvFayResult:
    schwarzian: complex
    B_m: complex
    characteristic: object


def svfay_bergmann(pd: PeriodData, m: int, char=None, jet_order: int = 6, eps: float = 1e-15) -> SvFayResult:
    """Bergmann projective connection at branch point ``m`` from an odd theta function.

    ``S_B = -2 T/H + {int H, x}`` with ``H = sum_i Theta*_i f_i`` and
    ``T = sum Theta*_ijk f_i f_j f_k`` (derivatives at ``z = 0``).  Without an
    explicit ``char`` the odd characteristic with the best-conditioned ``H(0)``
    is chosen, since ``H`` vanishes at the branch point tied to some of them.
    """
    g = pd.genus
    fj = local_expansions(pd, m, jet_order).jets
    f0 = np.array([j[0] for j in fj])
    candidates = [char] if char is not None else list(odd_characteristics(g))
    best = None
    for c in candidates:
        _, grad, _, third = theta_jet(None, pd.B, c, eps, order=3)
        h0 = complex(grad @ f0)
        quality = abs(h0) / (np.linalg.norm(grad) * np.linalg.norm(f0) + 1e-300)
        if best is None or quality > best[0]:
            best = (quality, c, grad, third)
    quality, c, grad, third = best
    if quality < 1e-6:
        raise InputError("the odd characteristic is singular at this branch point")
    H = Jet.constant(0.0, jet_order)
    for i in range(g):
        H = H + grad[i] * fj[i]
    T = Jet.constant(0.0, jet_order)
    for i, j, k in itertools.product(range(g), repeat=3):
        if third[i, j, k] != 0:
            T = T + third[i, j, k] * (fj[i] * fj[j] * fj[k])
    S = -2.0 * T[0] / H[0] + H.integ().schwarzian_at_zero()
    return SvFayResult(complex(S), complex(-S / 12.0), c)


def connection_hyperelliptic_svfay(pd: PeriodData, m: int, char=None) -> complex:
    """Bergmann coefficient ``B_m = -S_B / 12`` from :func:`svfay_bergmann`."""
    return svfay_bergmann(pd, m, char).B_m


def hyperelliptic_connections(curve: HyperellipticCurve, pd: PeriodData | None = None, method: str = "svfay"):
    """``(B, A)`` arrays of Bergmann and Wirtinger coefficients at every branch point.

    ``A_m = B_m - (1/(4^g+2^g)) f^T H f`` with ``H`` the summed Hessian of
    ``log Theta[beta](z)`` at ``z = 0`` over even ``beta``; this is the
    derivative of the theta-constant product via Rauch and the heat equation.
    """
    pd = period_matrices(curve) if pd is None else pd
    g = curve.genus
    if method == "genus1":
        _require_genus(curve, 1)
        B = np.array([connection_genus1(curve, m, pd) for m in range(curve.points.size)])
    elif method == "svfay":
        B = np.array([svfay_bergmann(pd, m).B_m for m in range(curve.points.size)])
    else:
        raise InputError("method must be 'svfay' or 'genus1'")
    Hs = even_theta_log_hessian(pd.B)
    corr = []
    for m in range(curve.points.size):
        f = local_expansions(pd, m, 0).values
        corr.append(f @ Hs @ f)
    A = B - np.array(corr) / (4.0**g + 2.0**g)
    return B, A


def wirtinger_correction_residual(curve: HyperellipticCurve, fd: FDConfig = FDConfig(), method: str = "svfay") -> float:
    """``max_m |A_m - B_m + 4/(4^g+2^g) d/dlambda_m log prod Theta_even|`` with FD on the last term."""
    pd = period_matrices(curve)
    g = curve.genus
    B, A = hyperelliptic_connections(curve, pd, method)
    vals = np.array([v for _, v in theta_constants(pd.B)])
    chars = list(even_characteristics(g))

    def shifted(m, x):
        Bx = period_matrices(curve.moved(m, x)).B
        return sum(_log_ratio(riemann_theta(None, Bx, c).value, v) for c, v in zip(chars, vals))

    dl, _ = _fd_all(shifted, curve.points, fd)
    return float(np.max(np.abs(A - B - wirtinger_exponent(g) * dl)))


# -- flatness ---------------------------------------------------------

class RationalFamily:
    """Genus-zero family parametrised by its (simple) branch points."""

    def __init__(self, R: RationalCovering, jet_order: int = 12):
        self.base = R.normalized()
        self.jet_order = jet_order
        self.points = np.array([b.lambda_m for b in branch_data(self.base, 3)])

    def coefficients(self, points):
        R = deform_to_branch_points(self.base, points)
        B = connection_coefficients_genus0(R, self.jet_order, reference=points)
        return {"B": B, "A": B}


class HyperellipticFamily:
    def __init__(self, curve: HyperellipticCurve, method: str = "svfay"):
        self.curve = curve
        self.method = method
        self.points = curve.points.copy()

    def coefficients(self, points):
        B, A = hyperelliptic_connections(self.curve.with_points(points), method=self.method)
        return {"B": B, "A": A}


def flatness_residual(family, m: int, n: int, which: str = "B", fd: FDConfig = FDConfig()) -> float:
    """``|dC_m/dlambda_n - dC_n/dlambda_m|`` by central differences."""
    pts = np.array(family.points, dtype=complex)

    def along(k):
        def g(x):
            p = pts.copy()
            p[k] = x
            return family.coefficients(p)[which]

        return fd_derivative(g, pts[k], fd)[0]

    dn = along(n)
    dm = along(m)
    return float(abs(dn[m] - dm[n]))


def flatness_matrix(family, which: str = "B", fd: FDConfig = FDConfig()) -> np.ndarray:
    """All antisymmetric parts ``dC_m/dlambda_n - dC_n/dlambda_m`` at once."""
    pts = np.array(family.points, dtype=complex)
    J = []
    for k in range(pts.size):
        def g(x, k=k):
            p = pts.copy()
            p[k] = x
            return family.coefficients(p)[which]

        J.append(fd_derivative(g, pts[k], fd)[0])
    J = np.array(J)  # J[n, m] = dC_m / dlambda_n
    return J - J.T
