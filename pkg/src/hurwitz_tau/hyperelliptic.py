"""Hyperelliptic curves ``nu^2 = prod (lambda - lambda_m)`` and their periods.

Branch points are listed in *chain order*: the cuts are the straight
segments ``[l1, l2], [l3, l4], ..., [l_{2g+1}, l_{2g+2}]`` and the gaps
``[l2, l3], ..., [l_{2g}, l_{2g+1}]``.  The polyline through all points
must not self-intersect.

Canonical basis: ``a_i`` encircles cut ``i`` counterclockwise; ``b_i`` is the
sum of the loops around gaps ``i, ..., g``.  Orientation of the ``b``
cycles is fixed so that the Riemann matrix has positive imaginary part.
Holomorphic differentials are ``v_i = sum_j C[i, j] lambda^j dlambda / nu``
with ``C = (A^-1)^T`` and ``A[a, j] = \\oint_{a_a} lambda^j dlambda / nu``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError
from .numkit import Jet
from .serialize import decode_complex_list, encode_complex_list


def _seg_dist(p1, p2, q1, q2) -> float:
    """Distance between two planar segments given as complex endpoints."""

    def pt_seg(p, a, b):
        d = b - a
        t = 0.0 if d == 0 else min(1.0, max(0.0, ((p - a) * np.conj(d)).real / abs(d) ** 2))
        return abs(p - (a + t * d))

    def cross(u, v):
        return (np.conj(u) * v).imag

    d1, d2 = p2 - p1, q2 - q1
    denom = cross(d1, d2)
    if denom != 0:
        t = cross(q1 - p1, d2) / denom
        s = cross(q1 - p1, d1) / denom
        if 0 <= t <= 1 and 0 <= s <= 1:
            return 0.0
    return min(pt_seg(p1, q1, q2), pt_seg(p2, q1, q2), pt_seg(q1, p1, p2), pt_seg(q2, p1, p2))


class HyperellipticCurve:
    """Two-sheeted curve with ``2g + 2`` finite branch points in chain order."""

    def __init__(self, branch_points, clearance: float = 1e-3):
        pts = np.array(branch_points, dtype=complex).ravel()
        if pts.size < 4 or pts.size % 2:
            raise InputError("a hyperelliptic curve needs an even number >= 4 of branch points")
        d = np.abs(pts[:, None] - pts[None, :])
        d[np.diag_indices(pts.size)] = np.inf
        scale = max(1.0, float(np.max(np.abs(pts))))
        if d.min() < 1e-8 * scale:
            raise InputError("branch points must be distinct")
        n = pts.size
        for i, j in itertools.combinations(range(n - 1), 2):
            if j == i + 1:
                continue
            if _seg_dist(pts[i], pts[i + 1], pts[j], pts[j + 1]) < clearance * float(d.min()):
                raise InputError("branch points are not in chain position (the polyline self-intersects)")
        self.points = pts

    @property
    def genus(self) -> int:
        return self.points.size // 2 - 1

    def __repr__(self):
        return f"HyperellipticCurve({self.points.tolist()})"

    def with_points(self, points) -> HyperellipticCurve:
        return HyperellipticCurve(points)

    def moved(self, m: int, value) -> HyperellipticCurve:
        p = self.points.copy()
        p[m] = value
        return HyperellipticCurve(p)

    def to_json(self) -> dict:
        return {"branch_points": encode_complex_list(self.points)}

    @classmethod
    def from_json(cls, data: dict) -> HyperellipticCurve:
        try:
            return cls(decode_complex_list(data["branch_points"]))
        except KeyError:
            raise InputError("curve JSON needs a 'branch_points' list") from None

    # -- the global branch of nu ----------------------------------------
    def _cut_factor(self, i: int, lam):
        """Branch of ``sqrt((lam - l_{2i+1})(lam - l_{2i+2}))`` cut along cut ``i`` (0-based)."""
        a, b = self.points[2 * i], self.points[2 * i + 1]
        c, r = 0.5 * (a + b), 0.5 * (b - a)
        w = np.asarray(lam, dtype=complex) - c
        return w * np.sqrt(1.0 - (r / w) ** 2)

    def nu(self, lam):
        """Branch of ``nu`` analytic off the cuts, ``nu ~ lam^(g+1)`` at infinity."""
        out = np.ones_like(np.asarray(lam, dtype=complex))
        for i in range(self.genus + 1):
            out = out * self._cut_factor(i, lam)
        return out


@dataclass
class PeriodData:
    curve: HyperellipticCurve
    A: np.ndarray  # a-periods of lambda^j dlambda / nu, rows = cycles
    Bp: np.ndarray  # b-periods of the same differentials
    C: np.ndarray  # normalisation, v = C @ (lambda^j dlambda / nu)
    B: np.ndarray  # Riemann matrix

    @property
    def genus(self) -> int:
        return self.A.shape[0]

    def to_json(self) -> dict:
        from .serialize import encode_complex_matrix

        return {"A": encode_complex_matrix(self.A), "B": encode_complex_matrix(self.B)}


def _adaptive_midpoint(func, tol: float, n0: int = 32, nmax: int = 1 << 17):
    """``int_0^pi func(theta) dtheta`` for an even periodic integrand (midpoint rule)."""
    n = n0
    prev = None
    while n <= nmax:
        th = (np.arange(n) + 0.5) * np.pi / n
        val = func(th).sum(axis=-1) * np.pi / n
        if prev is not None and np.max(np.abs(val - prev)) <= tol * max(1.0, float(np.max(np.abs(val)))):
            return val
        prev = val
        n *= 2
    raise ConvergenceError("period quadrature did not converge")


def _powers(lam, g):
    return np.stack([lam**j for j in range(g)])


def _a_period(curve: HyperellipticCurve, i: int, tol: float):
    g = curve.genus
    a, b = curve.points[2 * i], curve.points[2 * i + 1]
    c, r = 0.5 * (a + b), 0.5 * (b - a)

    def integrand(th):
        lam = c + r * np.cos(th)
        G = np.ones_like(lam)
        for j in range(g + 1):
            if j != i:
                G = G * curve._cut_factor(j, lam)
        return _powers(lam, g) / G

    return 2j * _adaptive_midpoint(integrand, tol)


def _gap_period(curve: HyperellipticCurve, k: int, tol: float):
    """Loop around the gap between cut ``k - 1`` and cut ``k`` (k = 1..g)."""
    g = curve.genus
    p = curve.points
    lo, hi = p[2 * k - 1], p[2 * k]
    c, r = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def integrand(th):
        lam = c + r * np.cos(th)
        ref = curve.nu(lam) / (1j * r * np.sin(th))
        S = np.sqrt((lam - p[2 * k - 2]) * (lam - p[2 * k + 1]))
        for j in range(g + 1):
            if j not in (k - 1, k):
                S = S * curve._cut_factor(j, lam)
        S = np.where(np.abs(S - ref) <= np.abs(S + ref), S, -S)
        return _powers(lam, g) / S

    return 2j * _adaptive_midpoint(integrand, tol)


def period_matrices(curve: HyperellipticCurve, tol: float = 1e-13) -> PeriodData:
    """Periods of ``lambda^j dlambda / nu`` and the normalised Riemann matrix."""
    g = curve.genus
    A = np.array([_a_period(curve, i, tol) for i in range(g)])
    gaps = np.array([_gap_period(curve, k, tol) for k in range(1, g + 1)])
    Bp = np.array([gaps[i:].sum(axis=0) for i in range(g)])
    C = np.linalg.inv(A).T
    best = None
    for signs in itertools.product((1.0, -1.0), repeat=g):
        s = np.array(signs)
        Bm = C @ (s[:, None] * Bp).T
        asym = np.max(np.abs(Bm - Bm.T)) / max(1.0, np.max(np.abs(Bm)))
        if best is None or asym < best[0]:
            best = (asym, s)
        if asym < 1e-9:
            break
    asym, s = best
    if asym > 1e-7:
        raise ConvergenceError(f"Riemann matrix is not symmetric (defect {asym:.2e})")
    Bp = s[:, None] * Bp
    Bm = C @ Bp.T
    if np.min(np.linalg.eigvalsh(Bm.imag)) <= 0:
        Bp, Bm = -Bp, -Bm
    Bm = 0.5 * (Bm + Bm.T)
    if np.min(np.linalg.eigvalsh(Bm.imag)) <= 0:
        raise ConvergenceError("Im B is not positive definite; check the chain order")
    return PeriodData(curve, A, Bp, C, Bm)


@dataclass
class LocalDifferentials:
    """Jets of the normalised differentials in a local parameter.

    At a branch point ``lambda_m`` the parameter is ``x = sqrt(lambda - lambda_m)``
    and ``v_i = f_i(x) dx``.  At infinity on sheet ``s`` the parameter is
    ``zeta = 1 / lambda`` and ``v_i = h_i(zeta) dzeta``.
    """

    jets: list[Jet]

    @property
    def values(self) -> np.ndarray:
        return np.array([j[0] for j in self.jets])


def local_expansions(pd: PeriodData, m: int, jet_order: int = 8) -> LocalDifferentials:
    """``f_i(x)`` near branch point ``m`` (0-based)."""
    curve = pd.curve
    g = curve.genus
    lm = curve.points[m]
    x = Jet.variable(jet_order)
    lam = x * x + lm
    prod = Jet.constant(1.0, jet_order)
    for n, ln in enumerate(curve.points):
        if n != m:
            prod = prod * (lam - ln)
    u_inv = prod ** (-0.5)
    basis = [lam**j for j in range(g)]
    jets = []
    for i in range(g):
        acc = Jet.constant(0.0, jet_order)
        for j in range(g):
            acc = acc + basis[j] * pd.C[i, j]
        jets.append(2.0 * acc * u_inv)
    return LocalDifferentials(jets)


def infinity_expansions(pd: PeriodData, sheet: int, jet_order: int = 8) -> LocalDifferentials:
    """``h_i(zeta)`` at the point over infinity on sheet 1 (``nu ~ +lambda^(g+1)``) or 2."""
    if sheet not in (1, 2):
        raise InputError("a hyperelliptic curve has sheets 1 and 2")
    g = pd.curve.genus
    z = Jet.variable(jet_order)
    s = Jet.constant(1.0, jet_order)
    for ln in pd.curve.points:
        s = s * (1.0 - ln * z)
    s_inv = s ** (-0.5)
    sign = -1.0 if sheet == 1 else 1.0
    jets = []
    for i in range(g):
        acc = Jet.constant(0.0, jet_order)
        for j in range(g):
            acc = acc + pd.C[i, j] * (z ** (g - 1 - j))
        jets.append(sign * acc * s_inv)
    return LocalDifferentials(jets)


def rauch_derivative(pd: PeriodData, m: int) -> np.ndarray:
    """Closed-form ``dB_ij / dlambda_m = pi i f_i(0) f_j(0)``."""
    f = local_expansions(pd, m, 1).values
    return np.pi * 1j * np.outer(f, f)
