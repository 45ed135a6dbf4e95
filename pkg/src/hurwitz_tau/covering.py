"""Genus-zero coverings ``lambda = R(z) = P(z) / Q(z)`` and their branch data.

Conventions
-----------
* ``deg P = N``, ``deg Q = N - 1``; the point ``z = oo`` is the preimage of
  ``lambda = oo`` on sheet 1, the finite poles of ``R`` give sheets 2..N.
* Branch data are sorted lexicographically by the critical value unless a
  ``reference`` ordering is supplied.
* The local parameter at a ramification point of index ``r`` is
  ``x = (lambda - lambda_m) ** (1 / r)`` with the principal root, so that
  ``dz/dx`` at the ramification point equals ``a_r ** (-1 / r)`` where
  ``a_r`` is the leading Taylor coefficient of ``R - lambda_m``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceError, InputError, PathCollisionError
from .numkit import Contour, Jet, polynomial_roots, root_multiplicities

Poly = np.polynomial.Polynomial


class RationalCovering:
    """Rational map of degree ``N`` with a simple pole at infinity."""

    def __init__(self, num, den, tol: float = 1e-10):
        p = np.trim_zeros(np.array(num, dtype=complex).ravel(), "b")
        q = np.trim_zeros(np.array(den, dtype=complex).ravel(), "b")
        if p.size == 0 or q.size == 0:
            raise InputError("numerator and denominator must be nonzero polynomials")
        if p.size != q.size + 1:
            raise InputError(
                f"need deg P = deg Q + 1, got deg P = {p.size - 1}, deg Q = {q.size - 1}"
            )
        self.P = Poly(p)
        self.Q = Poly(q)
        self.tol = tol
        poles = self.poles()
        scale = max(1.0, float(np.max(np.abs(poles)))) if poles.size else 1.0
        if poles.size > 1:
            d = np.abs(poles[:, None] - poles[None, :]) + np.eye(poles.size) * 1e300
            if d.min() < 1e-7 * scale:
                raise InputError("the poles of R must be simple")
        pnorm = float(np.sum(np.abs(p)))
        for q0 in poles:
            if abs(self.P(q0)) < tol * pnorm * max(1.0, abs(q0)) ** self.degree:
                raise InputError("P and Q share a root; the map has lower degree")
        self._dP = self.P.deriv()
        self._dQ = self.Q.deriv()
        self._W = self._dP * self.Q - self.P * self._dQ

    # -- basic data ---------------------------------------------------
    @property
    def degree(self) -> int:
        return self.P.degree()

    @property
    def num(self) -> np.ndarray:
        return self.P.coef.copy()

    @property
    def den(self) -> np.ndarray:
        return self.Q.coef.copy()

    def __call__(self, z):
        return self.P(z) / self.Q(z)

    def __repr__(self):
        return f"RationalCovering(num={self.num.tolist()}, den={self.den.tolist()})"

    def derivative(self, z):
        q = self.Q(z)
        return self._W(z) / q**2

    def second_derivative(self, z):
        q = self.Q(z)
        w = self._W(z)
        return self._W.deriv()(z) / q**2 - 2.0 * self._dQ(z) * w / q**3

    def poles(self) -> np.ndarray:
        if self.Q.degree() == 0:
            return np.zeros(0, dtype=complex)
        return polynomial_roots(self.Q.coef)

    def critical_points(self) -> list[tuple[complex, int]]:
        """Critical points with multiplicity ``r - 1``."""
        if self.degree < 2:
            return []
        return root_multiplicities(polynomial_roots(self._W.coef))

    def preimages(self, lam) -> np.ndarray:
        """Unordered roots of ``P - lam Q``."""
        return polynomial_roots((self.P - lam * self.Q).coef, cluster_tol=1e-9)

    def taylor(self, center, order: int) -> Jet:
        jp = Jet.from_polynomial(self.P.coef, center, order)
        jq = Jet.from_polynomial(self.Q.coef, center, order)
        return jp / jq

    def normalized(self) -> RationalCovering:
        """Same map with a monic numerator."""
        lead = self.P.coef[-1]
        return RationalCovering(self.P.coef / lead, self.Q.coef / lead, self.tol)

    def to_json(self) -> dict:
        from .serialize import encode_complex_list

        return {"num": encode_complex_list(self.num), "den": encode_complex_list(self.den)}

    @classmethod
    def from_json(cls, data: dict) -> RationalCovering:
        from .serialize import decode_complex_list

        try:
            return cls(decode_complex_list(data["num"]), decode_complex_list(data["den"]))
        except KeyError as exc:
            raise InputError(f"covering JSON is missing {exc}") from None


@dataclass
class BranchDatum:
    lambda_m: complex
    r: int
    critical_point: complex
    local_inverse: Jet
    shared: bool = False

    @property
    def dz_dx(self) -> complex:
        return complex(self.local_inverse[1])

    def schwarzian(self) -> complex:
        return self.local_inverse.schwarzian_at_zero()


def _local_inverse(R: RationalCovering, c: complex, lam: complex, r: int, order: int) -> tuple[Jet, complex]:
    t = R.taylor(c, order + r + 1).c
    a_r = t[r]
    if abs(a_r) == 0:
        raise InputError("ramification order is inconsistent with the Taylor data")
    u = Jet(t[r:] / a_r)
    phi_tail = u ** (1.0 / r) * (a_r ** (1.0 / r))
    phi = Jet(np.concatenate([[0.0], phi_tail.c]))
    w = phi.reversion().truncate(order)
    w.c[0] = c
    return w, a_r


def _reorder_to_reference(values: np.ndarray, reference) -> np.ndarray:
    ref = np.asarray(reference, dtype=complex)
    if ref.size != values.size:
        raise InputError("reference ordering has the wrong length")
    cost = np.abs(values[None, :] - ref[:, None])
    rows, cols = linear_sum_assignment(cost)
    return cols[np.argsort(rows)]


def branch_data(R: RationalCovering, jet_order: int = 12, reference=None, tol: float = 1e-8) -> list[BranchDatum]:
    """Critical values, ramification indices and local inverse jets ``z(x_m)``."""
    if jet_order < 3:
        raise InputError("jet order must be at least 3")
    crit = R.critical_points()
    total = sum(m for _, m in crit)
    if total != 2 * R.degree - 2:
        raise InputError("Riemann-Hurwitz count failed: critical points were lost")
    out: list[BranchDatum] = []
    for c, mult in crit:
        lam = complex(R(c))
        if not np.isfinite(lam) or abs(lam) > 1e12:
            raise InputError("a branch point lies at (numerical) infinity")
        jet, _ = _local_inverse(R, c, lam, mult + 1, jet_order)
        out.append(BranchDatum(lam, mult + 1, complex(c), jet))
    lams = np.array([b.lambda_m for b in out])
    scale = max(1.0, float(np.max(np.abs(lams)))) if lams.size else 1.0
    for i, j in itertools.combinations(range(len(out)), 2):
        if abs(lams[i] - lams[j]) < tol * scale:
            out[i].shared = out[j].shared = True
    if reference is not None:
        idx = _reorder_to_reference(lams, reference)
    else:
        idx = np.lexsort((lams.imag, lams.real))
    return [out[i] for i in idx]


def branch_points(R: RationalCovering, reference=None) -> np.ndarray:
    return np.array([b.lambda_m for b in branch_data(R, 3, reference=reference)])


@dataclass
class InfinityExpansion:
    """Inverse ``z(zeta)`` near the preimage of infinity on one sheet.

    For sheet 1 ``z`` has a pole; ``jet`` then stores ``zeta * z(zeta)``.
    """

    sheet: int
    jet: Jet
    pole: bool
    point: complex | None = None

    @property
    def residue(self) -> complex:
        """``dz/dzeta`` at 0 for finite sheets, the pole coefficient for sheet 1."""
        return complex(self.jet[0] if self.pole else self.jet[1])


def infinity_series(R: RationalCovering, sheet: int, jet_order: int = 12) -> InfinityExpansion:
    """Expansion in ``zeta = 1 / lambda`` on a given sheet (1-based)."""
    N = R.degree
    if not 1 <= sheet <= N:
        raise InputError(f"sheet must be in 1..{N}")
    K = jet_order
    if sheet == 1:
        prev = Jet(R.P.coef[::-1], order=K + 1)
        qrev = Jet(R.Q.coef[::-1], order=K + 1)
        # zeta = y * Qrev(y) / Prev(y) with y = 1/z
        zeta_of_y = Jet(np.concatenate([[0.0], (qrev / prev).c[:-1]]))
        y = zeta_of_y.reversion()
        zz = Jet(y.c[1:]).reciprocal().truncate(K)
        return InfinityExpansion(1, zz, True, None)
    q = R.poles()[sheet - 2]
    jq = Jet.from_polynomial(R.Q.coef, q, K + 1)
    jp = Jet.from_polynomial(R.P.coef, q, K + 1)
    inv = jq / jp
    inv.c[0] = 0.0
    w = inv.reversion().truncate(K)
    w.c[0] = q
    return InfinityExpansion(sheet, w, False, complex(q))


# -- sheet continuation ------------------------------------------------

@dataclass
class SheetConfiguration:
    basepoint: complex
    roots: np.ndarray
    sqrt_dz: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return self.roots.size


def _newton_polish(R: RationalCovering, lam: complex, z: np.ndarray, maxiter: int = 8):
    F = R.P - lam * R.Q
    dF = F.deriv()
    scale = max(1.0, float(np.max(np.abs(z))))
    for it in range(maxiter):
        step = F(z) / dF(z)
        if not np.all(np.isfinite(step)):
            return z, False
        z = z - step
        if np.max(np.abs(step)) <= 1e-14 * scale:
            return z, True
    return z, np.max(np.abs(step)) <= 1e-10 * scale


def _min_sep(z: np.ndarray) -> float:
    if z.size < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices(z.size)] = np.inf
    return float(d.min())


def _dz_dlambda(R: RationalCovering, z):
    return 1.0 / R.derivative(z)


def track_sheets(R: RationalCovering, path: Contour, roots, sqrt_dz=None, min_step: float = 1e-11):
    """Analytically continue the preimages ``roots`` (and optionally the
    square roots of ``dz/dlambda``) along ``path``.

    Returns the continued roots (same labels) and square roots.
    """
    z = np.array(roots, dtype=complex)
    s = None if sqrt_dz is None else np.array(sqrt_dz, dtype=complex)
    for piece in path.pieces:
        t, dt = 0.0, 0.05
        lam = complex(piece.point(0.0))
        while t < 1.0:
            dt = min(dt, 1.0 - t)
            t_new = t + dt
            lam_new = complex(piece.point(t_new))
            dz = _dz_dlambda(R, z)
            pred = z + (lam_new - lam) * dz
            cand, ok = _newton_polish(R, lam_new, pred)
            sep_old = _min_sep(z)
            good = ok and np.all(np.abs(cand - z) < 0.25 * sep_old) and np.all(np.abs(cand - pred) < 0.05 * sep_old)
            if good and s is not None:
                root = np.sqrt(_dz_dlambda(R, cand))
                flip = np.abs(root - s) > np.abs(root + s)
                root = np.where(flip, -root, root)
                good = np.all(np.abs(root - s) < 0.25 * np.abs(s))
            if good:
                z, lam, t = cand, lam_new, t_new
                if s is not None:
                    s = root
                dt *= 1.5
            else:
                dt *= 0.5
                if dt < min_step:
                    raise PathCollisionError(f"sheet continuation stalled near lambda = {lam_new}")
    return z, s


def _ray_clearance(base: complex, direction: complex, pts: np.ndarray) -> float:
    v = pts - base
    t = np.maximum((v * np.conj(direction)).real, 0.0)
    return float(np.min(np.abs(v - t * direction))) if pts.size else np.inf


def sheet_configuration(R: RationalCovering, basepoint, with_sqrt: bool = False) -> SheetConfiguration:
    """Label the preimages of a base point.

    Sheet 1 is the root which escapes to ``z = oo`` when ``lambda`` moves to
    infinity along the ray with the best clearance from the branch points;
    the remaining roots are sorted lexicographically.
    """
    lam0 = complex(basepoint)
    bps = branch_points(R)
    if bps.size and np.min(np.abs(bps - lam0)) < 1e-8 * max(1.0, abs(lam0)):
        raise InputError("the base point coincides with a branch point")
    roots = R.preimages(lam0)
    if R.degree == 1:
        conf = roots
    else:
        angles = np.exp(2j * np.pi * np.arange(64) / 64)
        clear = [_ray_clearance(lam0, u, bps) for u in angles]
        u = angles[int(np.argmax(clear))]
        far = lam0 + u * 10.0 * (np.max(np.abs(bps - lam0)) + 1.0)
        zf, _ = track_sheets(R, Contour.polyline([lam0, far]), roots)
        poles = R.poles()
        dist = np.min(np.abs(zf[:, None] - poles[None, :]), axis=1)
        first = int(np.argmax(dist))
        rest = np.delete(roots, first)
        rest = rest[np.lexsort((rest.imag, rest.real))]
        conf = np.concatenate([[roots[first]], rest])
    sq = np.sqrt(_dz_dlambda(R, conf)) if with_sqrt else None
    return SheetConfiguration(lam0, conf, sq)


def _match(a: np.ndarray, b: np.ndarray) -> list[int]:
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = [0] * a.size
    for r, c in zip(rows, cols):
        perm[r] = int(c)
    return perm


def continue_sheets(R: RationalCovering, path: Contour, start: SheetConfiguration):
    """Continue a labelled configuration along ``path``.

    Returns the continued configuration and, for a closed path, the
    permutation ``sigma`` with ``sigma[i] = j`` when sheet ``i`` arrives at
    the starting position of sheet ``j``; ``None`` for open paths.
    """
    if abs(path.start - start.basepoint) > 1e-12 * max(1.0, abs(start.basepoint)):
        raise InputError("the path must start at the configuration's base point")
    z, s = track_sheets(R, path, start.roots, start.sqrt_dz)
    end = SheetConfiguration(path.end, z, s)
    perm = _match(z, start.roots) if path.is_closed() else None
    return end, perm


def default_basepoint(points) -> complex:
    """A base point whose straight rays to every branch point stay clear of the others."""
    pts = np.asarray(points, dtype=complex)
    center = pts.mean()
    radius = 1.5 * float(np.max(np.abs(pts - center))) + 1.0
    best, best_val = None, -1.0
    for k in range(48):
        b = center + radius * np.exp(1j * (2 * np.pi * k / 48 + 0.1))
        val = np.inf
        for m, target in enumerate(pts):
            seg = target - b
            others = np.delete(pts, m) - b
            t = np.clip((others * np.conj(seg)).real / abs(seg) ** 2, 0.0, 1.0)
            if others.size:
                val = min(val, float(np.min(np.abs(others - t * seg))))
        if val > best_val:
            best, best_val = b, val
    return complex(best)


def loop_radius(points, m: int) -> float:
    pts = np.asarray(points, dtype=complex)
    others = np.delete(pts, m)
    return 0.2 * float(np.min(np.abs(others - pts[m]))) if others.size else 0.5


def monodromy_permutations(R: RationalCovering, basepoint=None, reference=None):
    """Permutation of the sheets for the standard loop around each branch point."""
    bd = branch_data(R, 3, reference=reference)
    pts = np.array([b.lambda_m for b in bd])
    lam0 = default_basepoint(pts) if basepoint is None else complex(basepoint)
    start = sheet_configuration(R, lam0)
    perms = []
    for m in range(pts.size):
        loop = Contour.loop(lam0, pts[m], loop_radius(pts, m))
        _, perm = continue_sheets(R, loop, start)
        perms.append(tuple(perm))
    return lam0, perms


def _conjugate_equal(a: list[tuple], b: list[tuple]) -> bool:
    n = len(a[0]) if a else 0
    for pi in itertools.permutations(range(n)):
        inv = np.argsort(pi)
        if all(tuple(pi[p[inv[i]]] for i in range(n)) == tuple(q) for p, q in zip(a, b)):
            return True
    return False


def deform_to_branch_points(
    R: RationalCovering,
    target,
    tol: float = 1e-12,
    max_newton: int = 30,
    verify_monodromy: bool = False,
) -> RationalCovering:
    """Move the (simple) branch points of ``R`` to ``target``.

    ``target[m]`` is the new position of ``branch_data(R)[m]``.  Works in the
    gauge where ``P`` is monic and the two leading coefficients of ``Q`` are
    frozen, which fixes the freedom ``z -> a z + b``.
    """
    Rn = R.normalized()
    bd = branch_data(Rn, 3)
    if any(b.r != 2 for b in bd):
        raise InputError("deformation is implemented for simple branch points only")
    if any(b.shared for b in bd):
        raise InputError("branch points must be distinct")
    target = np.array(target, dtype=complex)
    lam = np.array([b.lambda_m for b in bd])
    if target.shape != lam.shape:
        raise InputError(f"expected {lam.size} target branch points")
    crit = np.array([b.critical_point for b in bd])
    N = Rn.degree
    p = Rn.P.coef.copy()
    q = Rn.Q.coef.copy()
    sep = _min_sep(target)
    if sep < 1e-10:
        raise InputError("target branch points must be distinct")
    scale = max(1.0, float(np.max(np.abs(target))))
    n_steps = max(1, int(np.ceil(np.max(np.abs(target - lam)) / (0.2 * _min_sep(lam)))))
    nfree_q = N - 2

    def unpack(theta):
        pp = p.copy()
        qq = q.copy()
        pp[:N] = theta[:N]
        if nfree_q > 0:
            qq[:nfree_q] = theta[N:]
        return pp, qq

    theta = np.concatenate([p[:N], q[:nfree_q]])
    lam_cur = lam.copy()
    s = 0
    frac = 0.0
    dfrac = 1.0 / n_steps
    while frac < 1.0 - 1e-15:
        dfrac = min(dfrac, 1.0 - frac)
        goal = lam + (frac + dfrac) * (target - lam)
        th, cr = theta.copy(), crit.copy()
        ok = False
        for _ in range(max_newton):
            pp, qq = unpack(th)
            Pp, Qp = Poly(pp), Poly(qq)
            W = Pp.deriv() * Qp - Pp * Qp.deriv()
            dW = W.deriv()
            for _ in range(6):
                cr = cr - W(cr) / dW(cr)
            Pc, Qc = Pp(cr), Qp(cr)
            res = Pc / Qc - goal
            if np.max(np.abs(res)) < tol * scale:
                ok = True
                break
            J = np.empty((N + nfree_q, N + nfree_q), dtype=complex)
            for k in range(N):
                J[:, k] = cr**k / Qc
            for k in range(nfree_q):
                J[:, N + k] = -Pc * cr**k / Qc**2
            try:
                delta = np.linalg.solve(J, res)
            except np.linalg.LinAlgError:
                break
            th = th - delta
            if not np.all(np.isfinite(th)):
                break
        if ok and _min_sep(cr) > 1e-6:
            theta, crit, frac = th, cr, frac + dfrac
            lam_cur = goal
            dfrac *= 1.5
        else:
            dfrac *= 0.5
            s += 1
            if dfrac < 1e-8 or s > 200:
                raise ConvergenceError("deformation failed to follow the target path")
    pp, qq = unpack(theta)
    out = RationalCovering(pp, qq, R.tol)
    if verify_monodromy:
        _, before = monodromy_permutations(Rn, reference=lam)
        _, after = monodromy_permutations(out, reference=lam_cur)
        if not _conjugate_equal(before, after):
            raise ConvergenceError("deformation changed the monodromy: a branch cut was crossed")
    return out
