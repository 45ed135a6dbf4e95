"""Riemann-Hilbert data of a genus-zero covering.

The ``N x N`` matrix

    Psi_jk(lambda) = (lambda - lambda0) sqrt(z_k'(lambda)) sqrt(z_j'(lambda0)) / (z_k(lambda) - w_j)

(``z_k`` the preimages of ``lambda``, ``w_j`` those of the base point
``lambda0``, ``' = d/dlambda``) has unit determinant, equals the identity at
``lambda0`` and has quasi-permutation monodromy.  Its logarithmic
derivative is a Fuchsian system whose residues ``A_m`` satisfy the
Schlesinger equations; the Jimbo-Miwa tau function is defined by
``d log tau_JM / d lambda_m = 1/2 res_{lambda_m} tr(Psi_lambda Psi^-1)^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covering import (
    RationalCovering,
    SheetConfiguration,
    branch_data,
    default_basepoint,
    loop_radius,
    sheet_configuration,
    track_sheets,
)
from .errors import InputError
from .numkit import Contour, contour_integral


class RiemannHilbertProblem:
    """Psi-matrix of a covering with a fixed base point and sheet labelling."""

    def __init__(self, R: RationalCovering, basepoint=None):
        self.R = R
        bd = branch_data(R, 4)
        self.branch_points = np.array([b.lambda_m for b in bd])
        if any(b.r != 2 for b in bd):
            raise InputError("the Riemann-Hilbert construction is implemented for simple branch points")
        self.basepoint = default_basepoint(self.branch_points) if basepoint is None else complex(basepoint)
        self.config: SheetConfiguration = sheet_configuration(R, self.basepoint, with_sqrt=True)
        self.w = self.config.roots
        self.s0 = self.config.sqrt_dz

    @property
    def size(self) -> int:
        return self.w.size

    def _continue(self, lam) -> tuple[np.ndarray, np.ndarray]:
        path = Contour.polyline([self.basepoint, complex(lam)])
        return track_sheets(self.R, path, self.w, self.s0)

    def _matrix(self, lam, z, s) -> np.ndarray:
        lam = complex(lam)
        return (lam - self.basepoint) * np.outer(self.s0, s) / (z[None, :] - self.w[:, None])

    def psi(self, lam) -> np.ndarray:
        """``Psi`` continued along the straight segment from the base point."""
        lam = complex(lam)
        if abs(lam - self.basepoint) < 1e-14 * max(1.0, abs(lam)):
            return np.eye(self.size, dtype=complex)
        z, s = self._continue(lam)
        return self._matrix(lam, z, s)

    def log_derivative(self, lam) -> np.ndarray:
        """``Psi_lambda Psi^-1``; single valued, built from the unordered preimages."""
        lam = complex(lam)
        R = self.R
        z = R.preimages(lam)
        d1 = R.derivative(z)
        d2 = R.second_derivative(z)
        C = (lam - self.basepoint) / (z[None, :] - self.w[:, None])
        Cl = 1.0 / (z[None, :] - self.w[:, None]) - (lam - self.basepoint) / d1[None, :] / (z[None, :] - self.w[:, None]) ** 2
        E = -d2 / (2.0 * d1**2)
        M = (Cl + C * E[None, :]) @ np.linalg.inv(C)
        return self.s0[:, None] * M / self.s0[None, :]

    def monodromy(self, m: int) -> np.ndarray:
        """Monodromy matrix ``M_m`` with ``Psi`` continued around loop ``m`` equal to ``Psi M_m``.

        The loop runs from the base point straight towards ``lambda_m``,
        once counterclockwise around it and back.
        """
        lam_m = self.branch_points[m]
        loop = Contour.loop(self.basepoint, lam_m, loop_radius(self.branch_points, m))
        z, s = track_sheets(self.R, loop, self.w, self.s0)
        N = self.size
        M = np.zeros((N, N), dtype=complex)
        for k in range(N):
            j = int(np.argmin(np.abs(self.w - z[k])))
            # column k of Psi becomes column j of Psi times s_end / s0
            M[j, k] = s[k] / self.s0[j]
        return M

    def monodromies(self) -> list[np.ndarray]:
        return [self.monodromy(m) for m in range(self.branch_points.size)]

    def loop_order(self) -> list[int]:
        """Branch point indices sorted so that the ordered monodromy product is the identity.

        Loops are ordered by decreasing argument of ``lambda_m - lambda0``; the
        product ``M_{i_1} M_{i_2} ...`` over this order equals the loop around
        all branch points, which is trivial.
        """
        ang = np.angle(self.branch_points - self.basepoint)
        ref = np.angle(self.basepoint - self.branch_points.mean())
        return list(np.argsort(-np.mod(ang - ref, 2 * np.pi)))

    def residue_matrices(self, tol: float = 1e-12) -> list[np.ndarray]:
        out = []
        for m, lam_m in enumerate(self.branch_points):
            rad = loop_radius(self.branch_points, m)
            val = contour_integral(self.log_derivative, Contour.circle(lam_m, rad), tol=tol)
            out.append(val / (2j * np.pi))
        return out

    def trace_square(self, lam) -> complex:
        L = self.log_derivative(lam)
        return complex(np.trace(L @ L))


def bergmann_pair_sum(R: RationalCovering, lam) -> complex:
    """``sum_{j != k} z_j' z_k' / (z_j - z_k)^2`` over the sheets at ``lam``."""
    z = R.preimages(complex(lam))
    dz = 1.0 / R.derivative(z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    K = np.outer(dz, dz) / diff**2
    np.fill_diagonal(K, 0.0)
    return complex(K.sum())


def trace_identity_residual(R: RationalCovering, lam, problem: RiemannHilbertProblem | None = None) -> float:
    """``|1/2 tr(Psi_lambda Psi^-1)^2 + 1/2 sum_{j != k} B(z_j, z_k) / dlambda^2|``."""
    rh = RiemannHilbertProblem(R) if problem is None else problem
    return abs(0.5 * rh.trace_square(lam) + 0.5 * bergmann_pair_sum(R, lam))


@dataclass
class JMResult:
    from_schwarzian: complex
    from_residue: complex

    @property
    def residual(self) -> float:
        return abs(self.from_schwarzian - self.from_residue)


def jm_log_derivative(R: RationalCovering, m: int, problem: RiemannHilbertProblem | None = None, tol: float = 1e-12) -> JMResult:
    """``d log tau_JM / d lambda_m`` two ways.

    Directly as ``1/2 res tr(Psi_lambda Psi^-1)^2`` by quadrature, and in
    closed form as ``+{z, x_m}|_0 / 24``, i.e. ``-B_m / 2``.
    """
    rh = RiemannHilbertProblem(R) if problem is None else problem
    bd = branch_data(R, 6)
    lam_m = bd[m].lambda_m
    rad = loop_radius(rh.branch_points, int(np.argmin(np.abs(rh.branch_points - lam_m))))
    val = contour_integral(rh.trace_square, Contour.circle(lam_m, rad), tol=tol)
    res = 0.5 * val / (2j * np.pi)
    return JMResult(complex(bd[m].schwarzian() / 24.0), complex(res))


def psi_matrix(R: RationalCovering, lam, basepoint=None) -> np.ndarray:
    """Convenience wrapper: ``Psi(lam)`` for the covering ``R``."""
    return RiemannHilbertProblem(R, basepoint).psi(lam)


def cauchy_determinant_check(z, mu) -> float:
    """Relative residual of ``det 1/(z_j - mu_k) = prod_{j<k} (z_j - z_k)(mu_k - mu_j) / prod_{j,k} (z_j - mu_k)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    mu = np.atleast_1d(np.asarray(mu, dtype=complex))
    if z.shape != mu.shape:
        raise InputError("z and mu must have the same length")
    D = z[:, None] - mu[None, :]
    if np.min(np.abs(D)) == 0:
        raise InputError("singular configuration: some z_j equals some mu_k")
    lhs = np.linalg.det(1.0 / D)
    num = 1.0 + 0j
    for j in range(z.size):
        for k in range(j + 1, z.size):
            num *= (z[j] - z[k]) * (mu[k] - mu[j])
    rhs = num / np.prod(D)
    return float(abs(lhs - rhs) / max(abs(rhs), 1e-300))


@dataclass
class MonodromyRep:
    basepoint: complex
    branch_points: np.ndarray
    matrices: list[np.ndarray]
    order: list[int]

    def product(self) -> np.ndarray:
        N = self.matrices[0].shape[0]
        P = np.eye(N, dtype=complex)
        for i in self.order:
            P = P @ self.matrices[i]
        return P

    def integer_matrices(self) -> list[list[list[int]]]:
        return [np.rint(M.real).astype(int).tolist() for M in self.matrices]

    def entry_defect(self) -> float:
        """Largest distance of an entry from the nearest of 0, 1, -1."""
        worst = 0.0
        for M in self.matrices:
            d = np.min(np.abs(M[..., None] - np.array([0.0, 1.0, -1.0])), axis=-1)
            worst = max(worst, float(d.max()))
        return worst

    def is_quasi_permutation(self) -> bool:
        for M in self.matrices:
            nz = np.abs(M) > 0.5
            if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
                return False
        return True


def monodromy_rep(R: RationalCovering, basepoint=None) -> MonodromyRep:
    rh = RiemannHilbertProblem(R, basepoint)
    return MonodromyRep(rh.basepoint, rh.branch_points, rh.monodromies(), rh.loop_order())


def schlesinger_residues(R: RationalCovering, basepoint=None, probes: int = 3, tol: float = 1e-7, seed: int = 0):
    """Residues ``A_m`` of ``Psi_lambda Psi^-1``, checked against the partial-fraction form."""
    from .errors import VerificationError

    rh = RiemannHilbertProblem(R, basepoint)
    A = rh.residue_matrices()
    rng = np.random.default_rng(seed)
    pts = rh.branch_points
    c, s = pts.mean(), 1.0 + float(np.max(np.abs(pts - pts.mean())))
    worst = 0.0
    done = 0
    while done < probes:
        lam = c + s * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        if np.min(np.abs(pts - lam)) < 0.1 * s:
            continue
        recon = sum(Am / (lam - p) for Am, p in zip(A, pts))
        worst = max(worst, float(np.max(np.abs(rh.log_derivative(lam) - recon))))
        done += 1
    if worst > tol:
        raise VerificationError(f"partial-fraction residual {worst:.2e} exceeds {tol:.1e}")
    return A
