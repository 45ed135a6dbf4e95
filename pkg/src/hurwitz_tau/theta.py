"""Riemann theta functions with half-integer characteristics.

Convention::

    Theta[alpha; beta](z | B) = sum_n exp(pi i (n+alpha).B.(n+alpha) + 2 pi i (n+alpha).(z+beta))

The lattice sum is truncated to an ellipsoid centred at the maximum of the
summand's modulus; the radius is the smallest one whose rigorous tail bound
is below ``eps`` times the size of the dominant term.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, VanishingThetaConstantError


@dataclass(frozen=True)
class HalfCharacteristic:
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    @property
    def genus(self) -> int:
        return len(self.alpha)

    @property
    def is_even(self) -> bool:
        return round(4 * float(np.dot(self.alpha, self.beta))) % 2 == 0

    @property
    def parity(self) -> int:
        return 1 if self.is_even else -1

    def label(self) -> str:
        bits = lambda v: "".join("1" if x else "0" for x in v)
        return f"[{bits(self.alpha)};{bits(self.beta)}]"

    @classmethod
    def from_bits(cls, a_bits, b_bits) -> HalfCharacteristic:
        return cls(tuple(0.5 * int(b) for b in a_bits), tuple(0.5 * int(b) for b in b_bits))


@lru_cache(maxsize=None)
def enumerate_characteristics(genus: int) -> tuple[HalfCharacteristic, ...]:
    """All ``4**g`` half-integer characteristics in a fixed order."""
    if genus < 1:
        raise InputError("genus must be positive")
    bits = list(itertools.product((0, 1), repeat=genus))
    return tuple(HalfCharacteristic.from_bits(a, b) for a in bits for b in bits)


def even_characteristics(genus: int) -> tuple[HalfCharacteristic, ...]:
    return tuple(c for c in enumerate_characteristics(genus) if c.is_even)


def odd_characteristics(genus: int) -> tuple[HalfCharacteristic, ...]:
    return tuple(c for c in enumerate_characteristics(genus) if not c.is_even)


@dataclass
class ThetaValue:
    value: complex | np.ndarray
    truncation_radius: float
    tail_bound: float
    points: int


def _check_matrix(B) -> np.ndarray:
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    if B.shape[0] != B.shape[1]:
        raise InputError("the Riemann matrix must be square")
    if np.max(np.abs(B - B.T)) > 1e-10 * max(1.0, np.max(np.abs(B))):
        raise InputError("the Riemann matrix must be symmetric")
    if np.min(np.linalg.eigvalsh(0.5 * (B.imag + B.imag.T))) <= 0:
        raise InputError("Im B must be positive definite")
    return B


def _tail_bound(R: float, rho: float, g: int, order: int, shift: float) -> float:
    """Bound for the sum of ``|u|``-weighted Gaussians outside radius ``R``.

    ``rho`` is a lower bound for the shortest lattice vector in the
    Cholesky-normalised coordinates, ``shift`` bounds ``|m|`` at the centre.
    """
    total = 0.0
    for k in range(80):
        t = R + 0.5 * k
        count = (2.0 * (t + 0.5) / rho + 1.0) ** g
        poly = (2.0 * np.pi * (t / rho + shift + 1.0)) ** order
        total += count * poly * np.exp(-np.pi * t * t)
    return total


def _lattice(B: np.ndarray, z: np.ndarray, char: HalfCharacteristic, eps: float, order: int, radius_factor: float = 1.0):
    g = B.shape[0]
    Y = 0.5 * (B.imag + B.imag.T)
    Yinv = np.linalg.inv(Y)
    L = np.linalg.cholesky(Y)
    rho = float(np.sqrt(np.min(np.linalg.eigvalsh(Y))))
    alpha = np.array(char.alpha, dtype=float)
    y = z.imag
    centre = -Yinv @ y
    shift = float(np.linalg.norm(centre))
    R = 0.5
    while _tail_bound(R, rho, g, order, shift) > eps:
        R += 0.125
        if R > 40:
            raise InputError("theta truncation radius exploded; Im B is too small")
    R *= radius_factor
    half = R * np.sqrt(np.diag(Yinv))
    ranges = [np.arange(np.floor(centre[i] - alpha[i] - half[i]), np.ceil(centre[i] - alpha[i] + half[i]) + 1) for i in range(g)]
    n = np.array(np.meshgrid(*ranges, indexing="ij")).reshape(g, -1).T
    m = n + alpha
    u = (m - centre) @ L
    keep = np.einsum("ij,ij->i", u, u) <= R * R
    return m[keep], R, _tail_bound(R, rho, g, order, shift), float(y @ Yinv @ y)


def _terms(B, z, char, m):
    beta = np.array(char.beta, dtype=float)
    quad = np.einsum("ni,ij,nj->n", m, B, m)
    lin = m @ (z + beta)
    return np.exp(1j * np.pi * quad + 2j * np.pi * lin)


def riemann_theta(
    z, B, char: HalfCharacteristic | None = None, eps: float = 1e-15, deriv=(), radius_factor: float = 1.0
) -> ThetaValue:
    """Theta function (or a partial derivative ``d/dz_{i1} d/dz_{i2} ...``).

    ``radius_factor`` enlarges the truncation ellipsoid beyond the radius the
    tail bound asks for; it exists for stability checks.
    """
    B = _check_matrix(B)
    g = B.shape[0]
    z = np.zeros(g, dtype=complex) if z is None else np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (g,):
        raise InputError("z has the wrong dimension")
    if char is None:
        char = HalfCharacteristic((0.0,) * g, (0.0,) * g)
    if char.genus != g:
        raise InputError("characteristic and matrix have different genus")
    deriv = tuple(int(i) for i in deriv)
    m, R, tail, q = _lattice(B, z, char, eps, len(deriv), radius_factor)
    t = _terms(B, z, char, m)
    for i in deriv:
        t = t * (2j * np.pi * m[:, i])
    return ThetaValue(complex(t.sum()), R, tail * np.exp(np.pi * q), m.shape[0])


def theta_jet(z, B, char: HalfCharacteristic | None = None, eps: float = 1e-15, order: int = 3):
    """Value, gradient, Hessian and third-derivative tensor (up to ``order``)."""
    B = _check_matrix(B)
    g = B.shape[0]
    z = np.zeros(g, dtype=complex) if z is None else np.atleast_1d(np.asarray(z, dtype=complex))
    if char is None:
        char = HalfCharacteristic((0.0,) * g, (0.0,) * g)
    m, R, tail, q = _lattice(B, z, char, eps, order)
    t = _terms(B, z, char, m)
    w = 2j * np.pi * m
    out = [complex(t.sum())]
    if order >= 1:
        out.append(np.einsum("n,ni->i", t, w))
    if order >= 2:
        out.append(np.einsum("n,ni,nj->ij", t, w, w))
    if order >= 3:
        out.append(np.einsum("n,ni,nj,nk->ijk", t, w, w, w))
    return out


def theta_constants(B, eps: float = 1e-15, which: str = "even"):
    """``[(characteristic, Theta[char](0 | B)), ...]`` for even, odd or all characteristics."""
    B = _check_matrix(B)
    g = B.shape[0]
    chars = {"even": even_characteristics, "odd": odd_characteristics, "all": enumerate_characteristics}[which](g)
    return [(c, riemann_theta(None, B, c, eps).value) for c in chars]


@dataclass
class ThetaProduct:
    product: complex
    min_modulus: float
    values: np.ndarray


def even_theta_product(B, eps: float = 1e-15, floor: float = 1e-8) -> ThetaProduct:
    """Product of all even theta constants; refuses when one of them vanishes.

    A constant counts as vanishing below ``floor`` times the largest one.
    """
    vals = np.array([v for _, v in theta_constants(B, eps, "even")])
    mods = np.abs(vals)
    if mods.min() < floor * mods.max():
        raise VanishingThetaConstantError(
            f"an even theta constant vanishes (|Theta| = {mods.min():.3e}); the product is not usable"
        )
    return ThetaProduct(complex(np.prod(vals)), float(mods.min()), vals)


def even_theta_log_hessian(B, eps: float = 1e-15) -> np.ndarray:
    """``sum over even chars of d^2 log Theta / dz_i dz_j`` at ``z = 0``."""
    B = _check_matrix(B)
    g = B.shape[0]
    acc = np.zeros((g, g), dtype=complex)
    for c in even_characteristics(g):
        th, grad, hess = theta_jet(None, B, c, eps, order=2)
        acc += hess / th - np.outer(grad, grad) / th**2
    return acc


@dataclass(frozen=True)
class JacobiThetas:
    """Jacobi theta constants; ``theta1p`` is normalised so that ``theta1p = pi theta2 theta3 theta4``."""

    theta1p: complex
    theta2: complex
    theta3: complex
    theta4: complex


_CHAR = lambda a, b: HalfCharacteristic((a,), (b,))


def jacobi_thetas(mu, eps: float = 1e-15) -> JacobiThetas:
    B = np.array([[complex(mu)]])
    t1p = -riemann_theta(None, B, _CHAR(0.5, 0.5), eps, deriv=(0,)).value
    t2 = riemann_theta(None, B, _CHAR(0.5, 0.0), eps).value
    t3 = riemann_theta(None, B, _CHAR(0.0, 0.0), eps).value
    t4 = riemann_theta(None, B, _CHAR(0.0, 0.5), eps).value
    return JacobiThetas(t1p, t2, t3, t4)


def dlog_theta1p_dmu(mu, eps: float = 1e-15) -> complex:
    """``d log theta1' / d mu`` from the heat equation: ``theta1''' / (4 pi i theta1')``."""
    B = np.array([[complex(mu)]])
    d1 = riemann_theta(None, B, _CHAR(0.5, 0.5), eps, deriv=(0,)).value
    d3 = riemann_theta(None, B, _CHAR(0.5, 0.5), eps, deriv=(0, 0, 0)).value
    return d3 / (4j * np.pi * d1)
