"""Contours in the complex plane and adaptive Gauss-Legendre integration."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import ConvergenceError, InputError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class Segment:
    """Straight piece from ``start`` to ``end``."""

    start: complex
    end: complex

    def point(self, t):
        return self.start + (self.end - self.start) * np.asarray(t)

    def velocity(self, t):
        return np.full(np.shape(t), self.end - self.start, dtype=complex)


@dataclass(frozen=True)
class Arc:
    """Circular arc ``center + radius * exp(i theta)`` for theta in [theta0, theta1]."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(t)
        return self.center + self.radius * np.exp(1j * th)

    def velocity(self, t):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(t)
        return 1j * self.radius * (self.theta1 - self.theta0) * np.exp(1j * th)

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))


class Contour:
    """A piecewise path made of segments and arcs, traversed in order."""

    def __init__(self, pieces: Sequence[Segment | Arc]):
        if not pieces:
            raise InputError("a contour needs at least one piece")
        self.pieces = tuple(pieces)

    @classmethod
    def circle(cls, center: complex, radius: float, clockwise: bool = False) -> Contour:
        sgn = -1.0 if clockwise else 1.0
        return cls([Arc(complex(center), float(radius), 0.0, sgn * 2.0 * np.pi)])

    @classmethod
    def polyline(cls, points: Sequence[complex]) -> Contour:
        pts = [complex(p) for p in points]
        if len(pts) < 2:
            raise InputError("a polyline needs two points")
        return cls([Segment(a, b) for a, b in zip(pts[:-1], pts[1:])])

    @classmethod
    def loop(cls, base: complex, center: complex, radius: float) -> Contour:
        """Out along a straight line, once around ``center`` counterclockwise, back."""
        base, center = complex(base), complex(center)
        d = center - base
        if abs(d) <= radius:
            raise InputError("the base point lies inside the loop circle")
        u = d / abs(d)
        touch = center - radius * u
        th = np.angle(-u)
        return cls([
            Segment(base, touch),
            Arc(center, float(radius), th, th + 2.0 * np.pi),
            Segment(touch, base),
        ])

    @property
    def start(self) -> complex:
        return complex(self.pieces[0].start)

    @property
    def end(self) -> complex:
        return complex(self.pieces[-1].end)

    def is_closed(self, tol: float = 1e-12) -> bool:
        return abs(self.start - self.end) <= tol * max(1.0, abs(self.start))

    def sample(self, per_piece: int = 64) -> np.ndarray:
        t = np.linspace(0.0, 1.0, per_piece + 1)
        pts = [self.pieces[0].point(t[:1])]
        for piece in self.pieces:
            pts.append(piece.point(t[1:]))
        return np.concatenate(pts)


def _eval(f: Callable, z: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        return np.asarray(f(z), dtype=complex)
    return np.array([f(complex(zi)) for zi in z], dtype=complex)


def _gl(f, piece, a, b, vectorized):
    t = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
    vals = _eval(f, piece.point(t), vectorized)
    w = _GL_WEIGHTS * 0.5 * (b - a) * piece.velocity(t)
    return np.tensordot(w, vals, axes=(0, 0))


def contour_integral(
    f: Callable,
    path: Contour,
    tol: float = 1e-12,
    vectorized: bool = False,
    max_depth: int = 30,
    full_output: bool = False,
):
    """Integrate ``f(z) dz`` along ``path``.

    ``f`` may return scalars or arrays (e.g. matrices); with ``vectorized`` it
    is called once per batch of nodes, with the node axis first.  Each piece
    is bisected until a panel and its two halves agree to ``tol`` relative to
    the running magnitude.
    """
    total = None
    err_total = 0.0
    for piece in path.pieces:
        stack = [(0.0, 1.0, _gl(f, piece, 0.0, 1.0, vectorized), 0)]
        while stack:
            a, b, whole, depth = stack.pop()
            m = 0.5 * (a + b)
            left = _gl(f, piece, a, m, vectorized)
            right = _gl(f, piece, m, b, vectorized)
            err = float(np.max(np.abs(left + right - whole)))
            scale = max(1.0, float(np.max(np.abs(left + right))))
            if err <= tol * scale or (b - a) < 1e-14:
                total = left + right if total is None else total + left + right
                err_total += err
            elif depth >= max_depth:
                raise ConvergenceError("contour integral did not converge")
            else:
                stack.append((m, b, right, depth + 1))
                stack.append((a, m, left, depth + 1))
    if full_output:
        return total, err_total
    return total


def residue(f: Callable, center: complex, radius: float, tol: float = 1e-12, vectorized: bool = False):
    """``(1 / 2 pi i)`` times the counterclockwise integral over a circle."""
    val = contour_integral(f, Contour.circle(center, radius), tol=tol, vectorized=vectorized)
    return val / (2j * np.pi)
