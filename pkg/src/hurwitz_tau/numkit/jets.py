"""Truncated power series ("jets") with complex coefficients.

A :class:`Jet` of order ``K`` stores ``c[0], ..., c[K]`` and represents
``sum c[k] x**k + O(x**(K+1))``.  Binary operations truncate to the smaller
order of the two operands, so precision is never silently invented.
"""
from __future__ import annotations

import numbers

import numpy as np

from ..errors import InputError


def _as_coefficients(coefficients) -> np.ndarray:
    c = np.array(coefficients, dtype=complex).ravel()
    if c.size == 0:
        raise InputError("a jet needs at least one coefficient")
    return c


class Jet:
    """Truncated Taylor series around 0."""

    __slots__ = ("c",)
    __array_priority__ = 1000

    def __init__(self, coefficients, order: int | None = None):
        c = _as_coefficients(coefficients)
        if order is not None:
            if order < 0:
                raise InputError("jet order must be non-negative")
            if c.size < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - c.size, dtype=complex)])
            c = c[: order + 1]
        self.c = c

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, value, order: int) -> Jet:
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order: int, shift=0.0) -> Jet:
        """The identity series ``shift + x``."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = shift
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_polynomial(cls, coefficients, center, order: int) -> Jet:
        """Taylor expansion of an ascending-coefficient polynomial at ``center``."""
        p = np.polynomial.Polynomial(np.asarray(coefficients, dtype=complex))
        out = np.zeros(order + 1, dtype=complex)
        fact = 1.0
        for k in range(min(order, p.degree()) + 1):
            out[k] = p(center) / fact
            p = p.deriv()
            fact *= k + 1
        return cls(out)

    # -- basic protocol -----------------------------------------------
    @property
    def order(self) -> int:
        return self.c.size - 1

    def __len__(self) -> int:
        return self.c.size

    def __getitem__(self, k):
        return self.c[k]

    def __repr__(self) -> str:
        return f"Jet({np.array2string(self.c, precision=6)})"

    def copy(self) -> Jet:
        return Jet(self.c.copy())

    def truncate(self, order: int) -> Jet:
        return Jet(self.c[: order + 1].copy(), order=order)

    def _coerce(self, other) -> Jet | None:
        if isinstance(other, Jet):
            return other
        if isinstance(other, numbers.Number) or np.isscalar(other):
            return Jet.constant(complex(other), self.order)
        return None

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> Jet:
        return Jet(-self.c)

    def __pos__(self) -> Jet:
        return self.copy()

    def __add__(self, other) -> Jet:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return Jet(self.c[: n + 1] + o.c[: n + 1])

    __radd__ = __add__

    def __sub__(self, other) -> Jet:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return Jet(self.c[: n + 1] - o.c[: n + 1])

    def __rsub__(self, other) -> Jet:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> Jet:
        if isinstance(other, numbers.Number) or np.isscalar(other):
            return Jet(self.c * complex(other))
        if not isinstance(other, Jet):
            return NotImplemented
        n = min(self.order, other.order)
        return Jet(np.convolve(self.c[: n + 1], other.c[: n + 1])[: n + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        c = self.c
        if c[0] == 0:
            raise InputError("cannot invert a jet with vanishing constant term")
        out = np.zeros_like(c)
        out[0] = 1.0 / c[0]
        for k in range(1, c.size):
            out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
        return Jet(out)

    def __truediv__(self, other) -> Jet:
        if isinstance(other, numbers.Number) or np.isscalar(other):
            return Jet(self.c / complex(other))
        if not isinstance(other, Jet):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> Jet:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, exponent) -> Jet:
        if isinstance(exponent, numbers.Integral):
            e = int(exponent)
            if e < 0:
                return self.reciprocal() ** (-e)
            result = Jet.constant(1.0, self.order)
            base = self
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        a = complex(exponent)
        c0 = self.c[0]
        if c0 == 0:
            raise InputError("non-integer power of a jet needs a nonzero constant term")
        u = self / c0
        u.c[0] = 0.0
        return (a * u.log1p()).exp() * (c0 ** a)

    # -- analytic operations ------------------------------------------
    def deriv(self) -> Jet:
        """Term-wise derivative; the order drops by one."""
        if self.order == 0:
            return Jet([0.0])
        k = np.arange(1, self.c.size)
        return Jet(self.c[1:] * k)

    def integ(self, constant=0.0) -> Jet:
        """Antiderivative; the order grows by one."""
        k = np.arange(1, self.c.size + 1)
        return Jet(np.concatenate([[constant], self.c / k]))

    def exp(self) -> Jet:
        c = self.c
        out = np.zeros_like(c)
        out[0] = np.exp(c[0])
        k = np.arange(1, c.size)
        kc = k * c[1:]
        for n in range(1, c.size):
            out[n] = np.dot(kc[:n], out[n - 1 :: -1][:n]) / n
        return Jet(out)

    def log1p(self) -> Jet:
        """``log(1 + u)`` for a jet ``u`` with ``u[0] == 0``."""
        if self.c[0] != 0:
            raise InputError("log1p needs a jet with zero constant term")
        one_plus = self + 1.0
        return (self.deriv() / one_plus.truncate(self.order - 1)).integ() if self.order else Jet([0.0])

    def log(self) -> Jet:
        """Principal logarithm of the constant term, series in the rest."""
        c0 = self.c[0]
        if c0 == 0:
            raise InputError("log of a jet with vanishing constant term")
        u = self / c0
        u.c[0] = 0.0
        return u.log1p() + np.log(c0)

    def sqrt(self) -> Jet:
        return self ** 0.5

    def __call__(self, x):
        """Evaluate the truncated polynomial at ``x`` (scalar or array)."""
        x = np.asarray(x, dtype=complex)
        acc = np.zeros_like(x) + self.c[-1]
        for ck in self.c[-2::-1]:
            acc = acc * x + ck
        return acc[()] if acc.ndim == 0 else acc

    def compose(self, inner: Jet) -> Jet:
        """``self(inner(x))``; ``inner`` must vanish at 0."""
        if inner.c[0] != 0:
            raise InputError("composition requires the inner jet to vanish at 0")
        n = min(self.order, inner.order)
        g = inner.truncate(n)
        acc = Jet.constant(self.c[n], n)
        for ck in self.c[n - 1 :: -1]:
            acc = acc * g + ck
        return acc

    def reversion(self) -> Jet:
        """Compositional inverse of a jet with ``c[0] == 0`` and ``c[1] != 0``."""
        c = self.c
        if c[0] != 0:
            raise InputError("reversion requires c[0] == 0")
        if self.order < 1 or c[1] == 0:
            raise InputError("reversion requires a nonzero linear term")
        n = self.order
        x = Jet.variable(n)
        w = x / c[1]
        # each Newton-free correction gains one order of accuracy
        for _ in range(n):
            w = w - (self.compose(w) - x) / c[1]
        w.c[0] = 0.0
        return w

    # -- Schwarzian ---------------------------------------------------
    def schwarzian_at_zero(self) -> complex:
        """``{f, x}`` at 0 from the first three Taylor coefficients."""
        if self.order < 3:
            raise InputError("the Schwarzian needs a jet of order >= 3")
        c1, c2, c3 = self.c[1], self.c[2], self.c[3]
        if c1 == 0:
            raise InputError("the Schwarzian is singular where f'(0) = 0")
        return complex(6.0 * c3 / c1 - 6.0 * (c2 / c1) ** 2)

    def schwarzian(self) -> Jet:
        """``{f, x} = f'''/f' - 3/2 (f''/f')**2`` as a jet of order ``K - 3``."""
        if self.order < 3:
            raise InputError("the Schwarzian needs a jet of order >= 3")
        d1 = self.deriv()
        d2 = d1.deriv()
        d3 = d2.deriv()
        ratio = d2 / d1.truncate(d2.order)
        n = d3.order
        return d3 / d1.truncate(n) - 1.5 * ratio.truncate(n) ** 2


def schwarzian(jet: Jet, at_zero: bool = True):
    """Functional form of :meth:`Jet.schwarzian`."""
    return jet.schwarzian_at_zero() if at_zero else jet.schwarzian()
