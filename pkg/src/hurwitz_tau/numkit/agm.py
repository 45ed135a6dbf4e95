"""Arithmetic-geometric mean and the complete elliptic integral built on it."""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, InputError


def agm(a, b, tol: float = 4e-16, maxiter: int = 100) -> complex:
    """Principal AGM of two complex numbers.

    At each step the square root closest to the arithmetic mean is taken,
    which selects the "right" choice for every iteration.
    """
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise InputError("AGM is degenerate when an argument vanishes")
    if a == -b or (abs((b / a).imag) < 1e-300 and (b / a).real < 0):
        raise InputError("AGM is degenerate for arguments with ratio on the negative real axis")
    for _ in range(maxiter):
        an = 0.5 * (a + b)
        bn = np.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        stalled = an == a and bn == b
        a, b = an, bn
        if abs(a - b) <= tol * abs(a) or stalled:
            return complex(0.5 * (a + b))
    raise ConvergenceError("AGM failed to converge")


def ellipk_agm(k) -> complex:
    """``K(k) = pi / (2 agm(1, sqrt(1 - k^2)))``."""
    kp = np.sqrt(1.0 - complex(k) ** 2)
    return np.pi / (2.0 * agm(1.0, kp))
