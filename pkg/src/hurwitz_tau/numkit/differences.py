"""Central finite differences with Richardson extrapolation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConvergenceError, InputError


@dataclass(frozen=True)
class FDConfig:
    """Step (relative to ``max(1, |x|)``) and number of Richardson levels."""

    step: float = 1e-3
    levels: int = 3

    def __post_init__(self):
        if not self.step > 0:
            raise InputError("finite-difference step must be positive")
        if self.levels < 1:
            raise InputError("at least one Richardson level is required")


def fd_derivative(g: Callable, at, cfg: FDConfig = FDConfig()):
    """Derivative of ``g`` at ``at`` along the complex direction 1.

    ``g`` may return arrays.  Returns ``(value, error_estimate)``.  Steps are
    halved between levels; the Richardson tableau removes ``h**2`` terms.
    """
    at = complex(at)
    h0 = cfg.step * max(1.0, abs(at))
    rows = []
    for k in range(cfg.levels):
        h = h0 / 2**k
        d = (np.asarray(g(at + h)) - np.asarray(g(at - h))) / (2.0 * h)
        row = [d]
        for j in range(1, k + 1):
            f = 4.0**j
            row.append(row[j - 1] + (row[j - 1] - rows[k - 1][j - 1]) / (f - 1.0))
        rows.append(row)
    value = rows[-1][-1]
    if cfg.levels == 1:
        err = np.abs(value) * 1e-3 + h0**2
        return value, float(np.max(err))
    err = float(np.max(np.abs(value - rows[-2][-1])))
    if cfg.levels >= 3:
        prev = float(np.max(np.abs(rows[-2][-1] - rows[-3][-1])))
        mag = float(np.max(np.abs(value))) + 1.0
        if err > prev and err > 1e-6 * mag:
            raise ConvergenceError("Richardson levels are inconsistent; the function is not smooth here")
    return value, err


def fd_gradient(g: Callable, point, cfg: FDConfig = FDConfig()):
    """Partial derivatives of ``g`` with respect to each entry of ``point``."""
    point = np.array(point, dtype=complex)
    values, errors = [], []
    for m in range(point.size):
        def gm(x, m=m):
            p = point.copy()
            p[m] = x
            return g(p)

        v, e = fd_derivative(gm, point[m], cfg)
        values.append(v)
        errors.append(e)
    return np.array(values), np.array(errors)
