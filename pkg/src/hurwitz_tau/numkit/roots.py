"""Polynomial root finding (Aberth-Ehrlich) with multiplicity clustering."""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, InputError

P = np.polynomial.polynomial


def _trim(coeffs) -> np.ndarray:
    c = np.array(coeffs, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise InputError("the zero polynomial has no well-defined roots")
    return c[: nz[-1] + 1]


def _aberth(c: np.ndarray, rng: np.random.Generator, maxiter: int = 500) -> np.ndarray:
    n = c.size - 1
    dc = P.polyder(c)
    # Fujiwara bound: every root lies inside this circle
    k = np.arange(n)
    radius = 2.0 * np.max(np.abs(c[:-1] / c[-1]) ** (1.0 / (n - k)))
    radius = max(radius, 1e-3)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    z = radius * np.exp(1j * (phase + 2.0 * np.pi * np.arange(n) / n + 0.4))
    scale = np.sum(np.abs(c))
    for _ in range(maxiter):
        pz = P.polyval(z, c)
        dpz = P.polyval(z, dc)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        bound = 4 * np.finfo(float).eps * P.polyval(np.abs(z), np.abs(c))
        if np.all((np.abs(w) <= 1e-15 * np.maximum(np.abs(z), 1e-300)) | (np.abs(pz) <= bound)):
            return z
    if np.all(np.abs(P.polyval(z, c)) <= 1e-9 * scale * np.maximum(1.0, np.abs(z)) ** n):
        return z
    raise ConvergenceError("Aberth iteration did not converge")


def _cluster(z: np.ndarray, tol: float) -> list[list[int]]:
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def polynomial_roots(coeffs, cluster_tol: float = 1e-6, seed: int = 0) -> np.ndarray:
    """Roots of an ascending-coefficient polynomial, repeated by multiplicity.

    Roots closer than ``cluster_tol * scale`` are merged into one multiple
    root, which is then polished as a simple root of the appropriate
    derivative.  The output is sorted lexicographically by (real, imag).
    """
    c = _trim(coeffs)
    if c.size < 2:
        raise InputError("a constant polynomial has no roots")
    # strip exact zero roots first
    nz = np.nonzero(c)[0][0]
    zeros = np.zeros(nz, dtype=complex)
    c = c[nz:]
    if c.size == 1:
        return zeros
    rng = np.random.default_rng(seed)
    z = _aberth(c, rng)
    scale = max(1.0, float(np.max(np.abs(z))))
    out = []
    for group in _cluster(z, cluster_tol * scale):
        m = len(group)
        zeta = complex(np.mean(z[group]))
        if m > 1:
            d = c
            for _ in range(m - 1):
                d = P.polyder(d)
            dd = P.polyder(d)
            for _ in range(20):
                step = P.polyval(zeta, d) / P.polyval(zeta, dd)
                zeta -= step
                if abs(step) <= 1e-16 * max(1.0, abs(zeta)):
                    break
        else:
            dc = P.polyder(c)
            for _ in range(3):
                dv = P.polyval(zeta, dc)
                if dv == 0:
                    break
                step = P.polyval(zeta, c) / dv
                if not np.isfinite(step) or abs(step) > 1e-6 * scale:
                    break
                zeta -= step
        out.extend([zeta] * m)
    roots = np.concatenate([zeros, np.array(out, dtype=complex)])
    order = np.lexsort((np.round(roots.imag, 12), np.round(roots.real, 12)))
    return roots[order]


def root_multiplicities(roots: np.ndarray, tol: float = 1e-12) -> list[tuple[complex, int]]:
    """Collapse a repeated-root array into (root, multiplicity) pairs."""
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    return [(complex(roots[g[0]]), len(g)) for g in _cluster(roots, tol * scale)]
