"""Seeded random configurations used by tests and the ``verify`` commands.

Distributions
-------------
* chain curves: ``2g + 2`` points ``rho * exp(i phi)`` with ``rho`` uniform in
  ``[1, 2]`` and ``phi`` split into equal sectors with uniform jitter, listed
  by increasing angle (this keeps the chain polyline simple); points closer
  than ``min_sep`` are rejected.
* rational coverings: numerator monic of degree ``N``, all other
  coefficients complex normal with scale 0.5; samples whose branch points
  are closer than ``min_sep`` or larger than 20 in modulus are rejected.
"""
from __future__ import annotations

import numpy as np

from .covering import RationalCovering, branch_points
from .errors import HurwitzTauError
from .hyperelliptic import HyperellipticCurve


def random_chain_curve(rng: np.random.Generator, genus: int, min_sep: float = 0.3) -> HyperellipticCurve:
    n = 2 * genus + 2
    for _ in range(1000):
        rho = rng.uniform(1.0, 2.0, n)
        phi = (np.arange(n) + rng.uniform(0.15, 0.85, n)) * 2 * np.pi / n
        pts = rho * np.exp(1j * phi)
        d = np.abs(pts[:, None] - pts[None, :])
        d[np.diag_indices(n)] = np.inf
        if d.min() >= min_sep:
            try:
                return HyperellipticCurve(pts)
            except HurwitzTauError:
                continue
    raise RuntimeError("could not sample a well-separated curve")


def random_covering(rng: np.random.Generator, degree: int, min_sep: float = 0.3) -> RationalCovering:
    for _ in range(1000):
        z = lambda n: 0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        num = np.concatenate([z(degree), [1.0]])
        den = np.concatenate([z(degree - 1), [1.0]])
        try:
            R = RationalCovering(num, den)
            bp = branch_points(R)
        except HurwitzTauError:
            continue
        d = np.abs(bp[:, None] - bp[None, :])
        d[np.diag_indices(bp.size)] = np.inf
        if d.min() >= min_sep and np.max(np.abs(bp)) < 20 and np.min(np.abs(np.diff(R.poles()))) > 0.2:
            return R
    raise RuntimeError("could not sample a covering with separated branch points")


def two_fold_covering(l1, l2) -> RationalCovering:
    """The two-sheeted genus-zero covering with branch points ``l1`` and ``l2``."""
    s, p = complex(l1) + complex(l2), complex(l1) * complex(l2)
    return RationalCovering([(s * s / 4 - p) / 4, -s / 2, 1.0], [-s / 2, 1.0])


def random_pairs(rng: np.random.Generator, n: int, min_sep: float = 0.2):
    out = []
    while len(out) < n:
        a, b = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2)
        if abs(a - b) >= min_sep:
            out.append((complex(a), complex(b)))
    return out
