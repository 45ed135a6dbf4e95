"""Machine checks of the identities behind the tau functions.

Every check returns a :class:`Report` holding the residual, the tolerance it
was compared with, and a short descriptive name of the identity.  Random
configurations come from :mod:`hurwitz_tau.sampling` with the given seed, so
reports are reproducible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .covering import RationalCovering, branch_data
from .errors import InputError
from .hyperelliptic import HyperellipticCurve, period_matrices, rauch_derivative
from .isomonodromy import (
    RiemannHilbertProblem,
    cauchy_determinant_check,
    jm_log_derivative,
    trace_identity_residual,
)
from .numkit import FDConfig, fd_derivative
from .tau import (
    HyperellipticFamily,
    RationalFamily,
    flatness_matrix,
    gauge_check,
    residue_formula_check_genus0,
    svfay_bergmann,
    tau_bergmann_hyperelliptic,
    tau_elliptic_two_fold,
    tau_rational,
    thomae_check,
)
from .theta import odd_characteristics


@dataclass
class JobConfig:
    command: str = ""
    output: str = "table"
    tol: float | None = None
    theta_eps: float = 1e-15
    fd_step: float = 1e-3
    jet_order: int = 12
    seed: int = 0
    n: int = 5

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise InputError("--tol must be positive")
        if not self.theta_eps > 0 or not self.fd_step > 0:
            raise InputError("tolerances must be positive")
        if self.jet_order < 6:
            raise InputError("--jet-order must be at least 6")
        if self.n < 1:
            raise InputError("--n must be positive")
        if self.output not in ("json", "table"):
            raise InputError("output must be 'json' or 'table'")

    @property
    def fd(self) -> FDConfig:
        return FDConfig(self.fd_step, 3)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class Case:
    label: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)


@dataclass
class Report:
    name: str
    identity: str
    cases: list[Case] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "identity": self.identity,
            "passed": self.passed,
            "cases": [
                {"case": c.label, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed}
                for c in sorted(self.cases, key=lambda c: c.label)
            ],
        }


def _tol(s: JobConfig, default: float) -> float:
    return default if s.tol is None else s.tol


def _as_covering(data) -> RationalCovering | None:
    return data if isinstance(data, RationalCovering) else None


def _as_curve(data) -> HyperellipticCurve | None:
    return data if isinstance(data, HyperellipticCurve) else None


# -- individual checks --------------------------------------------------

def check_flatness(s: JobConfig, data=None) -> Report:
    rep = Report("flatness", "dB_m/dlambda_n = dB_n/dlambda_m and dA_m/dlambda_n = dA_n/dlambda_m")
    rng = s.rng()
    families = []
    if isinstance(data, RationalCovering):
        families.append(("genus0", RationalFamily(data, s.jet_order), 1e-6))
    elif isinstance(data, HyperellipticCurve):
        g = data.genus
        families.append((f"genus{g}", HyperellipticFamily(data, "genus1" if g == 1 else "svfay"), 1e-6 if g == 1 else 1e-5))
    else:
        families.append(("genus0-degree3", RationalFamily(sampling.random_covering(rng, 3), s.jet_order), 1e-6))
        families.append(("genus1", HyperellipticFamily(sampling.random_chain_curve(rng, 1), "genus1"), 1e-6))
        families.append(("genus2-svfay", HyperellipticFamily(sampling.random_chain_curve(rng, 2), "svfay"), 1e-5))
    for label, fam, tol in families:
        for which in ("B", "A"):
            r = float(np.max(np.abs(flatness_matrix(fam, which, s.fd))))
            rep.cases.append(Case(f"{label}:{which}", r, _tol(s, tol)))
    return rep


def check_thomae(s: JobConfig, data=None) -> Report:
    rep = Report("thomae", "{Theta[beta](0)^8} = {((det A)^2 (2 pi i)^(-2g) prod_T prod_Tbar (l_i - l_j))^2}")
    rng = s.rng()
    curves = [data] if isinstance(data, HyperellipticCurve) else [sampling.random_chain_curve(rng, 2), sampling.random_chain_curve(rng, 1)]
    for c in curves:
        rep.cases.append(Case(f"genus{c.genus}", thomae_check(period_matrices(c)), _tol(s, 1e-8)))
    return rep


def rauch_residual(curve: HyperellipticCurve, fd: FDConfig) -> float:
    pd = period_matrices(curve)
    worst = 0.0
    for m in range(curve.points.size):
        exact = rauch_derivative(pd, m)
        num, _ = fd_derivative(lambda x, m=m: period_matrices(curve.moved(m, x)).B, curve.points[m], fd)
        worst = max(worst, float(np.max(np.abs(num - exact)) / np.max(np.abs(exact))))
    return worst


def check_rauch(s: JobConfig, data=None) -> Report:
    rep = Report("rauch", "dB_ij/dlambda_m = pi i f_i(0) f_j(0)")
    rng = s.rng()
    curves = [data] if isinstance(data, HyperellipticCurve) else [sampling.random_chain_curve(rng, 1), sampling.random_chain_curve(rng, 2)]
    for c in curves:
        rep.cases.append(Case(f"genus{c.genus}", rauch_residual(c, s.fd), _tol(s, 1e-6)))
    return rep


def check_cauchy(s: JobConfig, data=None) -> Report:
    rep = Report("cauchy", "det 1/(z_j - mu_k) = prod_{j<k} (z_j - z_k)(mu_k - mu_j) / prod (z_j - mu_k)")
    rng = s.rng()
    n = s.n
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    mu = rng.standard_normal(n) + 1j * rng.standard_normal(n) + 3.0
    rep.cases.append(Case(f"n={n}", cauchy_determinant_check(z, mu), _tol(s, 1e-10)))
    return rep


def _psi_points(rh: RiemannHilbertProblem, rng, count: int):
    pts = rh.branch_points
    c = pts.mean()
    spread = 1.0 + float(np.max(np.abs(pts - c)))
    out = []
    while len(out) < count:
        lam = c + spread * (rng.uniform(-1.2, 1.2) + 1j * rng.uniform(-1.2, 1.2))
        seg = lam - rh.basepoint
        t = np.clip(((pts - rh.basepoint) * np.conj(seg)).real / abs(seg) ** 2, 0, 1)
        if np.min(np.abs(pts - (rh.basepoint + t * seg))) > 0.05 * spread:
            out.append(complex(lam))
    return out


def check_monodromy(s: JobConfig, data=None, det_points: int = 50) -> Report:
    rep = Report("monodromy", "det Psi = 1, quasi-permutation monodromy with entries 0, +1, -1, ordered product = I")
    rng = s.rng()
    covers = [data] if isinstance(data, RationalCovering) else [sampling.two_fold_covering(0.4 + 0.1j, -0.9 + 0.6j), sampling.random_covering(rng, 3)]
    for k, R in enumerate(covers):
        rh = RiemannHilbertProblem(R)
        det_err = max(abs(np.linalg.det(rh.psi(lam)) - 1.0) for lam in _psi_points(rh, rng, det_points))
        rep.cases.append(Case(f"cover{k}:det", det_err, _tol(s, 1e-10)))
        Ms = rh.monodromies()
        defect = max(float(np.min(np.abs(M[..., None] - np.array([0.0, 1.0, -1.0])), axis=-1).max()) for M in Ms)
        quasi = all(np.all((np.abs(M) > 0.5).sum(axis=0) == 1) and np.all((np.abs(M) > 0.5).sum(axis=1) == 1) for M in Ms)
        rep.cases.append(Case(f"cover{k}:entries", defect if quasi else np.inf, _tol(s, 1e-8)))
        P = np.eye(rh.size, dtype=complex)
        for i in rh.loop_order():
            P = P @ Ms[i]
        rep.cases.append(Case(f"cover{k}:product", float(np.max(np.abs(P - np.eye(rh.size)))), _tol(s, 1e-8)))
    return rep


def check_jm(s: JobConfig, data=None) -> Report:
    rep = Report(
        "jm",
        "1/2 res tr(Psi_l Psi^-1)^2 = {z,x_m}/24 = -1/2 dlog tau_W; 1/2 tr(Psi_l Psi^-1)^2 = -1/2 sum_{j!=k} B/dl^2",
    )
    rng = s.rng()
    covers = [data] if isinstance(data, RationalCovering) else [sampling.two_fold_covering(0.4 + 0.1j, -0.9 + 0.6j), sampling.random_covering(rng, 3)]
    for k, R in enumerate(covers):
        rh = RiemannHilbertProblem(R)
        tw = tau_rational(R, s.fd)
        q, rel = 0.0, 0.0
        for m in range(rh.branch_points.size):
            j = jm_log_derivative(R, m, rh)
            q = max(q, j.residual)
            rel = max(rel, abs(j.from_residue + 0.5 * tw.dlog[m]))
        rep.cases.append(Case(f"cover{k}:quadrature-vs-jet", q, _tol(s, 1e-6)))
        rep.cases.append(Case(f"cover{k}:tauJM-tauW", rel, _tol(s, 1e-7)))
        probes = [trace_identity_residual(R, lam, rh) for lam in _psi_points(rh, rng, 5)]
        rep.cases.append(Case(f"cover{k}:trace-identity", max(probes), _tol(s, 1e-8)))
    return rep


def cross_genus1_residual(curve: HyperellipticCurve, fd: FDConfig) -> float:
    a = tau_elliptic_two_fold(curve, "bergmann", fd).dlog
    b = tau_bergmann_hyperelliptic(curve, fd=fd).dlog
    return float(np.max(np.abs(a - b)))


def check_cross_genus1(s: JobConfig, data=None) -> Report:
    rep = Report("cross-genus1", "theta1'^(2/3) prod h^(1/6) / prod f^(1/12) ~ A prod (l_m - l_n)^(1/4) at the level of dlog")
    rng = s.rng()
    curves = [data] if isinstance(data, HyperellipticCurve) else [sampling.random_chain_curve(rng, 1) for _ in range(s.n)]
    for k, c in enumerate(curves):
        if c.genus != 1:
            raise InputError("cross-genus1 needs a four-point curve")
        rep.cases.append(Case(f"curve{k}", cross_genus1_residual(c, s.fd), _tol(s, 1e-6)))
    return rep


def check_residue(s: JobConfig, data=None) -> Report:
    rep = Report("residue", "B_m = res_{lambda_m} sum_{j != k} B(z_j, z_k)/dlambda")
    rng = s.rng()
    covers = [data] if isinstance(data, RationalCovering) else [sampling.two_fold_covering(0.4 + 0.1j, -0.9 + 0.6j), sampling.random_covering(rng, 3)]
    for k, R in enumerate(covers):
        r = max(residue_formula_check_genus0(R, m) for m in range(len(branch_data(R, 4))))
        rep.cases.append(Case(f"cover{k}", r, _tol(s, 1e-8)))
    return rep


def check_gauge(s: JobConfig, data=None, mobius=(1.0, 0.2, 0.3, 1.0)) -> Report:
    rep = Report("gauge", "dlog tau~_m = (dl_m/dl~_m)(dlog tau_m - c/(4(c l_m + d)))")
    rng = s.rng()
    covers = [data] if isinstance(data, RationalCovering) else [sampling.two_fold_covering(0.4 + 0.1j, -0.9 + 0.6j), sampling.random_covering(rng, 3)]
    for k, R in enumerate(covers):
        rep.cases.append(Case(f"cover{k}", gauge_check(R, mobius, s.fd), _tol(s, 1e-8)))
    return rep


def check_svfay(s: JobConfig, data=None) -> Report:
    rep = Report("svfay", "S_B = -2T/H + {int H, x} reproduces dlog tau_B, independent of the odd characteristic")
    rng = s.rng()
    curve = data if isinstance(data, HyperellipticCurve) else sampling.random_chain_curve(rng, 2)
    pd = period_matrices(curve)
    tb = tau_bergmann_hyperelliptic(curve, pd, s.fd)
    B = np.array([svfay_bergmann(pd, m).B_m for m in range(curve.points.size)])
    rep.cases.append(Case("vs-dlog-tauB", float(np.max(np.abs(B - tb.dlog))), _tol(s, 1e-5)))
    spread = 0.0
    for m in range(curve.points.size):
        vals = []
        for c in odd_characteristics(curve.genus):
            try:
                vals.append(svfay_bergmann(pd, m, c).schwarzian)
            except InputError:
                continue
        spread = max(spread, max(abs(a - b) for a, b in itertools.combinations(vals, 2)) if len(vals) > 1 else 0.0)
    rep.cases.append(Case("odd-characteristic-independence", spread, _tol(s, 1e-6)))
    return rep


CHECKS = {
    "flatness": check_flatness,
    "thomae": check_thomae,
    "rauch": check_rauch,
    "cauchy": check_cauchy,
    "monodromy": check_monodromy,
    "jm": check_jm,
    "cross-genus1": check_cross_genus1,
    "residue": check_residue,
    "gauge": check_gauge,
    "svfay": check_svfay,
}


def run_check(name: str, settings: JobConfig, data=None) -> Report:
    if name not in CHECKS:
        raise InputError(f"unknown check {name!r}")
    return CHECKS[name](settings, data)
