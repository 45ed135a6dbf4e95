"""Command-line front end.

Examples::

    hurwitz-tau branch-data --data '{"num": [1, 0, 1], "den": [0, 1]}'
    hurwitz-tau tau hyperelliptic --data '{"branch_points": [0, 1, 2, 3]}' --json
    hurwitz-tau verify cauchy --n 5 --seed 7
    echo '{"branch_points": [0, 1, 2, 3]}' | hurwitz-tau periods --input -

Exit status: 0 on success, 2 when a verification fails, 1 on bad input or a
numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .covering import RationalCovering, branch_data
from .errors import HurwitzTauError, InputError
from .hyperelliptic import HyperellipticCurve, period_matrices
from .serialize import decode_complex, decode_complex_list, decode_complex_matrix, dumps
from .tau import (
    tau_bergmann_hyperelliptic,
    tau_elliptic,
    tau_elliptic_two_fold,
    tau_rational,
    tau_wirtinger,
)
from .theta import theta_constants
from .verify import CHECKS, JobConfig, run_check

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


def _load(args) -> dict | None:
    if args.data is not None and args.input is not None:
        raise InputError("give either --input or --data, not both")
    if args.data is not None:
        text = args.data
    elif args.input is not None:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.input) as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        return None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("the input must be a JSON object")
    return data


def _object(data: dict | None, required: bool = True):
    """A covering (keys num/den) or a curve (key branch_points)."""
    if data is None:
        if required:
            raise InputError("this command needs --input or --data")
        return None
    if "branch_points" in data:
        return HyperellipticCurve.from_json(data)
    if "num" in data or "den" in data:
        return RationalCovering.from_json(data)
    raise InputError("expected a covering {num, den} or a curve {branch_points}")


def _need(obj, kind, what: str):
    if not isinstance(obj, kind):
        raise InputError(f"this command needs {what}")
    return obj


def _branch_data(cfg: JobConfig, data) -> dict:
    R = _need(_object(data), RationalCovering, "a covering {num, den}")
    out = []
    for b in branch_data(R, cfg.jet_order):
        out.append(
            {
                "lambda": b.lambda_m,
                "r": b.r,
                "critical_point": b.critical_point,
                "dz_dx": b.dz_dx,
                "schwarzian": b.schwarzian(),
                "local_inverse": np.asarray(b.local_inverse.c),
            }
        )
    return {"branch_data": out}


def _periods(cfg: JobConfig, data) -> dict:
    curve = _need(_object(data), HyperellipticCurve, "a curve {branch_points}")
    pd = period_matrices(curve, 1e-13 if cfg.tol is None else cfg.tol)
    sym = float(np.max(np.abs(pd.B - pd.B.T)))
    return {
        "genus": curve.genus,
        "A": pd.A,
        "B_periods": pd.Bp,
        "C": pd.C,
        "B": pd.B,
        "symmetry_residual": sym,
        "min_eig_im_B": float(np.min(np.linalg.eigvalsh(0.5 * (pd.B.imag + pd.B.imag.T)))),
    }


def _theta_constants(cfg: JobConfig, data) -> dict:
    if data is not None and "B" in data:
        B = decode_complex_matrix(data["B"])
    else:
        curve = _need(_object(data), HyperellipticCurve, "a Riemann matrix {B} or a curve {branch_points}")
        B = period_matrices(curve).B
    vals = theta_constants(B, cfg.theta_eps, "even")
    return {
        "theta_eps": cfg.theta_eps,
        "constants": [{"characteristic": c.label(), "value": v} for c, v in vals],
    }


def _tau(cfg: JobConfig, data, kind: str, subset: bool) -> dict:
    fd = cfg.fd
    if kind == "rational":
        R = _need(_object(data), RationalCovering, "a covering {num, den}")
        res = tau_rational(R, fd, cfg.jet_order)
    elif kind == "elliptic":
        if data is not None and "mu" in data:
            try:
                f, h = decode_complex_list(data["f"]), decode_complex_list(data["h"])
            except KeyError as exc:
                raise InputError(f"elliptic data are missing {exc}") from None
            r = data.get("r")
            res = tau_elliptic(f, h, decode_complex(data["mu"]), r, data.get("kind", "bergmann"))
        else:
            curve = _need(_object(data), HyperellipticCurve, "a four-point curve or {f, h, mu}")
            res = tau_elliptic_two_fold(curve, "bergmann", fd)
    elif kind == "hyperelliptic":
        curve = _need(_object(data), HyperellipticCurve, "a curve {branch_points}")
        res = tau_bergmann_hyperelliptic(curve, fd=fd)
    else:
        obj = _object(data)
        if isinstance(obj, RationalCovering):
            # in genus zero the Wirtinger and Bergmann tau coincide
            res = tau_rational(obj, fd, cfg.jet_order)
        else:
            res = tau_wirtinger(obj, fd=fd, subset=subset or obj.genus > 2)
    out = {"kind": kind, "fd_step": cfg.fd_step, **res.to_json()}
    if res.dlog_error is not None:
        out["dlog_error"] = [float(e) for e in np.abs(res.dlog_error)]
    return out


def _verify(cfg: JobConfig, data, name: str) -> tuple[dict, bool]:
    rep = run_check(name, cfg, _object(data, required=False))
    return rep.to_json(), rep.passed


def _table(report: dict) -> str:
    if "check" in report:
        lines = [f"{report['check']}: {'PASS' if report['passed'] else 'FAIL'}", f"  identity: {report['identity']}"]
        for c in report["cases"]:
            flag = "ok  " if c["passed"] else "FAIL"
            lines.append(f"  {flag} {c['case']:<36} residual {c['residual']:.3e}  tol {c['tolerance']:.1e}")
        return "\n".join(lines)
    return dumps(report)


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1); 2 is reserved for failed checks."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override the pass/fail tolerance")
    common.add_argument("--theta-eps", type=float, default=1e-15, help="theta truncation tolerance")
    common.add_argument("--fd-step", type=float, default=1e-3, help="base step of the Richardson FD")
    common.add_argument("--jet-order", type=int, default=12, help="order of local jets (>= 6)")
    common.add_argument("--seed", type=int, default=0, help="seed for random configurations")
    common.add_argument("--n", type=int, default=5, help="size or count parameter for random checks")
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("--input", metavar="PATH", help="JSON input file, '-' for stdin")
    common.add_argument("--data", metavar="JSON", help="inline JSON input")

    p = _Parser(prog="hurwitz-tau", description="Tau functions on Hurwitz spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("branch-data", parents=[common], help="branch points and local inverses of a covering")
    sub.add_parser("periods", parents=[common], help="period matrices of a hyperelliptic curve")
    sub.add_parser("theta-constants", parents=[common], help="even theta constants")
    t = sub.add_parser("tau", parents=[common], help="tau functions")
    t.add_argument("kind", choices=["rational", "elliptic", "hyperelliptic", "wirtinger"])
    t.add_argument("--subset", action="store_true", help="Wirtinger tau from the non-vanishing constants only")
    v = sub.add_parser("verify", parents=[common], help="verify an identity")
    v.add_argument("name", choices=sorted(CHECKS))
    return p


def run(args) -> tuple[int, dict]:
    cfg = JobConfig(
        command=args.command,
        output="json" if args.json else "table",
        tol=args.tol,
        theta_eps=args.theta_eps,
        fd_step=args.fd_step,
        jet_order=args.jet_order,
        seed=args.seed,
        n=args.n,
    )
    data = _load(args)
    if args.command == "verify":
        report, ok = _verify(cfg, data, args.name)
        return (EXIT_OK if ok else EXIT_FAILED), report
    if args.command == "branch-data":
        return EXIT_OK, _branch_data(cfg, data)
    if args.command == "periods":
        return EXIT_OK, _periods(cfg, data)
    if args.command == "theta-constants":
        return EXIT_OK, _theta_constants(cfg, data)
    return EXIT_OK, _tau(cfg, data, args.kind, args.subset)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = run(args)
    except HurwitzTauError as exc:
        # InputError, convergence failures and friends
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(json.dumps({"error": "InputError", "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return EXIT_ERROR
    print(dumps(report) if args.json else _table(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
