"""Command-line front end.

Matrices travel as JSON ``{"rows": [[[re, im], ...], ...]}``.  Every
command prints one JSON report on stdout; diagnostics go to stderr.
Exit status: 0 when every check passes, 1 when a check fails, 2 when the
input is malformed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from .contraction import CONTRACTION_TOL, as_contraction, classify, defect, p_infinity
from .errors import FundopError, InputError, NotAdmissible, PreconditionFailed
from .gamma import (
    ADMISSIBLE_TOL,
    FUND_TOL,
    W_TOL,
    AdmissibleCandidate,
    GammaPair,
    admissibility_check,
    fundamental_operators,
    lemma7_check,
)
from .hardy import lemma8_residual
from .linalg import numerical_radius, op_norm
from .report import Check, Report
from .suite import run_suite
from .synthesis import synthesize_S
from .tetrablock import (
    MEMBERSHIP_GRID,
    TetraTriple,
    commutation_conditions_check,
    lemma15_check,
    lemma16_check,
    synthesize_AB,
    tetra_fundamentals,
    tetra_membership,
    thm4_intertwine_check,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# ------------------------------------------------------------------ matrix I/O


def _reject_constant(name: str):
    raise InputError(f"non-finite number {name} in matrix file")


def parse_matrix(obj: Any, name: str = "matrix", allow_empty: bool = False) -> np.ndarray:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise InputError(f"{name}: expected an object with a 'rows' field")
    rows = obj["rows"]
    if not isinstance(rows, list):
        raise InputError(f"{name}: 'rows' must be a list")
    if not rows:
        if allow_empty:
            return np.zeros((0, 0), dtype=complex)
        raise InputError(f"{name}: empty matrix")
    width = None
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise InputError(f"{name}: row {i} must be a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(f"{name}: ragged rows ({len(row)} vs {width})")
        vals = []
        for j, entry in enumerate(row):
            ok = (
                isinstance(entry, list)
                and len(entry) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            )
            if not ok:
                raise InputError(f"{name}: entry ({i}, {j}) must be [re, im]")
            re, im = float(entry[0]), float(entry[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise InputError(f"{name}: entry ({i}, {j}) is not finite")
            vals.append(complex(re, im))
        out.append(vals)
    return np.array(out, dtype=complex)


def serialize_matrix(m: np.ndarray) -> dict[str, Any]:
    m = np.asarray(m, dtype=complex)
    return {"rows": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def load_matrix(path: str, name: str | None = None, allow_empty: bool = False) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from exc
    return parse_matrix(obj, name or path, allow_empty)


def write_matrix(path: str, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_matrix(m), fh)
        fh.write("\n")


# ----------------------------------------------------------------- run report


class RunReport:
    def __init__(self, command: str, inputs: dict[str, Any]):
        self.command = command
        self.inputs = inputs
        self.checks: list[Check] = []
        self.outputs: dict[str, np.ndarray] = {}
        self.values: dict[str, Any] = {}
        self.flags: list[str] = []

    def add_report(self, rep: Report, prefix: str | None = None) -> None:
        pre = prefix or rep.name
        self.checks.extend(Check(f"{pre}.{c.name}", c.residual, c.tolerance) for c in rep.checks)
        self.flags.extend(rep.flags)

    def add(self, name: str, residual: float, tolerance: float) -> None:
        self.checks.append(Check(name, float(residual), float(tolerance)))

    def fail(self, name: str, message: str) -> None:
        self.add(name, math.inf, 0.0)
        self.flags.append(message)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "checks": [c.to_dict() for c in self.checks],
            "outputs": {k: serialize_matrix(v) for k, v in self.outputs.items()},
            "values": _plain(self.values),
            "flags": self.flags,
            "pass": self.passed,
        }


def _plain(x: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        f = float(x)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return x


def _bound(run: RunReport, name: str, value: float, limit: float, slack: float) -> None:
    run.add(name, max(0.0, value - limit), slack)


# -------------------------------------------------------------------- commands


def cmd_analyze(args) -> RunReport:
    run = RunReport("analyze", {"P": args.P, "tol": args.tol, "degree": args.degree})
    p = load_matrix(args.P, "P")
    if p.shape[0] != p.shape[1]:
        raise InputError(f"P must be square, got {p.shape}")
    norm = op_norm(p)
    run.values["norm_P"] = norm
    _bound(run, "||P|| <= 1", norm, 1.0, args.tol)
    if not run.passed:
        return run
    p = as_contraction(p, tol=args.tol)
    cl = classify(p)
    run.values.update(
        spectral_radius=cl.spectral_radius,
        pure=cl.is_pure,
        cnu=cl.is_cnu,
        unitary_part_dim=cl.unitary_part_dim,
        defect_rank=defect(p).rank,
        defect_rank_adjoint=defect(p, adjoint=True).rank,
    )
    pinf = p_infinity(p)
    run.values["norm_Pinf"] = op_norm(pinf)
    run.outputs["Pinf"] = pinf
    run.add(f"WW* + M_Theta M_Theta* = I (N={args.degree})", lemma8_residual(p, args.degree), 1e-10)
    return run


def _w_checks(run: RunReport, mats: dict[str, np.ndarray]) -> None:
    for label, x in mats.items():
        w = numerical_radius(x)
        run.values[f"w({label})"] = w
        _bound(run, f"w({label}) <= 1", w, 1.0, W_TOL)


def cmd_extract(args) -> RunReport:
    if args.tetra:
        if len(args.paths) != 3:
            raise InputError("extract --tetra needs three files: A B P")
        run = RunReport("extract --tetra", {"A": args.paths[0], "B": args.paths[1], "P": args.paths[2], "tol": args.tol})
        a, b, p = (load_matrix(f, n) for f, n in zip(args.paths, "ABP"))
        t = TetraTriple(a, b, p)
        t.validate()
        fu = tetra_fundamentals(t, args.tol)
        for rep in fu.residuals:
            run.add_report(rep)
        ops = (fu.F1, fu.F2, fu.G1, fu.G2)
        run.add_report(lemma15_check(t, *ops, tol=args.tol))
        run.add_report(lemma16_check(t, *ops, tol=args.tol))
        run.add_report(thm4_intertwine_check(p, *ops, tol=args.tol))
        run.add_report(commutation_conditions_check(fu.G1, fu.G2))
        mats = {"F1": fu.F1, "F2": fu.F2, "G1": fu.G1, "G2": fu.G2}
        _w_checks(run, mats)
        run.outputs.update(mats)
        return run
    if len(args.paths) != 2:
        raise InputError("extract needs two files: S P")
    run = RunReport("extract", {"S": args.paths[0], "P": args.paths[1], "tol": args.tol})
    s, p = (load_matrix(f, n) for f, n in zip(args.paths, "SP"))
    pair = GammaPair(s, p)
    pair.validate()
    fp = fundamental_operators(pair, args.tol)
    run.add_report(fp.residuals[0])
    run.add_report(lemma7_check(pair, fp.F, fp.G, args.tol))
    run.add_report(admissibility_check(AdmissibleCandidate(p, fp.F, fp.G), tol=args.tol))
    _w_checks(run, {"F": fp.F, "G": fp.G})
    run.outputs.update(F=fp.F, G=fp.G)
    return run


def _load_candidate(args) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = load_matrix(args.P, "P")
    f = load_matrix(args.F, "F", allow_empty=True)
    g = load_matrix(args.G, "G", allow_empty=True)
    return p, f, g


def cmd_check_admissible(args) -> RunReport:
    run = RunReport("check-admissible", {"P": args.P, "F": args.F, "G": args.G, "degree": args.degree, "tol": args.tol})
    cand = AdmissibleCandidate(*_load_candidate(args))
    rep = admissibility_check(cand, args.degree, args.tol)
    run.add_report(rep)
    run.values.update(
        horizon=rep.data["horizon"],
        decay=rep.data["decay"],
        first_failing_index=rep.data["first_failing_index"],
    )
    _w_checks(run, {"F": cand.F, "G": cand.G})
    return run


def cmd_synthesize(args) -> RunReport:
    run = RunReport("synthesize", {"P": args.P, "F": args.F, "G": args.G, "tol": args.tol})
    p, f, g = _load_candidate(args)
    try:
        res = synthesize_S(p, f, g, args.tol)
    except NotAdmissible as exc:
        cand = AdmissibleCandidate(p, f, g)
        rep = admissibility_check(cand)
        run.values["first_failing_index"] = rep.data["first_failing_index"]
        run.add_report(rep)
        run.fail("synthesis", f"not admissible: {exc}")
        return run
    run.add_report(res.certificate)
    run.add_report(res.fo_match)
    run.outputs["S"] = res.S
    return run


def cmd_synthesize_tetra(args) -> RunReport:
    names = ("P", "F1", "F2", "G1", "G2")
    paths = (args.P, args.F1, args.F2, args.G1, args.G2)
    run = RunReport("synthesize-tetra", {**dict(zip(names, paths)), "tol": args.tol})
    p = load_matrix(args.P, "P")
    ops = [load_matrix(path, n, allow_empty=True) for path, n in zip(paths[1:], names[1:])]
    try:
        a, b, cert = synthesize_AB(p, *ops, tol=args.tol)
    except PreconditionFailed as exc:
        run.fail(f"precondition.{exc.check}", str(exc))
        return run
    run.add_report(cert)
    run.values["vn_margin"] = cert.data["vn_margin"]
    run.outputs.update(A=a, B=b)
    return run


def cmd_verify_suite(args) -> RunReport:
    run = RunReport("verify-suite", {"seed": args.seed, "cases": args.cases, "dim_max": args.dim_max})
    if args.dim_max < 1 or args.cases < 0:
        raise InputError("--cases must be >= 0 and --dim-max >= 1")
    rep = run_suite(args.seed, args.cases, args.dim_max, args.workers)
    run.add_report(rep, "")
    run.checks = [Check(c.name.lstrip("."), c.residual, c.tolerance) for c in run.checks]
    run.values.update(
        cases=rep.data["cases"],
        checks=rep.data["checks"],
        failed_checks=rep.data["failed_checks"],
        failed_cases=rep.data["failed_cases"],
    )
    return run


def cmd_membership(args) -> RunReport:
    x = [complex(args.coords[2 * i], args.coords[2 * i + 1]) for i in range(3)]
    run = RunReport("membership", {"x": [[z.real, z.imag] for z in x], "grid": args.grid})
    if args.grid < 64:
        raise InputError("--grid must be at least 64")
    if not all(math.isfinite(v) for v in args.coords):
        raise InputError("coordinates must be finite")
    member, margin = tetra_membership(*x, grid=args.grid)
    run.values.update(member=member, margin=margin)
    run.add("member of the closed tetrablock", 0.0 if member else math.inf, 0.0)
    return run


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fundop", description="Fundamental operators of Gamma and tetrablock contractions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a contraction and report its defect data")
    p.add_argument("P")
    p.add_argument("--tol", type=float, default=CONTRACTION_TOL, help="contraction slack on ||P|| (default %(default)g)")
    p.add_argument("--degree", type=int, default=6, help="truncation degree for the Hardy-space identity")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("extract", help="fundamental operators of (S, P), or with --tetra of (A, B, P)")
    p.add_argument("paths", nargs="+", metavar="FILE")
    p.add_argument("--tetra", action="store_true", help="treat the files as A B P")
    p.add_argument("--tol", type=float, default=FUND_TOL, help="identity tolerance (default %(default)g)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check-admissible", help="coefficient check of the intertwining identity")
    for name in ("P", "F", "G"):
        p.add_argument(name)
    p.add_argument("--degree", type=int, default=None, help="coefficient horizon (default: decay rule)")
    p.add_argument("--tol", type=float, default=ADMISSIBLE_TOL, help="(default %(default)g)")
    p.set_defaults(func=cmd_check_admissible)

    p = sub.add_parser("synthesize", help="build S from (P, F, G) with P pure")
    for name in ("P", "F", "G"):
        p.add_argument(name)
    p.add_argument("--tol", type=float, default=1e-14, help="series truncation tolerance (default %(default)g)")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("synthesize-tetra", help="build A, B from (P, F1, F2, G1, G2) with P pure")
    for name in ("P", "F1", "F2", "G1", "G2"):
        p.add_argument(name)
    p.add_argument("--tol", type=float, default=1e-14, help="series truncation tolerance (default %(default)g)")
    p.set_defaults(func=cmd_synthesize_tetra)

    p = sub.add_parser("verify-suite", help="seeded sweep over generated corpora")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--dim-max", type=int, default=6)
    p.add_argument("--workers", type=int, default=1, help="threads; the report is identical for any value")
    p.set_defaults(func=cmd_verify_suite)

    p = sub.add_parser("membership", help="approximate membership of a point in the tetrablock")
    p.add_argument("coords", nargs=6, type=float, metavar="X", help="x1_re x1_im x2_re x2_im x3_re x3_im")
    p.add_argument("--grid", type=int, default=MEMBERSHIP_GRID)
    p.set_defaults(func=cmd_membership)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        run = args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FundopError as exc:
        inputs = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
        run = RunReport(args.command, _plain(inputs))
        run.fail(type(exc).__name__, str(exc))
        print(f"check failed: {exc}", file=sys.stderr)
    sys.stdout.write(json.dumps(run.to_dict(), indent=1) + "\n")
    for flag in run.flags:
        print(f"note: {flag}", file=sys.stderr)
    return EXIT_PASS if run.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
