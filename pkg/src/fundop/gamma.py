"""Fundamental operators of Gamma-contractions and the identities they obey.

A commuting pair (S, P) with the symmetrized bidisc as a spectral set has
a unique F on the defect space of P solving ``S - S*P = D_P F D_P``; the
adjoint pair (S*, P*) has its own G.  This module extracts F and G,
verifies the companion identities, tests the coefficient form of the
necessary condition ``Theta(z)(F + F*z) = (G* + Gz)Theta(z)`` and
certifies Gamma-contraction / Gamma-isometry / Gamma-unitary membership by
checkable criteria.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contraction import (
    CONTRACTION_TOL,
    DefectData,
    as_contraction,
    char_fn_taylor,
    choose_degree,
    defect,
)
from .errors import DimMismatch, InconsistentEquation, NotCommuting
from .linalg import as_square, dag, numerical_radius, op_norm, pinv_on_range, spectral_radius
from .report import Report

COMMUTE_TOL = 1e-10
FUND_TOL = 1e-8
W_TOL = 1e-8
ADMISSIBLE_TOL = 1e-8


@dataclass(frozen=True)
class GammaPair:
    S: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        s = as_square(self.S, "S")
        p = as_square(self.P, "P")
        if s.shape != p.shape:
            raise DimMismatch(f"S is {s.shape}, P is {p.shape}")
        object.__setattr__(self, "S", s)
        object.__setattr__(self, "P", p)

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    @property
    def scale(self) -> float:
        return max(1.0, op_norm(self.S))

    def adjoint(self) -> GammaPair:
        return GammaPair(dag(self.S), dag(self.P))

    def validate(self) -> None:
        """Raise unless the pair commutes and P is a contraction."""
        c = op_norm(self.S @ self.P - self.P @ self.S)
        if c > COMMUTE_TOL * self.scale:
            raise NotCommuting(f"||SP - PS|| = {c:.3e}")
        as_contraction(self.P)


@dataclass
class FundamentalPair:
    F: np.ndarray
    G: np.ndarray
    residuals: list[Report] = field(default_factory=list)


@dataclass(frozen=True)
class AdmissibleCandidate:
    P: np.ndarray
    F: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        p = as_contraction(self.P)
        f = as_square(self.F, "F", allow_empty=True)
        g = as_square(self.G, "G", allow_empty=True)
        r, rs = defect(p).rank, defect(p, adjoint=True).rank
        if f.shape[0] != r or g.shape[0] != rs:
            raise DimMismatch(
                f"F must be {r}x{r} and G {rs}x{rs} (defect ranks), got {f.shape}, {g.shape}"
            )
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "F", f)
        object.__setattr__(self, "G", g)


def solve_fundamental(x: np.ndarray, dd: DefectData) -> tuple[np.ndarray, float]:
    """Least-squares solution of ``D X' D = x`` on the defect space.

    Returns X' in defect coordinates and ``||D (Q X' Q*) D - x||``.
    """
    dplus = pinv_on_range(dd.D, dd.Q)
    sol = dag(dd.Q) @ dplus @ x @ dplus @ dd.Q
    resid = op_norm(dd.D @ dd.embed(sol) @ dd.D - x)
    return sol, resid


def defect_intertwining_residual(pair: GammaPair, f: np.ndarray, dp: DefectData | None = None) -> float:
    """||D_P S - F D_P - F* D_P P|| with F embedded in the full space."""
    s, p = pair.S, pair.P
    dp = dp or defect(p)
    fe = dp.embed(f)
    return op_norm(dp.D @ s - fe @ dp.D - dag(fe) @ dp.D @ p)


def _extract(pair: GammaPair, tol: float) -> tuple[np.ndarray, float, float]:
    pair.validate()
    dp = defect(pair.P)
    f, resid = solve_fundamental(pair.S - dag(pair.S) @ pair.P, dp)
    dres = defect_intertwining_residual(pair, f, dp)
    limit = tol * pair.scale
    if resid > limit:
        raise InconsistentEquation(
            f"S - S*P is not of the form D_P F D_P (residual {resid:.3e} > {limit:.1e})"
        )
    return f, resid, dres


def extract_F(pair: GammaPair, tol: float = FUND_TOL) -> tuple[np.ndarray, float]:
    """Fundamental operator of (S, P); residual is the larger of the
    fundamental-equation and the ``D_P S = F D_P + F* D_P P`` residuals."""
    f, resid, dres = _extract(pair, tol)
    return f, max(resid, dres)


def extract_G(pair: GammaPair, tol: float = FUND_TOL) -> tuple[np.ndarray, float]:
    return extract_F(pair.adjoint(), tol)


def fundamental_operators(pair: GammaPair, tol: float = FUND_TOL) -> FundamentalPair:
    f, fres, fdres = _extract(pair, tol)
    g, gres, gdres = _extract(pair.adjoint(), tol)
    rep = Report("fundamental")
    limit = tol * pair.scale
    rep.add("S - S*P = D_P F D_P", fres, limit)
    rep.add("D_P S = F D_P + F* D_P P", fdres, limit)
    rep.add("S* - SP* = D_P* G D_P*", gres, limit)
    rep.add("D_P* S* = G D_P* + G* D_P* P*", gdres, limit)
    return FundamentalPair(f, g, [rep])


def lemma7_check(pair: GammaPair, f: np.ndarray, g: np.ndarray, tol: float = FUND_TOL) -> Report:
    """(a) PF = G*P and (b) D_P* D_P F - PF* = G* D_P* D_P - GP, on D_P."""
    p = pair.P
    dp, dps = defect(p), defect(p, adjoint=True)
    fe, ge = dp.embed(f), dps.embed(g)
    a = (p @ fe - dag(ge) @ p) @ dp.Q
    b = (dps.D @ dp.D @ fe - p @ dag(fe) - dag(ge) @ dps.D @ dp.D + ge @ p) @ dp.Q
    rep = Report("defect_relations")
    scale = pair.scale
    rep.add("PF = G*P", op_norm(a), tol * scale)
    rep.add("D_P*D_P F - PF* = G*D_P*D_P - GP", op_norm(b), tol * scale)
    return rep


def intertwining_residuals(
    theta: list[np.ndarray],
    left0: np.ndarray,
    left1: np.ndarray,
    right0: np.ndarray,
    right1: np.ndarray,
) -> list[float]:
    """Coefficient residuals of ``(left0 + left1 z) Theta(z) = Theta(z)(right0 + right1 z)``.

    Coefficient n reads ``left0 Th_n + left1 Th_{n-1} - Th_n right0 -
    Th_{n-1} right1`` for n = 0..N+1 (Th_{-1} = Th_{N+1} = 0).
    """
    zero = np.zeros_like(theta[0])
    ext = [zero, *theta, zero]
    cur, prev = np.array(ext[1:]), np.array(ext[:-1])
    r = left0 @ cur + left1 @ prev - cur @ right0 - prev @ right1
    if r.size == 0:
        return [0.0] * len(r)
    return [float(x) for x in np.linalg.norm(r, ord=2, axis=(1, 2))]


def admissibility_check(cand: AdmissibleCandidate, n: int | None = None, tol: float = ADMISSIBLE_TOL) -> Report:
    """Coefficient-wise ``Theta(z)(F + F*z) = (G* + Gz)Theta(z)``.

    The horizon ``n`` defaults to the decay rule; the report carries the
    defect decay ``||P*^n D_P||`` which bounds every coefficient beyond
    the horizon, so a pass certifies the identity on the disc up to that
    tail.
    """
    p, f, g = cand.P, cand.F, cand.G
    if n is None:
        n = choose_degree(p)
    ts = char_fn_taylor(p, n)
    res = intertwining_residuals(ts.coeffs, dag(g), g, f, dag(f))
    rep = Report("admissibility")
    worst = int(np.argmax(res)) if res else 0
    rep.add("Theta(F + F*z) = (G* + Gz)Theta", max(res, default=0.0), tol)
    rep.data.update(
        horizon=n,
        decay=ts.defect_decay,
        worst_index=worst,
        first_failing_index=next((i for i, r in enumerate(res) if not r <= tol), None),
        coefficient_residuals=res,
    )
    return rep


def gamma_contraction_certificate(pair: GammaPair, tol: float = W_TOL) -> Report:
    """Sufficient test for a Gamma-contraction.

    Commuting, ||P|| <= 1, spectral radius of S at most 2, and both
    fundamental equations solvable with numerical radius at most one.  A
    pair with ||S|| > 2 is flagged; that never happens for a genuine
    Gamma-contraction.
    """
    s, p = pair.S, pair.P
    rep = Report("gamma_contraction")
    scale = pair.scale
    rep.add("SP = PS", op_norm(s @ p - p @ s), COMMUTE_TOL * scale)
    rep.bound("||P|| <= 1", op_norm(p), 1.0, CONTRACTION_TOL)
    rep.bound("r(S) <= 2", spectral_radius(s), 2.0, tol)
    norm_s = op_norm(s)
    rep.data["norm_S"] = norm_s
    if norm_s > 2 + tol:
        rep.flags.append(f"||S|| = {norm_s:.12g} exceeds 2")
    if not rep.passed:
        return rep
    for label, pr in (("F", pair), ("G", pair.adjoint())):
        dd = defect(pr.P)
        x, resid = solve_fundamental(pr.S - dag(pr.S) @ pr.P, dd)
        rep.add(f"fundamental equation ({label})", resid, FUND_TOL * scale)
        w = numerical_radius(x)
        rep.data[f"w({label})"] = w
        rep.bound(f"w({label}) <= 1", w, 1.0, tol)
    return rep


def gamma_isometry_certificate(s, p, domain: np.ndarray | None = None, tol: float = W_TOL) -> Report:
    """P*P = I, SP = PS, ||S|| <= 2 and S = S*P.

    ``domain`` (orthonormal columns) restricts the identities to a
    subspace, e.g. the degrees below a truncation edge.
    """
    return _gamma_boundary(s, p, domain, tol, unitary=False)


def gamma_unitary_certificate(s, p, domain: np.ndarray | None = None, tol: float = W_TOL) -> Report:
    return _gamma_boundary(s, p, domain, tol, unitary=True)


def _gamma_boundary(s, p, domain, tol, unitary):
    pair = GammaPair(s, p)
    s, p = pair.S, pair.P
    j = np.eye(pair.dim) if domain is None else np.asarray(domain, dtype=complex)
    ident = np.eye(pair.dim)
    rep = Report("gamma_unitary" if unitary else "gamma_isometry")
    rep.add("P*P = I", op_norm((dag(p) @ p - ident) @ j), tol)
    if unitary:
        rep.add("PP* = I", op_norm((p @ dag(p) - ident) @ j), tol)
    rep.add("SP = PS", op_norm((s @ p - p @ s) @ j), tol * pair.scale)
    rep.bound("||S|| <= 2", op_norm(s @ j), 2.0, tol)
    rep.add("S = S*P", op_norm((s - dag(s) @ p) @ j), tol * pair.scale)
    return rep


__all__ = [
    "AdmissibleCandidate",
    "FundamentalPair",
    "GammaPair",
    "admissibility_check",
    "extract_F",
    "extract_G",
    "fundamental_operators",
    "gamma_contraction_certificate",
    "gamma_isometry_certificate",
    "gamma_unitary_certificate",
    "intertwining_residuals",
    "defect_intertwining_residual",
    "lemma7_check",
    "solve_fundamental",
]
