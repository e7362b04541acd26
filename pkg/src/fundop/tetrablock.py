"""Tetrablock contractions: fundamental-operator pairs, their identities,
synthesis over a pure P, and a point-membership test for the tetrablock.

A commuting triple (A, B, P) has two fundamental operators on each defect
space: ``A - B*P = D_P F1 D_P``, ``B - A*P = D_P F2 D_P`` and the adjoint
system for (A*, B*, P*) giving G1, G2.  Certification here is a bundle of
necessary conditions; no finite test for the closed tetrablock being a
spectral set is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .contraction import as_contraction, char_fn_taylor, choose_degree, classify, defect
from .errors import DimMismatch, InconsistentEquation, NotCommuting, PreconditionFailed
from .gamma import intertwining_residuals, solve_fundamental
from .hardy import HardySpace, mult_shift, toeplitz
from .linalg import as_square, dag, numerical_radius, op_norm
from .report import Report
from .synthesis import stein_series

COMMUTE_TOL = 1e-10
FUND_TOL = 1e-8
W_TOL = 1e-8
MATCH_TOL = 1e-7
VN_SLACK = 1e-6
MEMBERSHIP_GRID = 64


@dataclass(frozen=True)
class TetraTriple:
    A: np.ndarray
    B: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        a, b = as_square(self.A, "A"), as_square(self.B, "B")
        p = as_square(self.P, "P")
        if not a.shape == b.shape == p.shape:
            raise DimMismatch(f"A {a.shape}, B {b.shape}, P {p.shape}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "P", p)

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    @property
    def scale(self) -> float:
        return max(1.0, op_norm(self.A), op_norm(self.B))

    def adjoint(self) -> TetraTriple:
        return TetraTriple(dag(self.A), dag(self.B), dag(self.P))

    def swapped(self) -> TetraTriple:
        return TetraTriple(self.B, self.A, self.P)

    def commutators(self) -> dict[str, float]:
        a, b, p = self.A, self.B, self.P
        return {"AB = BA": op_norm(a @ b - b @ a), "AP = PA": op_norm(a @ p - p @ a), "BP = PB": op_norm(b @ p - p @ b)}

    def validate(self) -> None:
        for name, c in self.commutators().items():
            if c > COMMUTE_TOL * self.scale:
                raise NotCommuting(f"{name} fails by {c:.3e}")
        as_contraction(self.P)


@dataclass
class TetraFundamentals:
    F1: np.ndarray
    F2: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    residuals: list[Report] = field(default_factory=list)


def extract_F12(t: TetraTriple, tol: float = FUND_TOL) -> tuple[np.ndarray, np.ndarray, Report]:
    """F1, F2 on the defect space of P, cross-checked against the joint
    system ``D_P A = X1 D_P + X2* D_P P``, ``D_P B = X2 D_P + X1* D_P P``."""
    t.validate()
    a, b, p = t.A, t.B, t.P
    dp = defect(p)
    f1, r1 = solve_fundamental(a - dag(b) @ p, dp)
    f2, r2 = solve_fundamental(b - dag(a) @ p, dp)
    limit = tol * t.scale
    if max(r1, r2) > limit:
        raise InconsistentEquation(f"fundamental equations not solvable (residuals {r1:.3e}, {r2:.3e})")
    e1, e2 = dp.embed(f1), dp.embed(f2)
    d = dp.D
    rep = Report("fundamental_F12")
    rep.add("A - B*P = D_P F1 D_P", r1, limit)
    rep.add("B - A*P = D_P F2 D_P", r2, limit)
    rep.add("D_P A = F1 D_P + F2* D_P P", op_norm(d @ a - e1 @ d - dag(e2) @ d @ p), limit)
    rep.add("D_P B = F2 D_P + F1* D_P P", op_norm(d @ b - e2 @ d - dag(e1) @ d @ p), limit)
    return f1, f2, rep


def extract_G12(t: TetraTriple, tol: float = FUND_TOL) -> tuple[np.ndarray, np.ndarray, Report]:
    g1, g2, rep = extract_F12(t.adjoint(), tol)
    rep.name = "fundamental_G12"
    return g1, g2, rep


def tetra_fundamentals(t: TetraTriple, tol: float = FUND_TOL) -> TetraFundamentals:
    f1, f2, rf = extract_F12(t, tol)
    g1, g2, rg = extract_G12(t, tol)
    return TetraFundamentals(f1, f2, g1, g2, [rf, rg])


def lemma15_check(t: TetraTriple, f1, f2, g1, g2, tol: float = FUND_TOL) -> Report:
    """P F_i = G_i* P on the defect space of P."""
    p = t.P
    dp, dps = defect(p), defect(p, adjoint=True)
    rep = Report("tetra_defect_relations")
    for i, (f, g) in enumerate(((f1, g1), (f2, g2)), start=1):
        r = (p @ dp.embed(f) - dag(dps.embed(g)) @ p) @ dp.Q
        rep.add(f"PF{i} = G{i}*P", op_norm(r), tol * t.scale)
    return rep


def lemma16_check(t: TetraTriple, f1, f2, g1, g2, tol: float = FUND_TOL) -> Report:
    """On the defect space of P*:
    F1* D_P D_P* - F2 P* = D_P D_P* G1 - P* G2*, and the same with 1 and 2 swapped."""
    p = t.P
    dp, dps = defect(p), defect(p, adjoint=True)
    e1, e2 = dp.embed(f1), dp.embed(f2)
    h1, h2 = dps.embed(g1), dps.embed(g2)
    dd = dp.D @ dps.D
    ps = dag(p)
    rep = Report("tetra_adjoint_defect_relations")
    r1 = (dag(e1) @ dd - e2 @ ps - dd @ h1 + ps @ dag(h2)) @ dps.Q
    r2 = (dag(e2) @ dd - e1 @ ps - dd @ h2 + ps @ dag(h1)) @ dps.Q
    rep.add("F1*D_P D_P* - F2P* = D_P D_P* G1 - P*G2*", op_norm(r1), tol * t.scale)
    rep.add("F2*D_P D_P* - F1P* = D_P D_P* G2 - P*G1*", op_norm(r2), tol * t.scale)
    return rep


def thm4_intertwine_check(p, f1, f2, g1, g2, n: int | None = None, tol: float = FUND_TOL) -> Report:
    """Coefficient form of ``(G1* + G2 z)Theta = Theta(F1 + F2* z)`` and
    ``(G2* + G1 z)Theta = Theta(F2 + F1* z)``, plus the adjoint-triple form
    ``(F1* + F2 z)Theta_{P*} = Theta_{P*}(G1 + G2* z)`` and its partner."""
    p = as_contraction(p)
    f1, f2 = (as_square(x, "F", allow_empty=True) for x in (f1, f2))
    g1, g2 = (as_square(x, "G", allow_empty=True) for x in (g1, g2))
    r, rs = defect(p).rank, defect(p, adjoint=True).rank
    if f1.shape != (r, r) or f2.shape != (r, r) or g1.shape != (rs, rs) or g2.shape != (rs, rs):
        raise DimMismatch(f"F1, F2 must be {r}x{r} and G1, G2 {rs}x{rs}")
    if n is None:
        n = max(choose_degree(p), choose_degree(dag(p)))
    th = char_fn_taylor(p, n)
    tha = char_fn_taylor(dag(p), n)
    rep = Report("tetra_intertwining")
    eqs = (
        ("(G1* + G2 z)Theta = Theta(F1 + F2* z)", intertwining_residuals(th.coeffs, dag(g1), g2, f1, dag(f2))),
        ("(G2* + G1 z)Theta = Theta(F2 + F1* z)", intertwining_residuals(th.coeffs, dag(g2), g1, f2, dag(f1))),
        ("(F1* + F2 z)Theta_* = Theta_*(G1 + G2* z)", intertwining_residuals(tha.coeffs, dag(f1), f2, g1, dag(g2))),
        ("(F2* + F1 z)Theta_* = Theta_*(G2 + G1* z)", intertwining_residuals(tha.coeffs, dag(f2), f1, g2, dag(g1))),
    )
    first = None
    for name, res in eqs:
        rep.add(name, max(res, default=0.0), tol)
        bad = next((i for i, x in enumerate(res) if not x <= tol), None)
        if bad is not None and (first is None or bad < first):
            first = bad
    rep.data.update(horizon=n, decay=max(th.defect_decay, tha.defect_decay), first_failing_index=first)
    return rep


def commutation_conditions_check(g1, g2, tol: float = COMMUTE_TOL) -> Report:
    """[G1, G2] = 0 and [G1, G1*] = [G2, G2*]."""
    g1 = as_square(g1, "G1", allow_empty=True)
    g2 = as_square(g2, "G2", allow_empty=True)
    if g1.shape != g2.shape:
        raise DimMismatch(f"G1 is {g1.shape}, G2 is {g2.shape}")
    scale = max(1.0, op_norm(g1), op_norm(g2)) ** 2
    rep = Report("commutation_conditions")
    rep.add("[G1, G2] = 0", op_norm(g1 @ g2 - g2 @ g1), tol * scale)
    rep.add("[G1, G1*] = [G2, G2*]", op_norm(g1 @ dag(g1) - dag(g1) @ g1 - g2 @ dag(g2) + dag(g2) @ g2), tol * scale)
    return rep


# ---------------------------------------------------------------- membership


def tetra_membership(x1: complex, x2: complex, x3: complex, grid: int = MEMBERSHIP_GRID) -> tuple[bool, float]:
    """Approximate test of 1 - x1 z - x2 w + x3 z w != 0 on the open bidisc.

    For each w on a polar grid (``grid`` radii in [0, 1 - 1/grid], ``4 grid``
    angles) the only zero in z is z*(w) = (1 - x2 w)/(x1 - x3 w); the point
    is a member when |z*(w)| >= 1 - 1/grid everywhere.  The margin is
    min(|z*(w)| - 1), +inf when no w has a zero in z.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    radii = np.linspace(0.0, 1.0 - 1.0 / grid, grid)
    angles = np.arange(4 * grid) * (2 * np.pi / (4 * grid))
    w = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    num = 1 - x2 * w
    den = x1 - x3 * w
    scale = 1.0 + abs(x1) + abs(x2) + abs(x3)
    zero_den = np.abs(den) <= 1e-14 * scale
    zero_num = np.abs(num) <= 1e-14 * scale
    if np.any(zero_den & zero_num):
        # the polynomial vanishes identically in z at this w
        return False, -1.0
    ok = ~zero_den
    if not ok.any():
        return True, float("inf")
    mod = np.abs(num[ok] / den[ok])
    margin = float(np.min(mod) - 1.0)
    return bool(np.min(mod) >= 1.0 - 1.0 / grid), margin


def boundary_point(r: float, psi: float, phi: float) -> tuple[complex, complex, complex]:
    """A point of the distinguished boundary: x2 = r e^{i psi}, x3 = e^{i phi},
    x1 = conj(x2) x3, with 0 <= r <= 1."""
    x2 = r * np.exp(1j * psi)
    x3 = np.exp(1j * phi)
    return np.conj(x2) * x3, x2, x3


# ------------------------------------------------------- von Neumann spot-check

_N_POLYS = 20
_MONOMIALS = [(a, b, c) for a in range(4) for b in range(4) for c in range(4) if a + b + c <= 3]


@lru_cache(maxsize=1)
def _poly_family() -> np.ndarray:
    """Fixed seeded family of cubic polynomials in three variables; row k
    holds the coefficients of polynomial k over ``_MONOMIALS``."""
    rng = np.random.default_rng(20240917)
    c = rng.normal(size=(_N_POLYS, len(_MONOMIALS))) + 1j * rng.normal(size=(_N_POLYS, len(_MONOMIALS)))
    return c / np.sqrt(2 * len(_MONOMIALS))


def _eval_scalar(coeffs: np.ndarray, x1, x2, x3) -> np.ndarray:
    x1, x2, x3 = (np.asarray(v) for v in (x1, x2, x3))
    mons = np.stack([x1**a * x2**b * x3**c for a, b, c in _MONOMIALS], axis=-1)
    return mons @ coeffs.T


def _eval_matrix(coeffs: np.ndarray, a: np.ndarray, b: np.ndarray, p: np.ndarray) -> list[np.ndarray]:
    n = a.shape[0]
    pw = {}
    for name, m in (("a", a), ("b", b), ("p", p)):
        pw[name] = [np.eye(n, dtype=complex)]
        for _ in range(3):
            pw[name].append(pw[name][-1] @ m)
    mons = [pw["a"][i] @ pw["b"][j] @ pw["p"][k] for i, j, k in _MONOMIALS]
    return [sum(c * m for c, m in zip(row, mons)) for row in coeffs]


@lru_cache(maxsize=1)
def _boundary_sup() -> tuple[np.ndarray, np.ndarray]:
    """Sup of |f| over the closed tetrablock for each family polynomial.

    The sup is attained on the distinguished boundary.  A parametrised grid
    is refined by local optimisation from the best grid points; every
    point that enters the sup is confirmed by ``tetra_membership``.
    Returns (sups, argmax points).
    """
    coeffs = _poly_family()
    r = np.linspace(0.0, 1.0, 9)
    ang = np.arange(24) * (2 * np.pi / 24)
    rr, pp, ff = (g.ravel() for g in np.meshgrid(r, ang, ang, indexing="ij"))
    x1, x2, x3 = boundary_point(rr, pp, ff)
    vals = np.abs(_eval_scalar(coeffs, x1, x2, x3))
    sups = np.zeros(_N_POLYS)
    points = np.zeros((_N_POLYS, 3), dtype=complex)
    for k in range(_N_POLYS):
        best_val, best_pt = -1.0, None

        def neg(v, k=k):
            pt = boundary_point(*v)
            return -abs(_eval_scalar(coeffs[k:k + 1], *pt)[0])

        for idx in np.argsort(vals[:, k])[-4:]:
            start = np.array([rr[idx], pp[idx], ff[idx]])
            res = minimize(neg, start, method="L-BFGS-B", bounds=[(0.0, 1.0), (None, None), (None, None)])
            cand = res.x if -res.fun >= vals[idx, k] else start
            val = max(-res.fun, vals[idx, k])
            if val > best_val:
                best_val, best_pt = val, boundary_point(*cand)
        member, _ = tetra_membership(*best_pt)
        if not member:
            raise AssertionError(f"boundary sample {best_pt} failed the membership test")
        sups[k] = best_val
        points[k] = best_pt
    return sups, points


def von_neumann_spot_check(a, b, p, slack: float = VN_SLACK) -> Report:
    """||f(A*, B*, P*)|| <= sup over the closed tetrablock of |f| for a fixed
    family of cubic polynomials."""
    sups, _ = _boundary_sup()
    mats = _eval_matrix(_poly_family(), dag(a), dag(b), dag(p))
    norms = np.array([op_norm(m) for m in mats])
    rep = Report("von_neumann")
    margin = float(np.min(sups - norms))
    rep.add("||f(A*,B*,P*)|| <= sup |f| (20 cubics)", max(0.0, -margin), slack)
    rep.data.update(margin=margin, norms=norms.tolist(), sups=sups.tolist())
    return rep


# ----------------------------------------------------------------- synthesis


def synthesize_AB(p, f1, f2, g1, g2, tol: float = 1e-14) -> tuple[np.ndarray, np.ndarray, Report]:
    """A and B of a tetrablock triple over a pure P with the given
    fundamental operators, as the Stein series

        A = sum_n P^n (D_P* G1* D_P* + P D_P* G2 D_P*) P*^n,  B likewise.

    Raises ``PreconditionFailed`` naming the first violated hypothesis.
    """
    p = as_contraction(p)
    if not classify(p).is_pure:
        raise PreconditionFailed("pure", "P is not pure")
    comm = commutation_conditions_check(g1, g2)
    if not comm.passed:
        raise PreconditionFailed("commutation_conditions", comm.first_failure.name)
    for label, x in (("F1", f1), ("F2", f2), ("G1", g1), ("G2", g2)):
        w = numerical_radius(as_square(x, label, allow_empty=True))
        if w > 1 + W_TOL:
            raise PreconditionFailed("numerical_radius", f"w({label}) = {w:.12g} exceeds 1")
    inter = thm4_intertwine_check(p, f1, f2, g1, g2)
    if not inter.passed:
        raise PreconditionFailed(
            "tetra_intertwining", f"coefficient {inter.data['first_failing_index']} fails ({inter.max_residual:.3e})"
        )
    f1, f2, g1, g2 = (np.asarray(x, dtype=complex) for x in (f1, f2, g1, g2))
    dps = defect(p, adjoint=True)
    d = dps.D

    def core(x, y):
        return d @ dps.embed(dag(x)) @ d + p @ d @ dps.embed(y) @ d

    a = stein_series(p, core(g1, g2), tol)
    b = stein_series(p, core(g2, g1), tol)

    t = TetraTriple(a, b, p)
    cert = Report("tetra_synthesis")
    for name, c in t.commutators().items():
        cert.add(name, c, COMMUTE_TOL * t.scale)
    cert.bound("||A|| <= 1", op_norm(a), 1.0, W_TOL)
    cert.bound("||B|| <= 1", op_norm(b), 1.0, W_TOL)
    if cert.passed:
        try:
            fund = tetra_fundamentals(t)
        except (InconsistentEquation, NotCommuting) as exc:
            cert.add("extraction", float("inf"), MATCH_TOL)
            cert.flags.append(str(exc))
        else:
            cert.extend(fund.residuals[0])
            cert.extend(fund.residuals[1])
            cert.add("F1 recovered", op_norm(fund.F1 - f1), MATCH_TOL)
            cert.add("F2 recovered", op_norm(fund.F2 - f2), MATCH_TOL)
            cert.add("G1 recovered", op_norm(fund.G1 - g1), MATCH_TOL)
            cert.add("G2 recovered", op_norm(fund.G2 - g2), MATCH_TOL)
    vn = von_neumann_spot_check(a, b, p)
    cert.extend(vn)
    cert.data["vn_margin"] = vn.data["margin"]
    return a, b, cert


def gen_pure_tetra(g1, g2, n: int) -> TetraTriple:
    """(M_{G1* + G2 z}, M_{G2* + G1 z}, M_z) compressed to degree <= n.

    The symbols are co-invariant-compatible, so the compression is the
    triple synthesised from (F1, F2, G1, G2) with F_i = G_i* placed at the
    top degree.
    """
    g1 = as_square(g1, "G1")
    g2 = as_square(g2, "G2")
    if g1.shape != g2.shape:
        raise DimMismatch("G1 and G2 differ in size")
    space = HardySpace(g1.shape[0], n)
    a = toeplitz([dag(g1), g2], n).matrix
    b = toeplitz([dag(g2), g1], n).matrix
    return TetraTriple(a, b, mult_shift(space).matrix)
