"""Building Gamma-contractions from fundamental operators, and the general case.

``synthesize_S`` realises ``S = W* M_{G* + Gz} W`` for a pure P.  Applying
W* term by term gives the Stein series

    S = sum_n P^n (D_P* G* D_P* + P D_P* G D_P*) P*^n,

which is what is summed here.  The rest of the module checks the
identities that govern the non-pure case: the relation between S, P and
the limit P_inf^2 of P^n P*^n, the Fourier coefficients of
Delta_P(t)^2 (e^{it} + 1) and Delta_P(t)^2 (F + e^{it} F*) against their
closed forms, and the pure-case equivalence of the two intertwining
conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .contraction import (
    CLASS_TOL,
    as_contraction,
    char_fn_taylor,
    choose_degree,
    classify,
    defect,
    p_infinity,
)
from .errors import DimMismatch, FundopError, NoConvergence, NotAdmissible, NotPure, NotUnitary, NumericalRadiusExceeded
from .gamma import (
    AdmissibleCandidate,
    GammaPair,
    admissibility_check,
    fundamental_operators,
    gamma_contraction_certificate,
)
from .hardy import HardySpace, _w_matrix, mult_pencil, mult_shift, symbol_product, toeplitz
from .linalg import as_square, dag, numerical_radius, op_norm, spectral_radius
from .report import Report

W_TOL = 1e-8
MATCH_TOL = 1e-7
IDENTITY_TOL = 1e-8


@dataclass
class SynthesisResult:
    S: np.ndarray
    certificate: Report
    fo_match: Report

    @property
    def passed(self) -> bool:
        return self.certificate.passed and self.fo_match.passed


@dataclass(frozen=True)
class CoeffPair:
    n: int
    lhs: np.ndarray
    rhs: np.ndarray
    residual: float
    tail_bound: float = 0.0
    common: np.ndarray | None = None

    def within(self, slack: float = 1e-10) -> bool:
        return bool(self.residual <= self.tail_bound + slack)


def stein_series(p: np.ndarray, core: np.ndarray, tol: float = 1e-14, max_terms: int = 100_000) -> np.ndarray:
    """sum_n P^n core P*^n for a pure P.

    Stops once ||P^n|| ||P*^n|| ||core|| <= tol (1 - rho^2); the tail is
    then geometric with that ratio.
    """
    rho = spectral_radius(p)
    if rho >= 1 - CLASS_TOL:
        raise NotPure(f"spectral radius {rho} is not below 1")
    cn = op_norm(core)
    stop = tol * (1 - rho**2)
    total = core.copy()
    pw = np.eye(p.shape[0], dtype=complex)
    for _ in range(max_terms):
        pw = pw @ p
        npw = op_norm(pw)
        if npw * npw * cn <= stop:
            return total
        total = total + pw @ core @ dag(pw)
    raise NoConvergence(f"series not settled after {max_terms} terms")


def _require_pure(p: np.ndarray) -> None:
    if not classify(p).is_pure:
        raise NotPure("synthesis needs a pure contraction")


def synthesize_S(p, f, g, tol: float = 1e-14) -> SynthesisResult:
    """The S of a Gamma-contraction (S, P) with fundamental operators F and G.

    Requires P pure, w(F), w(G) <= 1 and the coefficient identities of
    ``Theta(F + F*z) = (G* + Gz)Theta``.
    """
    cand = AdmissibleCandidate(p, f, g)
    p, f, g = cand.P, cand.F, cand.G
    _require_pure(p)
    for label, x in (("F", f), ("G", g)):
        w = numerical_radius(x)
        if w > 1 + W_TOL:
            raise NotAdmissible(f"w({label}) = {w:.12g} exceeds 1")
    adm = admissibility_check(cand)
    if not adm.passed:
        raise NotAdmissible(
            f"intertwining fails at coefficient {adm.data['first_failing_index']} "
            f"(residual {adm.max_residual:.3e})"
        )
    dps = defect(p, adjoint=True)
    core = dps.D @ dps.embed(dag(g)) @ dps.D + p @ dps.D @ dps.embed(g) @ dps.D
    s = stein_series(p, core, tol)

    pair = GammaPair(s, p)
    cert = gamma_contraction_certificate(pair)
    cert.bound("||S|| <= 2", op_norm(s), 2.0, W_TOL)
    fo = Report("fo_match")
    try:
        fp = fundamental_operators(pair)
    except FundopError as exc:  # extraction failure is a failed match, not a crash
        fo.add("extract", float("inf"), MATCH_TOL)
        fo.flags.append(str(exc))
    else:
        fo.add("F", op_norm(fp.F - f), MATCH_TOL)
        fo.add("G", op_norm(fp.G - g), MATCH_TOL)
        fo.add("S* - SP* = D_P* G D_P*", op_norm(dag(s) - s @ dag(p) - dps.D @ dps.embed(g) @ dps.D), IDENTITY_TOL)
    return SynthesisResult(s, cert, fo)


def lemma12_check(pair: GammaPair, tol: float = IDENTITY_TOL) -> Report:
    """P_inf^2 + P P_inf^2 - P P_inf^2 S* = 0.

    Holds when the unitary part of (S, P) has the form (U + I, U); for
    other Gamma-unitary summands a failure is the expected outcome.
    """
    s, p = pair.S, as_contraction(pair.P)
    pinf = p_infinity(p)
    rep = Report("unitary_part_relation")
    rep.add("Pinf + P Pinf - P Pinf S* = 0", op_norm(pinf + p @ pinf - p @ pinf @ dag(s)), tol * pair.scale)
    return rep


class _BoundaryData:
    """Shared pieces for the Fourier-coefficient identities."""

    def __init__(self, p: np.ndarray, n_terms: int):
        self.P = p
        self.dp = defect(p)
        self.dps = defect(p, adjoint=True)
        self.pinf = p_infinity(p)
        self.N = n_terms
        ts = char_fn_taylor(p, n_terms)
        self.theta = ts.coeffs
        # tau[j] = ||P*^j D_P Q||
        v = self.dp.D @ self.dp.Q
        tau = []
        for _ in range(n_terms + 1):
            tau.append(op_norm(v))
            v = dag(p) @ v
        self.tau = tau

    def c(self, m: int) -> np.ndarray:
        """Fourier coefficient m of I - Theta(e^{it})* Theta(e^{it}), from N terms."""
        if m < 0:
            return dag(self.c(-m))
        r = self.dp.rank
        acc = np.eye(r, dtype=complex) if m == 0 else np.zeros((r, r), dtype=complex)
        for k in range(0, self.N - m + 1):
            acc -= dag(self.theta[k]) @ self.theta[k + m]
        return acc

    def c_tail(self, m: int) -> float:
        m = abs(m)
        if m > self.N:
            return np.inf
        return self.tau[self.N - m] * self.tau[self.N]

    def pw(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.P, k)

    def pws(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(dag(self.P), k)

    def sandwich(self, x: np.ndarray) -> np.ndarray:
        """Q* D_P x D_P Q."""
        d, q = self.dp.D, self.dp.Q
        return dag(q) @ d @ x @ d @ q


def _check_index(n: int, n_terms: int) -> None:
    if 2 * abs(n) > n_terms:
        raise ValueError(f"|n| = {abs(n)} needs at least {2 * abs(n)} series terms, got {n_terms}")


def coeff_C(p, n: int, n_terms: int) -> CoeffPair:
    """Coefficient n of Delta_P(t)^2 (e^{it} + 1): raw series vs closed form."""
    p = as_contraction(p)
    _check_index(n, n_terms)
    bd = _BoundaryData(p, n_terms)
    lhs = bd.c(n) + bd.c(n - 1)
    tail = bd.c_tail(n) + bd.c_tail(n - 1)
    rhs = _closed_C(bd, n)
    return CoeffPair(n, lhs, rhs, op_norm(lhs - rhs), tail)


def _closed_C(bd: _BoundaryData, n: int) -> np.ndarray:
    pinf, p = bd.pinf, bd.P
    ps = dag(p)
    if n == 0:
        return bd.sandwich(p @ pinf) + bd.sandwich(pinf)
    if n == 1:
        return bd.sandwich(pinf) + bd.sandwich(pinf @ ps)
    if n >= 2:
        return bd.sandwich(pinf @ bd.pws(n - 1)) + bd.sandwich(pinf @ bd.pws(n))
    k = bd.pw(1 - n)
    return bd.sandwich(k @ pinf) + bd.sandwich(k @ pinf @ ps)


def _closed_D(bd: _BoundaryData, s: np.ndarray, fe: np.ndarray, ge: np.ndarray, n: int) -> np.ndarray:
    pinf, p = bd.pinf, bd.P
    d, ds, q = bd.dp.D, bd.dps.D, bd.dp.Q
    ss = dag(s)
    if n == 0:
        full = d @ d @ fe + d @ ds @ ge @ p - d @ s @ d + d @ p @ pinf @ ss @ d
        return dag(q) @ full @ q
    if n == 1:
        full = dag(fe) @ d @ d + dag(p) @ dag(ge) @ ds @ d - d @ ss @ d + d @ pinf @ ss @ d
        return dag(q) @ full @ q
    if n >= 2:
        return bd.sandwich(pinf @ bd.pws(n - 1) @ ss)
    return bd.sandwich(bd.pw(1 - n) @ pinf @ ss)


def _common_LR(bd: _BoundaryData, s: np.ndarray, n: int) -> np.ndarray:
    pinf, p = bd.pinf, bd.P
    ss = dag(s)
    if n == 0:
        return bd.sandwich(p @ pinf @ ss)
    if n == 1:
        return bd.sandwich(pinf @ ss)
    if n >= 2:
        return bd.sandwich(pinf @ ss @ bd.pws(n - 1))
    return bd.sandwich(bd.pw(1 - n) @ pinf @ ss)


def coeff_D(pair: GammaPair, f, g, n: int, n_terms: int) -> CoeffPair:
    """Coefficient n of Delta_P(t)^2 (F + e^{it} F*): raw series vs closed form."""
    p = as_contraction(pair.P)
    _check_index(n, n_terms)
    bd = _BoundaryData(p, n_terms)
    f = np.asarray(f, dtype=complex)
    lhs = bd.c(n) @ f + bd.c(n - 1) @ dag(f)
    tail = op_norm(f) * (bd.c_tail(n) + bd.c_tail(n - 1))
    rhs = _closed_D(bd, pair.S, bd.dp.embed(f), bd.dps.embed(np.asarray(g, dtype=complex)), n)
    return CoeffPair(n, lhs, rhs, op_norm(lhs - rhs), tail)


def coeff_LR(pair: GammaPair, f, g, n: int) -> CoeffPair:
    """Closed-form coefficients L_n (of Delta^2 M_{e^{it}+1}) and R_n (of
    Delta^2 M_{F + zF*}) against their common simplification.

    The residual is the largest pairwise disagreement of the three.
    """
    p = as_contraction(pair.P)
    bd = _BoundaryData(p, max(2 * abs(n), 1))
    lhs = _closed_C(bd, n)
    rhs = _closed_D(bd, pair.S, bd.dp.embed(np.asarray(f, dtype=complex)), bd.dps.embed(np.asarray(g, dtype=complex)), n)
    common = _common_LR(bd, pair.S, n)
    resid = max(op_norm(lhs - rhs), op_norm(lhs - common), op_norm(rhs - common))
    return CoeffPair(n, lhs, rhs, resid, 0.0, common)


def _gram_norm(a: np.ndarray) -> float:
    """Operator norm from the top eigenvalue of the smaller Gram matrix;
    much cheaper than a full SVD for the large Toeplitz residuals."""
    if a.size == 0:
        return 0.0
    gram = dag(a) @ a if a.shape[1] <= a.shape[0] else a @ dag(a)
    n = gram.shape[0]
    top = scipy.linalg.eigh(gram, eigvals_only=True, subset_by_index=[n - 1, n - 1])[0]
    return float(np.sqrt(max(top, 0.0)))


def remark13_check(p, f, g, n: int | None = None, tol: float = IDENTITY_TOL) -> Report:
    """Pure-case equivalence of the two intertwining conditions.

    * admissibility: the coefficient identities;
    * Toeplitz form: M_{G*+zG} M_Theta = M_Theta M_{F+zF*} as block Toeplitz
      matrices;
    * range form with V_1 = I, Y = F: Ran M_Theta is invariant under
      M_{G*+zG} (checked through W W*, the complementary projection) and
      the compression M_Theta* M_{G*+zG} M_Theta equals M_{Y+zY*}.

    ``data['agree']`` records whether the three verdicts coincide.
    """
    cand = AdmissibleCandidate(p, f, g)
    p, f, g = cand.P, cand.F, cand.G
    _require_pure(p)
    horizon = n if n is not None else choose_degree(p)
    deg = 2 * horizon
    dps = defect(p, adjoint=True)
    adm = admissibility_check(cand, deg, tol)

    # products of lower-triangular Toeplitz matrices are Toeplitz in the
    # product symbol, so build them from coefficients instead of matmuls
    theta = char_fn_taylor(p, deg).coeffs
    m = toeplitz(theta, deg).matrix
    left = symbol_product([dag(g), g], theta, deg)
    right = symbol_product(theta, [f, dag(f)], deg)
    lm = toeplitz(left, deg).matrix
    r_toep = _gram_norm(toeplitz([a - b for a, b in zip(left, right)], deg).matrix)

    # ||W X|| = ||R X|| for W = QR, so the projection never needs forming
    w = _w_matrix(p, deg, dps)
    invariance = op_norm(np.linalg.qr(w, mode="r") @ (dag(w) @ lm))
    r, keep = f.shape[0], (horizon + 1) * f.shape[0]
    t = dag(m[:, :keep]) @ lm[:, :keep]
    rf = toeplitz([f, dag(f)], horizon).matrix
    y = t[:r, :r]
    compression = _gram_norm(t - rf)

    rep = Report("intertwining_forms")
    rep.add("admissibility", adm.max_residual, tol)
    rep.add("Toeplitz form: M_{G*+zG} M_Theta = M_Theta M_{F+zF*}", r_toep, tol)
    rep.add("range form: Ran M_Theta invariant under M_{G*+zG}", invariance, tol)
    rep.add("range form: compression = M_{Y+zY*}, Y = F", compression, tol)
    v_toep = rep.checks[1].passed
    v_range = rep.checks[2].passed and rep.checks[3].passed
    rep.data.update(
        horizon=horizon,
        Y=y,
        Y_minus_F=op_norm(y - f),
        w_Y=numerical_radius(y) if r else 0.0,
        verdicts=(adm.passed, v_toep, v_range),
        agree=adm.passed == v_toep == v_range,
    )
    return rep


def gen_pure_gamma(y, n: int) -> GammaPair:
    """(M_{Y*+zY}, M_z) compressed to polynomials of degree <= n.

    Degree-<=n polynomials are co-invariant for both operators, so the
    compression of this pure Gamma-isometry is a pure Gamma-contraction
    with nilpotent P.
    """
    y = as_square(y, "Y")
    w = numerical_radius(y)
    if w > 1 + W_TOL:
        raise NumericalRadiusExceeded(f"w(Y) = {w:.12g} exceeds 1")
    space = HardySpace(y.shape[0], n)
    return GammaPair(mult_pencil(y, space).matrix, mult_shift(space).matrix)


def gen_gamma_unitary(u) -> GammaPair:
    """(U + I, U): the symmetrization of the commuting unitaries U and I."""
    u = as_square(u, "U")
    ident = np.eye(u.shape[0])
    err = max(op_norm(dag(u) @ u - ident), op_norm(u @ dag(u) - ident))
    if err > 1e-10:
        raise NotUnitary(f"||U*U - I|| = {err:.3e}")
    return GammaPair(u + ident, u)


def gen_direct_sum(a: GammaPair, b: GammaPair) -> GammaPair:
    return GammaPair(_block_diag(a.S, b.S), _block_diag(a.P, b.P))


def _block_diag(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + y.shape[1]), dtype=complex)
    out[: x.shape[0], : x.shape[1]] = x
    out[x.shape[0]:, x.shape[1]:] = y
    return out


def conjugate(pair: GammaPair, v: np.ndarray) -> GammaPair:
    """(V S V*, V P V*) for a unitary V."""
    if v.shape[0] != pair.dim:
        raise DimMismatch("unitary has the wrong size")
    return GammaPair(v @ pair.S @ dag(v), v @ pair.P @ dag(v))
