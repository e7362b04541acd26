"""A contraction P and the objects built from P alone.

Defect operators and defect spaces, the pure / c.n.u. classification, the
characteristic function (pointwise and as a Taylor series), the
asymptotic limit of P^n P*^n and the boundary defect Delta_P(t).

Operators "on the defect space" are returned in the coordinates of the
orthonormal basis ``Q`` held by :class:`DefectData`; an ``r x r`` matrix
``F`` stands for the full-space operator ``Q F Q*``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotContraction, ResolventSingular
from .linalg import (
    as_square,
    dag,
    op_norm,
    psd_sqrt,
    range_basis,
)

CONTRACTION_TOL = 1e-10
DEFECT_TOL = 1e-10
CLASS_TOL = 1e-8
DECAY_TOL = 1e-8
MAX_DEGREE = 200
_COND_LIMIT = 1e12


def as_contraction(p, tol: float = CONTRACTION_TOL) -> np.ndarray:
    p = as_square(p, "P")
    norm = op_norm(p)
    if norm > 1 + tol:
        raise NotContraction(f"||P|| = {norm:.12g} exceeds 1 + {tol:g}")
    return p


@dataclass(frozen=True)
class DefectData:
    D: np.ndarray
    Q: np.ndarray
    rank: int

    @property
    def projector(self) -> np.ndarray:
        return self.Q @ dag(self.Q)

    def embed(self, x: np.ndarray) -> np.ndarray:
        """Defect-coordinate operator -> full-space operator ``Q X Q*``."""
        return self.Q @ x @ dag(self.Q)

    def compress(self, x: np.ndarray) -> np.ndarray:
        return dag(self.Q) @ x @ self.Q


def defect(p, adjoint: bool = False, tol: float = DEFECT_TOL) -> DefectData:
    """D_P (or D_{P*} when ``adjoint``) with an orthonormal basis of its range.

    ``I - P*P`` is PSD only up to rounding; its eigenvalues below ``tol``
    (absolute, the identity sets the scale) are taken as exact zeros so
    the numerical rank is stable for contractions with isometric parts.
    """
    p = as_contraction(p)
    n = p.shape[0]
    g = p @ dag(p) if adjoint else dag(p) @ p
    # the Gram matrix is Hermitian in exact arithmetic only
    h = np.eye(n) - (g + dag(g)) / 2
    d = psd_sqrt(h, tol=tol)
    q, rank = range_basis(d)
    return DefectData(d, q, rank)


@dataclass(frozen=True)
class Classification:
    spectral_radius: float
    is_pure: bool
    is_cnu: bool
    unitary_part_dim: int


def classify(p, tol: float = CLASS_TOL) -> Classification:
    p = as_contraction(p)
    lam, vec = np.linalg.eig(p)
    rho = float(np.max(np.abs(lam)))
    unimodular = np.abs(lam) >= 1 - tol
    if unimodular.any():
        sv = np.linalg.svd(vec[:, unimodular], compute_uv=False)
        udim = int(np.sum(sv > 1e-6 * sv[0]))
    else:
        udim = 0
    is_pure = rho < 1 - tol
    is_cnu = udim == 0
    # a unimodular eigenvector of a finite-dimensional contraction spans a
    # reducing subspace on which P is unitary, so the two notions coincide
    assert is_pure == is_cnu, (rho, udim)
    return Classification(rho, is_pure, is_cnu, udim)


def _theta(p: np.ndarray, z: complex, dp: DefectData, dps: DefectData) -> np.ndarray:
    n = p.shape[0]
    m = np.eye(n) - z * dag(p)
    if np.linalg.cond(m) > _COND_LIMIT:
        raise ResolventSingular(f"I - zP* is singular at z = {z}")
    full = -p + z * dps.D @ np.linalg.solve(m, dp.D)
    return dag(dps.Q) @ full @ dp.Q


def char_fn_eval(p, z: complex) -> np.ndarray:
    """Theta_P(z) in defect coordinates, shape rank(D_{P*}) x rank(D_P)."""
    p = as_contraction(p)
    if abs(z) > 1 - 1e-8:
        raise ValueError(f"|z| = {abs(z)} is not inside the disc; use delta_eval on the circle")
    return _theta(p, complex(z), defect(p), defect(p, adjoint=True))


def defect_decay(p, n: int, dp: DefectData | None = None) -> float:
    """||P*^n D_P Q||, an upper bound for every Taylor coefficient of
    Theta_P beyond index n and for the tail of any W-type series."""
    p = as_contraction(p)
    dp = dp or defect(p)
    return op_norm(np.linalg.matrix_power(dag(p), n) @ dp.D @ dp.Q)


@dataclass(frozen=True)
class TaylorSeries:
    coeffs: list[np.ndarray]
    decay: float  # ||P*^N||
    defect_decay: float  # ||P*^N D_P Q||, bounds ||Theta_n|| for n > N

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> np.ndarray:
        out = np.zeros_like(self.coeffs[0])
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def tail_bound(self, z: complex) -> float:
        """Bound on ||Theta(z) - partial sum|| from the defect decay."""
        r = abs(z)
        return self.defect_decay * r ** (self.degree + 1) / (1 - r)


def char_fn_taylor(p, n: int) -> TaylorSeries:
    """Coefficients Theta_0..Theta_N: -P, then D_{P*} P*^k D_P (k = 0..N-1)."""
    p = as_contraction(p)
    dp, dps = defect(p), defect(p, adjoint=True)
    left = dag(dps.Q) @ dps.D
    coeffs = [-dag(dps.Q) @ p @ dp.Q]
    v = dp.D @ dp.Q  # P*^k D_P Q
    for _ in range(n):
        coeffs.append(left @ v)
        v = dag(p) @ v
    decay = op_norm(np.linalg.matrix_power(dag(p), n))
    # v now holds P*^N D_P Q
    return TaylorSeries(coeffs, decay, op_norm(v))


def choose_degree(p, tol: float = DECAY_TOL, cap: int = MAX_DEGREE) -> int:
    """Smallest N with ||P*^N D_P|| <= tol (capped).

    For a pure P this is reached once the pure dynamics die out; on a
    unitary summand D_P vanishes, so the rule is meaningful there too.
    """
    p = as_contraction(p)
    dp = defect(p)
    v = dp.D @ dp.Q
    for k in range(cap + 1):
        if op_norm(v) <= tol:
            return max(k, 1)
        v = dag(p) @ v
    return cap


def pure_degree(p, tol: float = DECAY_TOL, cap: int = MAX_DEGREE) -> int:
    """Smallest N with ||P^{N+1}|| <= tol (capped) -- the W-isometry horizon."""
    p = as_contraction(p)
    m = p.copy()
    for k in range(cap + 1):
        if op_norm(m) <= tol:
            return max(k, 1)
        m = m @ p
    return cap


def p_infinity(p, n_max: int = 2**48, tol: float = 1e-12) -> np.ndarray:
    """Limit of P^n P*^n, by repeated squaring of P (at most log2(n_max) squarings)."""
    p = as_contraction(p)
    power = p.copy()
    current = power @ dag(power)
    n = 1
    diff = np.inf
    while n < n_max:
        power = power @ power
        n *= 2
        nxt = power @ dag(power)
        diff = op_norm(nxt - current)
        current = nxt
        if diff <= tol:
            break
    if diff > 1e-8:
        raise NoConvergence(f"P^n P*^n not settled after n = {n} (step {diff:.3e})")
    return (current + dag(current)) / 2


def delta_eval(p, t: float) -> np.ndarray:
    """Delta_P(t) = (I - Theta(e^{it})* Theta(e^{it}))^{1/2} on the defect space."""
    p = as_contraction(p)
    dp, dps = defect(p), defect(p, adjoint=True)
    th = _theta(p, np.exp(1j * t), dp, dps)
    g = dag(th) @ th
    h = np.eye(dp.rank) - (g + dag(g)) / 2
    return psd_sqrt(h, tol=DEFECT_TOL)


__all__ = [
    "Classification",
    "DefectData",
    "TaylorSeries",
    "as_contraction",
    "char_fn_eval",
    "char_fn_taylor",
    "choose_degree",
    "classify",
    "defect",
    "defect_decay",
    "delta_eval",
    "p_infinity",
    "pure_degree",
]
