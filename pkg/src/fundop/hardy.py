"""Degree-truncated vector Hardy space H^2 (x) E.

Vectors are stacked degree-major: the ``fiber_dim`` coordinates of z^0,
then those of z^1, ..., up to z^N.  A multiplication operator by an
analytic symbol sum_k C_k z^k is the block lower-triangular Toeplitz
matrix with block (j, k) = C_{j-k}.  Truncating to degree N is exact for
products of such operators, because block (j, k) of a product only
involves symbol coefficients of index <= j - k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .contraction import DefectData, as_contraction, char_fn_taylor, classify, defect
from .errors import DimMismatch, NotPure
from .linalg import as_square, dag, op_norm
from .report import Report


@dataclass(frozen=True)
class HardySpace:
    fiber_dim: int
    degree: int

    @property
    def total_dim(self) -> int:
        return (self.degree + 1) * self.fiber_dim

    def block(self, n: int) -> slice:
        return slice(n * self.fiber_dim, (n + 1) * self.fiber_dim)


@dataclass(frozen=True)
class HardyOp:
    matrix: np.ndarray
    symbol_coeffs: list[np.ndarray] = field(repr=False)
    degree: int

    @property
    def out_dim(self) -> int:
        return self.symbol_coeffs[0].shape[0]

    @property
    def in_dim(self) -> int:
        return self.symbol_coeffs[0].shape[1]

    def __matmul__(self, other: HardyOp) -> HardyOp:
        if self.degree != other.degree or self.in_dim != other.out_dim:
            raise DimMismatch("incompatible Hardy operators")
        return toeplitz(symbol_product(self.symbol_coeffs, other.symbol_coeffs, self.degree), self.degree)


def symbol_product(a: Sequence[np.ndarray], b: Sequence[np.ndarray], degree: int) -> list[np.ndarray]:
    """Taylor coefficients of the product symbol, up to ``degree``."""
    out = []
    for n in range(degree + 1):
        acc = np.zeros((a[0].shape[0], b[0].shape[1]), dtype=complex)
        for k in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc += a[k] @ b[n - k]
        out.append(acc)
    return out


def toeplitz(coeffs: Sequence[np.ndarray], degree: int) -> HardyOp:
    """Block lower-triangular Toeplitz matrix of a symbol on degrees 0..degree."""
    coeffs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in coeffs]
    m, n = coeffs[0].shape
    mat = np.zeros(((degree + 1) * m, (degree + 1) * n), dtype=complex)
    for k, c in enumerate(coeffs[: degree + 1]):
        for j in range(k, degree + 1):
            mat[j * m:(j + 1) * m, (j - k) * n:(j - k + 1) * n] = c
    kept = list(coeffs[: degree + 1])
    kept += [np.zeros((m, n), dtype=complex)] * (degree + 1 - len(kept))
    return HardyOp(mat, kept, degree)


def mult_shift(space: HardySpace) -> HardyOp:
    """M_z: identity blocks on the first subdiagonal."""
    e = space.fiber_dim
    return toeplitz([np.zeros((e, e)), np.eye(e)], space.degree)


def mult_pencil(x, space: HardySpace) -> HardyOp:
    """M_{X* + zX}."""
    x = as_square(x, "X", allow_empty=True)
    if x.shape[0] != space.fiber_dim:
        raise DimMismatch(f"X is {x.shape[0]}-dimensional, fiber is {space.fiber_dim}")
    return toeplitz([dag(x), x], space.degree)


def mult_theta(p, n: int) -> HardyOp:
    """M_{Theta_P}, from H^2 (x) D_P to H^2 (x) D_{P*}, truncated at degree n."""
    return toeplitz(char_fn_taylor(p, n).coeffs, n)


def _w_matrix(p: np.ndarray, n: int, dps: DefectData) -> np.ndarray:
    """Row block k = Q_{P*}* D_{P*} P*^k, k = 0..n."""
    blocks = []
    row = dag(dps.Q) @ dps.D
    for _ in range(n + 1):
        blocks.append(row)
        row = row @ dag(p)
    return np.vstack(blocks)


def embed_W(p, n: int) -> np.ndarray:
    """The isometry W of a pure contraction, truncated at degree n.

    Exactly, ``W* W + P^{n+1} P*^{n+1} = I``.
    """
    p = as_contraction(p)
    if not classify(p).is_pure:
        raise NotPure("W is an isometry only for a pure contraction")
    if n < 1:
        raise ValueError("degree must be at least 1")
    return _w_matrix(p, n, defect(p, adjoint=True))


def lemma8_residual(p, n: int) -> float:
    """||W W* + M_Theta M_Theta* - I|| on degrees 0..n (any contraction)."""
    p = as_contraction(p)
    w = _w_matrix(p, n, defect(p, adjoint=True))
    m = mult_theta(p, n).matrix
    ident = np.eye(w.shape[0])
    return op_norm(w @ dag(w) + m @ dag(m) - ident)


def w_isometry_residual(p, n: int) -> float:
    """||W*W + P^{n+1} P*^{n+1} - I||; W telescopes, so this holds for any contraction."""
    p = as_contraction(p)
    w = _w_matrix(p, n, defect(p, adjoint=True))
    pw = np.linalg.matrix_power(p, n + 1)
    return op_norm(dag(w) @ w + pw @ dag(pw) - np.eye(p.shape[0]))


def intertwine_W_check(p, n: int, tol: float = 1e-10) -> Report:
    """M_z* W = W P*, compared on degrees below the truncation edge."""
    p = as_contraction(p)
    w = embed_W(p, n)
    dps = defect(p, adjoint=True)
    mz = mult_shift(HardySpace(dps.rank, n)).matrix
    lhs = dag(mz) @ w
    rhs = w @ dag(p)
    keep = n * dps.rank
    rep = Report("intertwine_W")
    rep.add("Mz*W = WP*", op_norm(lhs[:keep] - rhs[:keep]), tol)
    return rep
