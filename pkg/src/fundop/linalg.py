"""Dense complex linear-algebra kernel.

Every operator in the package is a ``complex128`` ndarray.  The routines
here are the only place spectra are computed; everything downstream
reduces to Hermitian eigenproblems, norms and the numerical radius.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InputError, NonSquare, NotHermitian, NotPSD

HERM_TOL = 1e-10
PSD_TOL = 1e-10
RANK_TOL = 1e-10

_NR_GRID = 720
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class HermEigen(NamedTuple):
    values: np.ndarray  # real, ascending
    vectors: np.ndarray  # unitary, eigenvectors in columns


def as_matrix(a, name: str = "matrix", allow_empty: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {m.shape}")
    if not allow_empty and (m.shape[0] < 1 or m.shape[1] < 1):
        raise InputError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    return m


def as_square(a, name: str = "matrix", allow_empty: bool = False) -> np.ndarray:
    m = as_matrix(a, name, allow_empty=allow_empty)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {m.shape}")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def op_norm(a) -> float:
    """Largest singular value (0 for an empty matrix)."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def spectral_radius(a) -> float:
    a = as_square(a, allow_empty=True)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def herm_eig(h, tol: float | None = None) -> HermEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = as_square(h, allow_empty=True)
    if h.size == 0:
        return HermEigen(np.zeros(0), np.zeros((0, 0), dtype=complex))
    scale = op_norm(h)
    if tol is None:
        tol = HERM_TOL * scale
    if op_norm(h - dag(h)) > tol:
        raise NotHermitian(f"||H - H*|| = {op_norm(h - dag(h)):.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh((h + dag(h)) / 2)
    return HermEigen(w, v)


def psd_sqrt(h, tol: float | None = None) -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol, tol]`` are treated as exact zeros, so a
    rank-deficient input gives a root of the same numerical rank.  ``tol``
    defaults to ``PSD_TOL * ||H||``; pass an absolute value when ``H`` is
    a perturbation of something of known scale (e.g. ``I - P*P``).
    """
    w, v = herm_eig(h)
    if w.size == 0:
        return np.zeros((0, 0), dtype=complex)
    if tol is None:
        tol = PSD_TOL * max(abs(w[0]), abs(w[-1]))
    if w[0] < -tol:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol:.1e}")
    root = np.where(w > tol, np.sqrt(np.clip(w, 0.0, None)), 0.0)
    return (v * root) @ dag(v)


def range_basis(d, tol: float = RANK_TOL) -> tuple[np.ndarray, int]:
    """Orthonormal basis of the eigenspace of ``d`` above ``tol * lambda_max``."""
    w, v = herm_eig(d)
    n = d.shape[0]
    if w.size == 0 or w[-1] <= 0:
        return np.zeros((n, 0), dtype=complex), 0
    keep = w > tol * w[-1]
    q = v[:, keep]
    return q, q.shape[1]


def pinv_on_range(d, q: np.ndarray) -> np.ndarray:
    """Inverse of ``d`` on the span of ``q``, zero on its complement."""
    d = np.asarray(d, dtype=complex)
    if q.shape[1] == 0:
        return np.zeros_like(d)
    core = dag(q) @ d @ q
    return q @ np.linalg.solve(core, dag(q))


def _top_eigs(a: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """lambda_max of Re(e^{i theta} A) for each theta (batched)."""
    ph = np.exp(1j * thetas)[:, None, None]
    h = (ph * a + np.conj(ph) * dag(a)) / 2
    return np.linalg.eigvalsh(h)[:, -1]


def numerical_radius(a, grid: int = _NR_GRID, xtol: float = 1e-12) -> float:
    """w(A) = max over theta of lambda_max(Re(e^{i theta} A)).

    A coarse sweep locates every cell that could hold the global maximum
    (theta -> lambda_max is ||A||-Lipschitz); each is then refined with a
    batched golden-section search.
    """
    a = as_square(a, allow_empty=True)
    if a.size == 0:
        return 0.0
    lip = op_norm(a)
    if lip == 0.0:
        return 0.0
    h = 2 * np.pi / grid
    thetas = np.arange(grid) * h
    vals = _top_eigs(a, thetas)
    best = vals.max()
    cand = thetas[vals >= best - lip * h]
    lo, hi = cand - h, cand + h
    top = best
    while np.max(hi - lo) > xtol:
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = _top_eigs(a, x1), _top_eigs(a, x2)
        top = max(top, f1.max(), f2.max())
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
    return float(top)
