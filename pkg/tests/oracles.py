"""Reference computations that share no code with the package under test."""

from __future__ import annotations

import numpy as np


def jacobi_eigh(h: np.ndarray, sweeps: int = 100, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi rotations; eigenvalues ascending, vectors in columns."""
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= tol * max(1.0, np.linalg.norm(a)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                phase = apq / abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                v = v @ rot
    w = np.real(np.diag(a))
    order = np.argsort(w)
    return w[order], v[:, order]


def sweep_numerical_radius(a: np.ndarray, points: int = 100_000, chunk: int = 20_000) -> float:
    """max over a dense theta grid of the top eigenvalue of Re(e^{i theta} A)."""
    a = np.asarray(a, dtype=complex)
    best = -np.inf
    thetas = np.linspace(0, 2 * np.pi, points, endpoint=False)
    for start in range(0, points, chunk):
        ph = np.exp(1j * thetas[start:start + chunk])[:, None, None]
        h = (ph * a + np.conj(ph) * a.conj().T) / 2
        if a.shape[0] <= 3:
            best = max(best, _top_eig_small(h).max())
        else:
            best = max(best, np.linalg.eigvalsh(h)[:, -1].max())
    return float(best)


def _top_eig_small(h: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of a batch of Hermitian matrices of size <= 3,
    by the closed forms (trigonometric cubic for size 3)."""
    if h.shape[-1] == 1:
        return h[:, 0, 0].real
    if h.shape[-1] == 3:
        q = np.trace(h, axis1=1, axis2=2).real / 3
        b = h - q[:, None, None] * np.eye(3)
        p2 = np.sum(np.abs(b) ** 2, axis=(1, 2)) / 6
        pr = np.sqrt(p2)
        safe = np.where(pr > 0, pr, 1.0)
        r = np.linalg.det(b / safe[:, None, None]).real / 2
        phi = np.arccos(np.clip(r, -1.0, 1.0)) / 3
        return q + 2 * pr * np.cos(phi)
    a, d, b = h[:, 0, 0].real, h[:, 1, 1].real, h[:, 0, 1]
    return (a + d) / 2 + np.sqrt(((a - d) / 2) ** 2 + np.abs(b) ** 2)


def scalar_theta_series(lam: complex, n: int) -> list[complex]:
    """Taylor coefficients of -lam + z (1 - |lam|^2) / (1 - z conj(lam)),
    the characteristic function of the 1x1 contraction lam."""
    d2 = 1 - abs(lam) ** 2
    out = [-lam]
    term = d2
    for _ in range(n):
        out.append(term)
        term = term * np.conj(lam)
    return out


def dense_series_sum(p: np.ndarray, core: np.ndarray, terms: int) -> np.ndarray:
    """sum_{n < terms} P^n core P*^n by plain accumulation."""
    total = np.zeros_like(core, dtype=complex)
    pw = np.eye(p.shape[0], dtype=complex)
    for _ in range(terms):
        total += pw @ core @ pw.conj().T
        pw = pw @ p
    return total


def finite_difference_derivative(f, z: complex, h: float = 1e-6) -> np.ndarray:
    return (f(z + h) - f(z - h)) / (2 * h)


def numerical_radius_by_vectors(a: np.ndarray, rng: np.random.Generator, samples: int = 20_000) -> float:
    """Lower bound on w(A) from random unit vectors."""
    n = a.shape[0]
    x = rng.normal(size=(samples, n)) + 1j * rng.normal(size=(samples, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    vals = np.einsum("si,ij,sj->s", x.conj(), a, x)
    return float(np.abs(vals).max())
