"""Seeded random generators for the test and verification corpora.

Every function takes a ``numpy.random.Generator`` so a case is fully
determined by its seed.
"""

from __future__ import annotations

import numpy as np

from .gamma import GammaPair
from .linalg import dag, numerical_radius
from .synthesis import conjugate, gen_direct_sum, gen_gamma_unitary, gen_pure_gamma
from .tetrablock import TetraTriple, gen_pure_tetra


def random_complex(rng: np.random.Generator, m: int, n: int | None = None) -> np.ndarray:
    n = m if n is None else n
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary (QR with phase correction)."""
    q, r = np.linalg.qr(random_complex(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_contraction(rng: np.random.Generator, n: int, unitary_dim: int = 0) -> np.ndarray:
    """Strict contraction on n - unitary_dim coordinates plus a unitary
    summand of size ``unitary_dim``, mixed by a random unitary.

    The strict part has singular values in [0, 1) and may include exact
    ones (isometric directions) to exercise defect-rank handling.
    """
    k = n - unitary_dim
    blocks = np.zeros((n, n), dtype=complex)
    if k:
        u, v = random_unitary(rng, k), random_unitary(rng, k)
        sv = rng.uniform(0.0, 0.95, size=k)
        if k > 1 and rng.random() < 0.3:
            sv[0] = 1.0  # an isometric direction inside a pure part
        blocks[:k, :k] = (u * sv) @ v
    if unitary_dim:
        blocks[k:, k:] = random_unitary(rng, unitary_dim)
    w = random_unitary(rng, n)
    return w @ blocks @ dag(w)


def random_w_ball(rng: np.random.Generator, k: int, radius: float | None = None) -> np.ndarray:
    """Random k x k matrix with numerical radius ``radius`` (uniform in
    (0.3, 1] when omitted)."""
    y = random_complex(rng, k)
    r = rng.uniform(0.3, 1.0) if radius is None else radius
    return y * (r / numerical_radius(y))


def random_pure_gamma(rng: np.random.Generator, k: int, n: int, mix: bool = True) -> tuple[GammaPair, np.ndarray]:
    """Truncated pencil pair of fiber k and degree n, optionally conjugated
    by a random unitary.  Returns the pair and its symbol Y."""
    y = random_w_ball(rng, k)
    pair = gen_pure_gamma(y, n)
    if mix:
        pair = conjugate(pair, random_unitary(rng, pair.dim))
    return pair, y


def random_normal_gamma(rng: np.random.Generator, n: int) -> GammaPair:
    """Commuting normal pair: P = V diag(p) V* with |p| <= 0.8 and
    S = V diag(b + conj(b) p) V* with |b| <= 1, a pure Gamma-contraction."""
    v = random_unitary(rng, n)
    p = 0.8 * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    b = np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    s = b + np.conj(b) * p
    return GammaPair((v * s) @ dag(v), (v * p) @ dag(v))


def random_unitary_form_sum(rng: np.random.Generator, unitary_dim: int, k: int, n: int) -> GammaPair:
    """(U + I, U) plus a pure pencil pair, mixed by a random unitary."""
    u = gen_gamma_unitary(np.diag(np.exp(2j * np.pi * rng.uniform(size=unitary_dim))))
    pure, _ = random_pure_gamma(rng, k, n, mix=False)
    pair = gen_direct_sum(u, pure)
    return conjugate(pair, random_unitary(rng, pair.dim))


def random_commuting_normal(rng: np.random.Generator, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Jointly diagonal G1, G2 with |g1_j| + |g2_j| <= 1 on each joint
    eigenvector; they satisfy the commutation conditions automatically."""
    v = random_unitary(rng, k)
    g1 = random_complex(rng, 1, k)[0]
    g2 = random_complex(rng, 1, k)[0]
    total = np.abs(g1) + np.abs(g2)
    scale = rng.uniform(0.3, 1.0, size=k) / total
    g1, g2 = g1 * scale, g2 * scale
    return (v * g1) @ dag(v), (v * g2) @ dag(v)


def random_pure_tetra(rng: np.random.Generator, k: int, n: int, mix: bool = True) -> TetraTriple:
    g1, g2 = random_commuting_normal(rng, k)
    t = gen_pure_tetra(g1, g2, n)
    if mix:
        w = random_unitary(rng, t.dim)
        t = TetraTriple(w @ t.A @ dag(w), w @ t.B @ dag(w), w @ t.P @ dag(w))
    return t


def perturb_entry(rng: np.random.Generator, x: np.ndarray, size: float = 1e-3) -> np.ndarray:
    """Copy of ``x`` with one random entry moved by ``size``."""
    out = np.array(x, dtype=complex, copy=True)
    i, j = rng.integers(out.shape[0]), rng.integers(out.shape[1])
    out[i, j] += size
    return out

