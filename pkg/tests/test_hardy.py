import numpy as np
import pytest

from fundop import errors
from fundop.corpus import random_contraction
from fundop.hardy import (
    HardySpace,
    embed_W,
    intertwine_W_check,
    lemma8_residual,
    mult_pencil,
    mult_shift,
    mult_theta,
    symbol_product,
    toeplitz,
    w_isometry_residual,
)
from fundop.linalg import op_norm


def jordan(n):
    return np.diag(np.ones(n - 1), -1)


def test_shift_is_jordan_block():
    assert np.allclose(mult_shift(HardySpace(1, 3)).matrix, jordan(4))
    m = mult_shift(HardySpace(2, 2)).matrix
    assert m.shape == (6, 6)
    assert np.allclose(m[2:4, 0:2], np.eye(2)) and np.allclose(m[4:6, 2:4], np.eye(2))


def test_pencil_scalar():
    y = 0.4 - 0.3j
    m = mult_pencil(np.array([[y]]), HardySpace(1, 4)).matrix
    assert np.allclose(m, np.conj(y) * np.eye(5) + y * jordan(5))
    with pytest.raises(errors.DimMismatch):
        mult_pencil(np.eye(2), HardySpace(1, 2))


def test_toeplitz_product_is_exact(rng):
    a = [rng.normal(size=(2, 3)) for _ in range(3)]
    b = [rng.normal(size=(3, 2)) for _ in range(4)]
    n = 5
    lhs = toeplitz(a, n).matrix @ toeplitz(b, n).matrix
    rhs = toeplitz(symbol_product(a, b, n), n).matrix
    assert op_norm(lhs - rhs) <= 1e-12
    assert op_norm((toeplitz(a, n) @ toeplitz(b, n)).matrix - lhs) <= 1e-12


def test_mult_theta_jordan():
    m = mult_theta(jordan(3), 5).matrix
    # Theta = c z^3 with |c| = 1: a single nonzero block diagonal
    assert m.shape == (6, 6)
    assert np.allclose(np.abs(m), jordan(6) @ jordan(6) @ jordan(6))


@pytest.mark.parametrize("ud", [0, 1, 3])
@pytest.mark.parametrize("n", [2, 6, 12])
def test_w_and_theta_partition_identity_on_truncation(rng, ud, n):
    p = random_contraction(rng, 5, ud)
    assert lemma8_residual(p, n) <= 1e-10
    assert w_isometry_residual(p, n) <= 1e-12


def test_partition_identity_unitary_is_vacuous():
    assert lemma8_residual(np.diag([1j, -1]), 4) == 0.0


def test_embed_W_isometry_for_pure(rng):
    p = 0.7 * random_contraction(rng, 4, 1)  # spectral radius 0.7
    w = embed_W(p, 120)
    assert op_norm(w.conj().T @ w - np.eye(4)) <= 1e-12
    with pytest.raises(errors.NotPure):
        embed_W(np.diag([0.5, 1.0]), 3)
    with pytest.raises(ValueError):
        embed_W(p, 0)


def test_intertwine_W(rng):
    assert intertwine_W_check(jordan(4), 4).passed
    assert intertwine_W_check(random_contraction(rng, 4, 0), 10).passed
