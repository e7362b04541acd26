import numpy as np
import pytest

from fundop import errors
from fundop.contraction import (
    char_fn_eval,
    char_fn_taylor,
    choose_degree,
    classify,
    defect,
    defect_decay,
    delta_eval,
    p_infinity,
)
from fundop.corpus import random_contraction, random_unitary
from fundop.linalg import op_norm
from oracles import finite_difference_derivative, scalar_theta_series


def jordan(n):
    return np.diag(np.ones(n - 1), -1)


def test_defect_zero_and_jordan():
    d = defect(np.zeros((3, 3)))
    assert d.rank == 3 and np.allclose(d.D, np.eye(3))
    j = jordan(3)
    dp, dps = defect(j), defect(j, adjoint=True)
    assert dp.rank == 1 and dps.rank == 1
    # J^T J = diag(1, 1, 0): defect lives on the last basis vector
    assert np.allclose(np.abs(dp.Q[:, 0]), [0, 0, 1])
    assert np.allclose(np.abs(dps.Q[:, 0]), [1, 0, 0])


def test_defect_of_unitary_is_empty(rng):
    u = random_unitary(rng, 4)
    assert defect(u).rank == 0 and defect(u, adjoint=True).rank == 0


def test_defect_identity_and_intertwining(rng):
    for ud in (0, 1, 2):
        p = random_contraction(rng, 5, ud)
        dp, dps = defect(p), defect(p, adjoint=True)
        assert op_norm(dp.D @ dp.D - (np.eye(5) - p.conj().T @ p)) <= 1e-10
        # P D_P = D_P* P
        assert op_norm(p @ dp.D - dps.D @ p) <= 1e-9
        assert dp.rank == dps.rank


def test_not_a_contraction():
    with pytest.raises(errors.NotContraction):
        defect(np.array([[1.5]]))


def test_classify():
    assert classify(np.zeros((2, 2))).is_pure
    c = classify(np.diag([1j, -1.0]))
    assert not c.is_pure and c.unitary_part_dim == 2
    c = classify(np.diag([0.5, 1.0]))
    assert c.unitary_part_dim == 1 and not c.is_cnu


def test_classify_mixed(rng):
    for ud in range(4):
        c = classify(random_contraction(rng, 4, ud))
        assert c.unitary_part_dim == ud
        assert c.is_pure == (ud == 0)


def test_taylor_scalar_long_division():
    ts = char_fn_taylor(np.array([[0.5]]), 3)
    got = [complex(c[0, 0]) for c in ts.coeffs]
    assert np.allclose(got, [-0.5, 0.75, 0.375, 0.1875], atol=1e-15)
    lam = 0.3 + 0.4j
    ts = char_fn_taylor(np.array([[lam]]), 8)
    assert np.allclose([c[0, 0] for c in ts.coeffs], scalar_theta_series(lam, 8), atol=1e-15)


def test_char_fn_jordan_is_monomial():
    # Theta of J_N is z^N up to unimodular constants of the defect bases
    n = 4
    for z in (0.3, 0.5j, -0.2 + 0.6j):
        th = char_fn_eval(jordan(n), z)
        assert abs(abs(th[0, 0]) - abs(z) ** n) <= 1e-14


def test_char_fn_matches_taylor_and_is_contractive(rng):
    p = random_contraction(rng, 4, 0)
    ts = char_fn_taylor(p, 200)
    for z in (0.1, 0.4 - 0.3j, -0.7j):
        th = char_fn_eval(p, z)
        assert op_norm(th - ts(z)) <= ts.tail_bound(z) + 1e-12
        assert op_norm(th) <= 1 + 1e-12


def test_char_fn_derivative_is_first_coefficient(rng):
    p = random_contraction(rng, 3, 0)
    ts = char_fn_taylor(p, 2)
    d = finite_difference_derivative(lambda z: char_fn_eval(p, z), 0.0)
    assert op_norm(d - ts.coeffs[1]) <= 1e-8


def test_char_fn_rejects_boundary():
    with pytest.raises(ValueError):
        char_fn_eval(np.array([[0.5]]), 1.0)


def test_choose_degree_and_decay(rng):
    assert choose_degree(jordan(5)) == 5
    p = random_contraction(rng, 4, 0)
    n = choose_degree(p)
    assert defect_decay(p, n) <= 1e-8
    assert n == 1 or defect_decay(p, n - 1) > 1e-8
    # a unitary summand never enters the defect decay
    assert choose_degree(np.diag([0.5, 1j])) < 40


def test_p_infinity():
    assert op_norm(p_infinity(jordan(3))) == 0.0
    u = np.diag([1j, -1.0])
    assert np.allclose(p_infinity(u), np.eye(2))
    # 0.9 U plus a unitary summand gives the projection 0 + I
    p = np.diag([0.9, 0.9j, np.exp(0.4j)])
    assert np.allclose(p_infinity(p), np.diag([0, 0, 1]), atol=1e-10)


def test_p_infinity_invariance(rng):
    p = random_contraction(rng, 5, 2)
    pinf = p_infinity(p)
    assert op_norm(p @ pinf @ p.conj().T - pinf) <= 1e-9
    assert op_norm(pinf @ pinf - pinf) <= 1e-9  # a projection here: unitary part is reducing


def test_delta_eval():
    # pure contraction: Theta is inner on the circle, so Delta vanishes
    d = delta_eval(jordan(3), 0.7)
    assert op_norm(d) <= 1e-6
    d = delta_eval(np.array([[0.5]]), 1.1)
    assert op_norm(d) <= 1e-6
    # P = 0: Theta(e^{it}) = e^{it} I, unitary
    assert op_norm(delta_eval(np.zeros((2, 2)), 0.3)) <= 1e-6
