import numpy as np
import pytest
from scipy.linalg import solve_discrete_lyapunov

from fundop import errors
from fundop.contraction import defect, p_infinity
from fundop.corpus import (
    perturb_entry,
    random_contraction,
    random_normal_gamma,
    random_pure_gamma,
    random_unitary,
    random_unitary_form_sum,
)
from fundop.gamma import GammaPair, fundamental_operators
from fundop.linalg import op_norm
from fundop.synthesis import (
    coeff_C,
    coeff_D,
    coeff_LR,
    gen_direct_sum,
    gen_gamma_unitary,
    gen_pure_gamma,
    lemma12_check,
    remark13_check,
    stein_series,
    synthesize_S,
)
from oracles import dense_series_sum


def jordan(n):
    return np.diag(np.ones(n - 1), -1)


@pytest.mark.parametrize("y", [0.3, 0.9 * np.exp(1j * np.pi / 4), 1.0])
@pytest.mark.parametrize("n", [2, 5, 9])
def test_jordan_closed_form(y, n):
    res = synthesize_S(jordan(n), [[np.conj(y)]], [[y]])
    assert op_norm(res.S - (np.conj(y) * np.eye(n) + y * jordan(n))) <= 1e-10
    # the dense series at 3N terms is the independent oracle
    dps = defect(jordan(n), adjoint=True)
    core = dps.D @ dps.embed(np.array([[np.conj(y)]])) @ dps.D + jordan(n) @ dps.D @ dps.embed(np.array([[y]])) @ dps.D
    assert op_norm(res.S - dense_series_sum(jordan(n), core, 3 * n)) <= 1e-12
    assert res.passed


def test_p_zero_gives_adjoint_of_G(rng):
    g = 0.3 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    g = (g + g.conj().T) / 2  # w(G) = ||G|| small
    res = synthesize_S(np.zeros((2, 2)), g.conj().T, g)
    assert op_norm(res.S - g.conj().T) <= 1e-12


def test_stein_series_matches_lyapunov(rng):
    p = 0.8 * random_contraction(rng, 4, 0)
    core = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert op_norm(stein_series(p, core) - solve_discrete_lyapunov(p, core)) <= 1e-10
    with pytest.raises(errors.NotPure):
        stein_series(random_unitary(rng, 2), np.eye(2))


@pytest.mark.parametrize("seed", range(8))
def test_round_trip(seed):
    r = np.random.default_rng(seed)
    pair = random_pure_gamma(r, 1 + seed % 3, 2 + seed % 4)[0] if seed % 2 else random_normal_gamma(r, 3)
    fp = fundamental_operators(pair)
    res = synthesize_S(pair.P, fp.F, fp.G)
    assert res.passed, res.certificate.summary() + res.fo_match.summary()
    # the fundamental operators determine S for a pure P
    assert op_norm(res.S - pair.S) <= 1e-8


def test_synthesis_errors(rng):
    y = 0.5
    with pytest.raises(errors.NotAdmissible):
        synthesize_S(jordan(3), [[y]], [[y + 1e-3]])
    with pytest.raises(errors.NotAdmissible):
        synthesize_S(np.zeros((1, 1)), [[1.5]], [[1.5]])
    with pytest.raises(errors.NotPure):
        synthesize_S(np.diag([0.5, 1.0]), [[0.0]], [[0.0]])


def test_unitary_part_relation():
    pure = gen_pure_gamma(np.array([[0.5j]]), 3)
    assert lemma12_check(pure).passed
    u = gen_gamma_unitary(np.diag([1j, np.exp(0.3j)]))
    assert lemma12_check(u).passed
    assert lemma12_check(gen_direct_sum(u, pure)).passed
    # a Gamma-unitary not of the form (U + I, U) violates the identity
    u1, u2 = np.diag([1j, -1.0]), np.diag([-1j, 1j])
    assert not lemma12_check(GammaPair(u1 + u2, u1 @ u2)).passed


@pytest.mark.parametrize("seed", range(3))
def test_coefficient_identities_on_unitary_sums(seed):
    r = np.random.default_rng(seed)
    pair = random_unitary_form_sum(r, 2, 1, 3)
    fp = fundamental_operators(pair)
    for n in range(-6, 7):
        c = coeff_C(pair.P, n, 40)
        assert c.within(), (n, c.residual, c.tail_bound)
        d = coeff_D(pair, fp.F, fp.G, n, 40)
        assert d.within(), (n, d.residual, d.tail_bound)
        lr = coeff_LR(pair, fp.F, fp.G, n)
        assert lr.residual <= 1e-8 * pair.scale


def test_coeff_C_tail_bound_is_honest(rng):
    # slowly decaying pure part: the raw coefficients differ from the closed
    # form by at most the computed tail bound
    p = np.diag([0.9, 0.85j, np.exp(0.4j)])
    for n_terms in (12, 40, 200):
        c = coeff_C(p, 2, n_terms)
        assert c.within()
    assert coeff_C(p, 2, 12).tail_bound > 1e-3
    assert coeff_C(p, 2, 400).tail_bound <= 1e-8


def test_coeff_index_precondition():
    with pytest.raises(ValueError):
        coeff_C(jordan(3), 5, 8)


def test_D0_closed_form_uses_single_adjoint_defect(rng):
    # the D_0 closed form carries D_P D_P* G P; squaring D_P* breaks it
    pair = random_normal_gamma(rng, 3)
    fp = fundamental_operators(pair)
    d = coeff_D(pair, fp.F, fp.G, 0, 200)
    assert d.within()
    dp, dps = defect(pair.P), defect(pair.P, adjoint=True)
    ge = dps.embed(fp.G)
    variant = d.rhs + dp.Q.conj().T @ (dp.D @ dps.D @ (dps.D - np.eye(3)) @ ge @ pair.P) @ dp.Q
    assert op_norm(variant - d.lhs) > 1e-4


def test_intertwining_forms_three_way():
    y = 0.4 + 0.3j
    rep = remark13_check(jordan(4), [[np.conj(y)]], [[y]])
    assert rep.passed and rep.data["agree"]
    assert rep.data["Y_minus_F"] <= 1e-12 and rep.data["w_Y"] <= 1 + 1e-8
    bad = remark13_check(jordan(4), [[np.conj(y)]], [[y + 1e-3]])
    assert bad.data["verdicts"] == (False, False, False)


@pytest.mark.parametrize("seed", range(4))
def test_intertwining_forms_corpus(seed):
    r = np.random.default_rng(100 + seed)
    pair, _ = random_pure_gamma(r, 2, 3)
    fp = fundamental_operators(pair)
    rep = remark13_check(pair.P, fp.F, fp.G)
    assert rep.passed and rep.data["agree"]
    bad = remark13_check(pair.P, fp.F, perturb_entry(r, fp.G))
    assert bad.data["verdicts"] == (False, False, False)


def test_intertwining_forms_requires_pure():
    with pytest.raises(errors.NotPure):
        remark13_check(np.diag([0.5, 1.0]), [[0.0]], [[0.0]])


def test_generators():
    pair = gen_pure_gamma(np.array([[0.0]]), 3)
    assert np.allclose(pair.S, 0) and np.allclose(pair.P, jordan(4))
    u = gen_gamma_unitary(np.array([[1.0]]))
    assert np.allclose(u.S, [[2.0]]) and np.allclose(u.P, [[1.0]])
    s = gen_direct_sum(u, pair)
    assert s.dim == 5
    assert op_norm(p_infinity(s.P) - np.diag([1, 0, 0, 0, 0])) <= 1e-12
