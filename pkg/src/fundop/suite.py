"""Seeded corpus sweep over every identity the package checks.

Case i draws from ``default_rng([seed, i])`` so each case is independent
of the others; the family is chosen round-robin by index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import corpus
from .contraction import choose_degree, classify, p_infinity
from .gamma import (
    AdmissibleCandidate,
    GammaPair,
    admissibility_check,
    fundamental_operators,
    gamma_contraction_certificate,
    lemma7_check,
)
from .hardy import intertwine_W_check, lemma8_residual, w_isometry_residual
from .errors import FundopError
from .linalg import dag, op_norm
from .report import Report
from .synthesis import coeff_C, coeff_D, coeff_LR, lemma12_check, remark13_check, synthesize_S
from .tetrablock import (
    commutation_conditions_check,
    lemma15_check,
    lemma16_check,
    synthesize_AB,
    tetra_fundamentals,
    thm4_intertwine_check,
)

KINDS = ("pure_gamma", "normal_gamma", "unitary_sum", "tetra", "contraction")
PARTITION_TOL = 1e-10
TELESCOPE_TOL = 1e-12
IDENTITY_TOL = 1e-8


def _pure_shape(rng: np.random.Generator, dim_max: int, fiber_max: int) -> tuple[int, int]:
    k = int(rng.integers(1, min(fiber_max, dim_max) + 1))
    n = int(rng.integers(0, min(5, dim_max // k - 1) + 1))
    return k, n


def _gamma_checks(rep: Report, pair: GammaPair, pure: bool) -> None:
    cert = gamma_contraction_certificate(pair)
    rep.extend(cert)
    rep.bound("||S|| <= 2", op_norm(pair.S), 2.0, IDENTITY_TOL)
    fp = fundamental_operators(pair)
    rep.extend(fp.residuals[0])
    rep.extend(lemma7_check(pair, fp.F, fp.G))
    rep.extend(admissibility_check(AdmissibleCandidate(pair.P, fp.F, fp.G)))
    rep.extend(lemma12_check(pair))
    for n in (2, 6):
        rep.add(f"WW* + M_Theta M_Theta* = I N={n}", lemma8_residual(pair.P, n), PARTITION_TOL)
    if pure:
        syn = synthesize_S(pair.P, fp.F, fp.G)
        rep.extend(syn.certificate, "synthesis")
        rep.extend(syn.fo_match, "synthesis.match")
        r13 = remark13_check(pair.P, fp.F, fp.G)
        rep.extend(r13)
        rep.add("intertwining forms agree", 0.0 if r13.data["agree"] else 1.0, 0.0)
        rep.extend(intertwine_W_check(pair.P, max(2, choose_degree(pair.P))))
    else:
        horizon = choose_degree(pair.P) + 12
        for n in range(-3, 4):
            c = coeff_C(pair.P, n, horizon)
            rep.add(f"C_{n} raw = closed", c.residual, c.tail_bound + 1e-10)
            d = coeff_D(pair, fp.F, fp.G, n, horizon)
            rep.add(f"D_{n} raw = closed", d.residual, d.tail_bound + 1e-10)
            lr = coeff_LR(pair, fp.F, fp.G, n)
            rep.add(f"L_{n} = R_{n}", lr.residual, IDENTITY_TOL * pair.scale)


def _tetra_checks(rep: Report, t) -> None:
    fu = tetra_fundamentals(t)
    for r in fu.residuals:
        rep.extend(r)
    args = (fu.F1, fu.F2, fu.G1, fu.G2)
    rep.extend(lemma15_check(t, *args))
    rep.extend(lemma16_check(t, *args))
    rep.extend(thm4_intertwine_check(t.P, *args))
    rep.extend(commutation_conditions_check(fu.G1, fu.G2))
    _, _, cert = synthesize_AB(t.P, *args)
    rep.extend(cert, "synthesis")


def _contraction_checks(rep: Report, p: np.ndarray, unitary_dim: int) -> None:
    cl = classify(p)
    rep.add("unitary part detected", abs(cl.unitary_part_dim - unitary_dim), 0)
    for n in (2, 6, 12):
        rep.add(f"WW* + M_Theta M_Theta* = I N={n}", lemma8_residual(p, n), PARTITION_TOL)
        rep.add(f"W*W + P^(N+1)P*^(N+1) = I N={n}", w_isometry_residual(p, n), TELESCOPE_TOL)
    pinf = p_infinity(p)
    rep.add("P Pinf P* = Pinf", op_norm(p @ pinf @ dag(p) - pinf), IDENTITY_TOL)
    if cl.is_pure:
        rep.extend(intertwine_W_check(p, 6))


def run_case(seed: int, index: int, dim_max: int) -> Report:
    rng = np.random.default_rng([seed, index])
    kind = KINDS[index % len(KINDS)]
    if kind == "unitary_sum" and dim_max < 2:
        kind = "pure_gamma"
    rep = Report(f"case{index:03d}.{kind}")
    try:
        _run_kind(rep, rng, kind, dim_max)
    except FundopError as exc:
        rep.add(f"raised {type(exc).__name__}", float("inf"), 0.0)
        rep.flags.append(f"{rep.name}: {exc}")
    rep.data["kind"] = kind
    return rep


def _run_kind(rep: Report, rng: np.random.Generator, kind: str, dim_max: int) -> None:
    if kind == "pure_gamma":
        k, n = _pure_shape(rng, dim_max, 3)
        pair, _ = corpus.random_pure_gamma(rng, k, n)
        _gamma_checks(rep, pair, pure=True)
    elif kind == "normal_gamma":
        pair = corpus.random_normal_gamma(rng, int(rng.integers(1, dim_max + 1)))
        _gamma_checks(rep, pair, pure=True)
    elif kind == "unitary_sum":
        ud = int(rng.integers(1, dim_max))
        rest = dim_max - ud
        n = int(rng.integers(0, min(4, rest - 1) + 1))
        pair = corpus.random_unitary_form_sum(rng, ud, 1, n)
        _gamma_checks(rep, pair, pure=False)
    elif kind == "tetra":
        k, n = _pure_shape(rng, dim_max, 2)
        _tetra_checks(rep, corpus.random_pure_tetra(rng, k, n))
    else:
        dim = int(rng.integers(1, dim_max + 1))
        ud = int(rng.integers(0, dim + 1))
        _contraction_checks(rep, corpus.random_contraction(rng, dim, ud), ud)


def run_suite(seed: int = 42, cases: int = 50, dim_max: int = 6, workers: int = 1) -> Report:
    """All cases, assembled in index order whatever the worker count."""
    if dim_max < 1:
        raise ValueError("dim_max must be at least 1")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda i: run_case(seed, i, dim_max), range(cases)))
    else:
        reports = [run_case(seed, i, dim_max) for i in range(cases)]
    out = Report("verify_suite")
    failed = []
    for r in reports:
        out.extend(r)
        if not r.passed:
            failed.append(r.name)
    out.data.update(
        cases=cases,
        checks=len(out.checks),
        failed_checks=sum(not c.passed for c in out.checks),
        failed_cases=failed,
    )
    return out
