"""Fundamental operators of Gamma-contractions and tetrablock contractions.

Finite-dimensional, dense-matrix realisation: defect data and the
characteristic function of a contraction, truncated Hardy-space models,
extraction and admissibility of fundamental operators, synthesis of the
missing operators over a pure contraction, and the identities linking
them.
"""

from .contraction import (
    Classification,
    DefectData,
    TaylorSeries,
    char_fn_eval,
    char_fn_taylor,
    choose_degree,
    classify,
    defect,
    delta_eval,
    p_infinity,
)
from .errors import (
    DimMismatch,
    FundopError,
    InconsistentEquation,
    InputError,
    NonSquare,
    NotAdmissible,
    NotCommuting,
    NotContraction,
    NotHermitian,
    NotPSD,
    NotPure,
    NotUnitary,
    NumericalRadiusExceeded,
    PreconditionFailed,
)
from .gamma import (
    AdmissibleCandidate,
    FundamentalPair,
    GammaPair,
    admissibility_check,
    extract_F,
    extract_G,
    fundamental_operators,
    gamma_contraction_certificate,
    gamma_isometry_certificate,
    gamma_unitary_certificate,
    lemma7_check,
)
from .hardy import (
    HardyOp,
    HardySpace,
    embed_W,
    intertwine_W_check,
    lemma8_residual,
    mult_pencil,
    mult_shift,
    mult_theta,
    toeplitz,
    w_isometry_residual,
)
from .linalg import herm_eig, numerical_radius, op_norm, pinv_on_range, psd_sqrt, range_basis, spectral_radius
from .report import Check, Report
from .synthesis import (
    CoeffPair,
    SynthesisResult,
    coeff_C,
    coeff_D,
    coeff_LR,
    gen_direct_sum,
    gen_gamma_unitary,
    gen_pure_gamma,
    lemma12_check,
    remark13_check,
    synthesize_S,
)
from .tetrablock import (
    TetraFundamentals,
    TetraTriple,
    commutation_conditions_check,
    extract_F12,
    extract_G12,
    gen_pure_tetra,
    lemma15_check,
    lemma16_check,
    synthesize_AB,
    tetra_fundamentals,
    tetra_membership,
    thm4_intertwine_check,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleCandidate",
    "Check",
    "Classification",
    "CoeffPair",
    "DefectData",
    "DimMismatch",
    "FundamentalPair",
    "FundopError",
    "GammaPair",
    "HardyOp",
    "HardySpace",
    "InconsistentEquation",
    "InputError",
    "NonSquare",
    "NotAdmissible",
    "NotCommuting",
    "NotContraction",
    "NotHermitian",
    "NotPSD",
    "NotPure",
    "NotUnitary",
    "NumericalRadiusExceeded",
    "PreconditionFailed",
    "Report",
    "SynthesisResult",
    "TaylorSeries",
    "TetraFundamentals",
    "TetraTriple",
    "admissibility_check",
    "char_fn_eval",
    "char_fn_taylor",
    "choose_degree",
    "classify",
    "coeff_C",
    "coeff_D",
    "coeff_LR",
    "commutation_conditions_check",
    "defect",
    "delta_eval",
    "embed_W",
    "extract_F",
    "extract_F12",
    "extract_G",
    "extract_G12",
    "fundamental_operators",
    "gamma_contraction_certificate",
    "gamma_isometry_certificate",
    "gamma_unitary_certificate",
    "gen_direct_sum",
    "gen_gamma_unitary",
    "gen_pure_gamma",
    "gen_pure_tetra",
    "herm_eig",
    "intertwine_W_check",
    "lemma12_check",
    "lemma15_check",
    "lemma16_check",
    "lemma7_check",
    "lemma8_residual",
    "mult_pencil",
    "mult_shift",
    "mult_theta",
    "numerical_radius",
    "op_norm",
    "p_infinity",
    "pinv_on_range",
    "psd_sqrt",
    "range_basis",
    "remark13_check",
    "spectral_radius",
    "synthesize_AB",
    "synthesize_S",
    "tetra_fundamentals",
    "tetra_membership",
    "thm4_intertwine_check",
    "toeplitz",
    "w_isometry_residual",
]
