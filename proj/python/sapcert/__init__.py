"""Measurement-matrix certification and l1-recovery toolkit."""

from sapcert._sapcert import (  # noqa: F401
    RecoveryResult,
    RipCertificate,
    NspCertificate,
    SapCertificate,
    CheckReport,
    ExpansionCertificate,
    best_s_term,
    converse_check,
    corollary1_bound,
    corollary2_bound,
    eq12_value,
    expansion_alpha_star,
    generate_compressible,
    generate_s_sparse,
    greedy_block_partition,
    lq_quasinorm,
    min_right_inverse_l1,
    nsp_constant_l1,
    nsp_from_sap_check,
    lower_frame_check,
    perfect_matching_adjacency,
    random_left_regular_adjacency,
    rip1_deviation,
    rip_constant,
    run_experiment_json,
    sap_beta_lower_bound,
    sap_constants_expander,
    sap_from_nsp,
    sap_from_rip,
    solve_l1,
    solve_l1_l2,
    solve_lq_irls,
    sparse_oracle,
    svd_preconditioner,
    theorem1_rhs,
    theorem4_coefficients,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
