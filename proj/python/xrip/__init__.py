from ._xrip import (
    binomial,
    bpdn_solve,
    candes_constants,
    extreme_singular_values,
    frobenius_norm,
    hadamard_column,
    hadamard_power,
    jl_check,
    rank_subset,
    recovery_bound,
    required_stable_rank,
    rip_constant_exact,
    rip_constant_sampled,
    sample_kwise_signs,
    sample_matrix,
    sigma_k_1,
    spectral_norm,
    stable_rank,
    support_decompose,
    unrank_subset,
    verify_kwise,
)

__all__ = [
    "binomial",
    "bpdn_solve",
    "candes_constants",
    "extreme_singular_values",
    "frobenius_norm",
    "hadamard_column",
    "hadamard_power",
    "jl_check",
    "rank_subset",
    "recovery_bound",
    "required_stable_rank",
    "rip_constant_exact",
    "rip_constant_sampled",
    "sample_kwise_signs",
    "sample_matrix",
    "sigma_k_1",
    "spectral_norm",
    "stable_rank",
    "support_decompose",
    "unrank_subset",
    "verify_kwise",
]
