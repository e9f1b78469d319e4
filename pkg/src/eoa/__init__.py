"""Entanglement of assistance under one-sided noisy channels.

Closed-form measures, certified brute-force optimizers, and numerical
checks of the factorization and inequality laws they obey.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .assistance import (
    OPT_TOL,
    Ensemble,
    OptimizerConfig,
    Povm,
    assisted_average,
    coa_convex_max,
    eoa_lower_bound,
    eoa_pure_povm_opt,
    eoa_support2_opt,
    hjw_ensemble,
    povm_from_isometry,
    roof_upper_bound,
)
from .channels import (
    ChannelFamily,
    KrausChannel,
    apply_channel,
    compose,
    generalized_amplitude_damping,
    identity_channel,
    phase_damping,
    random_channel,
)
from .kernels import BACKEND
from .laws import (
    ALG_TOL,
    LAWS,
    Bound,
    FactorResult,
    SeriesPoint,
    SuddenDeathResult,
    VerificationRecord,
    channel_factor,
    evolve_series,
    run_verify_batch,
    sudden_death_time,
    tau,
    verify_corollary1,
    verify_corollary2,
    verify_remark_d2,
    verify_remark_lowerbound,
    verify_tau_evolution,
    verify_theorem1,
    verify_theorem2,
)
from .linalg import haar_isometry, instance_seed, kron, partial_trace, psd_sqrt
from .measures import (
    coa,
    concurrence_lambdas,
    eoa_pure_tripartite,
    i_concurrence_generators,
    pure_concurrence,
    so_generators,
    spin_flip,
    wootters_concurrence,
)
from .states import (
    State,
    density_state,
    generalized_ghz,
    maximally_entangled,
    pure_state,
    random_pure,
    w_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
