"""Heavy-tailed stationary time series and their stable partial-sum limits.

Simulate seven families of heavy-tailed stationary sequences, compute the
parameters (alpha, c_plus, c_minus) of the stable limit of their normalized
partial sums from theory and from empirical tail estimation, and verify at
desk scale that the two agree and that the sums converge to the predicted
law.
"""

from .stable_core import (
    DEFAULT_GRID,
    StableLimitParams,
    StandardStableParams,
    chi,
    levy_tail,
    sample_stable,
    stable_cf,
    standard_stable_cf,
    to_standard_params,
)
from .models import (
    AffineSquaredNormal,
    Constant,
    Differenced,
    Garch11,
    IidRV,
    LogNormal,
    MDependent,
    MODEL_FAMILIES,
    SasMa,
    Sre,
    StandardNormal,
    StochVol,
    StudentT,
    SymmetrizedPareto,
    TwoSidedPareto,
    gen_differenced,
    gen_garch11,
    gen_iid_rv,
    gen_m_dependent,
    gen_sas_ma,
    gen_sre,
    gen_sv,
    save_path_csv,
)
from .tail_estimation import (
    BRow,
    BTable,
    CEstimate,
    InsufficientReference,
    TailProfile,
    b_table,
    estimate_b,
    estimate_c,
    hill_alpha,
    select_a_n,
    tail_profile,
)
from .constants import (
    GoldieC0Result,
    KestenResult,
    TInfinityEstimate,
    TruncationError,
    b_plus_sas,
    c_plus_garch,
    c_plus_garch_sq,
    c_plus_sre,
    c_sv,
    goldie_c0,
    kesten_index,
)
from .verify import (
    AnticlusterResult,
    CfDistance,
    ConvergenceReport,
    KsDistance,
    LevyTailResult,
    MixingResult,
    SumExperiment,
    anticluster_diag,
    cf_distance,
    convergence_report,
    empirical_cf,
    ks_distance,
    levy_tail_check,
    mixing_block_diag,
    partial_sum_sample,
)

__version__ = "0.1.0"
