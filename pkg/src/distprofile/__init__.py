"""Distance-profile statistics for random objects in metric spaces."""

from .baselines import (
    energy_statistic,
    energy_statistic_permuted,
    energy_test,
    hotelling_statistic,
    hotelling_test,
)
from .descriptive import (
    FrechetSummary,
    frechet_mean_exact,
    frechet_mean_sample,
    metric_correlation,
    metric_covariance,
    metric_variance,
)
from .empirical import (
    EmpiricalDistribution,
    StepWeight,
    barycenter,
    cdf_eval,
    integral_sq_cdf_diff,
    integral_weighted_sq_cdf_diff,
    mean,
    quantile_eval,
    quantile_gap_integral,
    transport_map_eval,
    wasserstein2,
)
from .estimators import ClassicalMDS, DistanceProfileRanker, ProfileMDS
from .mds import MDSEmbedding, classical_mds, profile_mds
from .metrics import (
    METRIC_KINDS,
    MetricSpec,
    ObjectSample,
    ValidationError,
    check_distance_matrix,
    cross_distance_matrix,
    distance,
    distance_matrix,
    validate_objects,
)
from .profiles import (
    ProfileSet,
    build_profiles,
    out_of_sample_profile,
    profile_distance_matrix,
    profile_metric,
)
from .ranks import (
    RankReport,
    hausdorff_distance,
    quantile_groups,
    rank_all,
    rank_report,
    transport_median,
    transport_quantile_set,
    transport_rank,
    trim,
)
from .simulate import (
    SCENARIOS,
    PowerCurve,
    ScenarioSpec,
    gen_gauss2d_distributions,
    gen_gauss2d_pair,
    gen_mixture_pair,
    gen_mvnorm_pair,
    gen_prefattach,
    gen_prefattach_pair,
    gen_t_pair,
    generate_pair,
    power_study,
)
from .twosample import (
    PooledDistances,
    TestResult,
    critical_value,
    distance_profile_test,
    dp_statistic,
    dp_statistic_permuted,
    dw_plugin,
    p_value,
    permutation_replicates,
    pool_samples,
)

__version__ = "0.1.0"
