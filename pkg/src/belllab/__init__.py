"""belllab: simulate and verify hidden-variable models of Bell-type experiments.

The package provides the quantum reference statistics for the polarization
Bell state, three hidden-variable constructions that reproduce them (a
delta-mixture, a deterministic model with a setting-dependent hidden-angle
density, and a Levy-flight kicked-polarization model), and estimators for
CHSH values, locality residuals and hidden-variable information content.
"""

from .core import HALF_PI, OUTCOMES, PI, PolAngle, RngStream, canonical_diff, malus_prob
from .estimator import (
    ChshReport,
    CorrelatorEstimate,
    MIEstimate,
    ScreeningResult,
    analytic_chsh,
    chsh_pvalue,
    chsh_pvalue_log10,
    chsh_value,
    estimate_correlator,
    lambda_independence_residual,
    mutual_information_hall,
    peres_identity_check,
    run_chsh_experiment,
    screening_residual,
)
from .models import (
    DeltaMixtureModel,
    HallModel,
    HiddenVariableModel,
    LocalBaselineModel,
    PRBoxModel,
    QuadratureError,
    hall_breakpoints,
    hall_density,
    joint_outcome_dist,
    sample_run,
)
from .qm import (
    TSIRELSON_BOUND,
    JointDist,
    qm_chsh,
    qm_correlator,
    qm_joint,
    tsirelson_settings,
)
from .schulman import (
    AlignedPoleError,
    BridgeSamplingError,
    FamilySumConfig,
    KickStats,
    KickWidth,
    PathSpec,
    PolarizationPath,
    ResolutionError,
    TwoPhotonResult,
    dominant_kick_stats,
    endpoint_targets,
    exact_family_sum,
    free_kick_sums,
    net_rotation_density,
    periodized_cauchy,
    periodized_cauchy_truncated,
    sample_bridge,
    sample_bridges,
    sequential_outcome_probs,
    single_photon_outcome_prob,
    truncated_family_sum,
    two_photon_joint,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedPoleError",
    "BridgeSamplingError",
    "ChshReport",
    "CorrelatorEstimate",
    "DeltaMixtureModel",
    "FamilySumConfig",
    "HALF_PI",
    "HallModel",
    "HiddenVariableModel",
    "JointDist",
    "KickStats",
    "KickWidth",
    "LocalBaselineModel",
    "MIEstimate",
    "OUTCOMES",
    "PI",
    "PRBoxModel",
    "PathSpec",
    "PolAngle",
    "PolarizationPath",
    "QuadratureError",
    "ResolutionError",
    "RngStream",
    "ScreeningResult",
    "TSIRELSON_BOUND",
    "TwoPhotonResult",
    "analytic_chsh",
    "canonical_diff",
    "chsh_pvalue",
    "chsh_pvalue_log10",
    "chsh_value",
    "dominant_kick_stats",
    "endpoint_targets",
    "estimate_correlator",
    "exact_family_sum",
    "free_kick_sums",
    "hall_breakpoints",
    "hall_density",
    "joint_outcome_dist",
    "lambda_independence_residual",
    "malus_prob",
    "mutual_information_hall",
    "net_rotation_density",
    "periodized_cauchy",
    "periodized_cauchy_truncated",
    "peres_identity_check",
    "qm_chsh",
    "qm_correlator",
    "qm_joint",
    "run_chsh_experiment",
    "sample_bridge",
    "sample_bridges",
    "sample_run",
    "screening_residual",
    "sequential_outcome_probs",
    "single_photon_outcome_prob",
    "tsirelson_settings",
    "truncated_family_sum",
    "two_photon_joint",
]
