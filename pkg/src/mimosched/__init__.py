"""Subspace-geometric user scheduling for heterogeneous downlink MU-MIMO.

A numerical library and Monte Carlo simulator for angle-based user
scheduling criteria and hybrid scheduling algorithms under
block-diagonalization precoding.
"""

from .channel import (
    ChannelRealization,
    Scenario,
    UserChannel,
    UserProfile,
    correlation_matrix,
    generate_realization,
    make_user_channel,
    matrix_sqrt_psd,
    received_power,
)
from .criteria import (
    CriterionKind,
    DeltaCapacityReport,
    capacity_gain,
    capacity_loss,
    delta_capacity,
    evaluate_criterion,
    metric_geometrical,
    metric_grouping_oriented,
    metric_largest_principal_angle,
    metric_selection_full,
    metric_selection_simplified,
)
from .harness import (
    ConfigError,
    ExperimentSpec,
    OutageSummary,
    RunRecord,
    figure_preset,
    load_experiment,
    outage_quantile,
    run_experiment,
    serialize_results,
)
from .precoding import (
    BDInfeasibleError,
    BDPrecoderSet,
    CapacityBounds,
    bd_capacity_bounds,
    bd_precoders,
    group_sum_capacity,
    user_capacities,
    waterfill,
)
from .schedulers import (
    GroupingArrangement,
    SchedulerKind,
    exhaustive_select,
    greedy_select,
    random_schedule,
    schedule_conventional,
    schedule_dof_max,
    schedule_group_min,
)
from .subspace import (
    chordal_distance,
    collinearity,
    geometrical_angle_cos2,
    geometrical_angle_sin2,
    null_space_basis,
    orthonormal_range_basis,
    principal_angles,
    row_space_basis,
    subspace_intersection_projector,
)

__version__ = "0.1.0"
