"""Deterministic simulator for underwater optical wireless sensor networks."""

from .channel import (
    BER_FLOOR,
    LIGHT_SPEED_WATER,
    PLANCK,
    ChannelParams,
    PhysicalConstants,
    ReceiverNoise,
    WaterType,
    chain_ber,
    e2e_ber,
    extinction_coefficient,
    extinction_from_components,
    link_power_and_ber,
    photon_arrival_rate,
    received_power_los,
    single_link_ber,
)
from .harness import (
    AggregateStats,
    CampaignResult,
    ConfigError,
    SimulationConfig,
    TrialRecord,
    TrialResult,
    config_from_dict,
    default_campaign_config,
    derive_trial_seed,
    run_campaign,
    run_single,
    run_trial,
)
from .metrics import DelayModel, TrialMetrics, collect_trial, e2e_delay
from .routing import (
    FailureReason,
    Protocol,
    Route,
    RoutingOutcome,
    WeightMode,
    crp,
    drp,
    quadrant_filter,
    route_dump_lines,
    srp,
)
from .topology import (
    SOURCE_ID,
    TARGET_ID,
    LinkQuality,
    NetworkGraph,
    Node,
    Role,
    build_graph,
    generate_deployment,
    graph_dump_lines,
    path_exists,
)

__version__ = "0.1.0"
