"""Bandit-driven IRS association in a two-tier HetNet: a deterministic
Monte-Carlo simulator and policy library."""

from .config import (
    ChannelParams,
    DistributionCase,
    PolicyConfig,
    PolicyKind,
    SimulationConfig,
    TopologyConfig,
)
from .engine import (
    BernoulliEnvironment,
    ChannelEnvironment,
    PeriodOutcome,
    ReplicationResult,
    SatisfactionTrace,
    mean_satisfaction,
    run_monte_carlo,
    run_period,
    run_replication,
)
from .experiment import (
    ConfigError,
    ExperimentSpec,
    OutputFormat,
    RunSummary,
    default_config_text,
    emit_trace,
    parse_config,
    run_experiment,
)
from .topology import (
    NetworkTopology,
    Position,
    build_network,
    build_topology,
    candidate_irs_set,
    place_ues,
    serving_cell,
)

__all__ = [
    "BernoulliEnvironment",
    "ChannelEnvironment",
    "ChannelParams",
    "ConfigError",
    "DistributionCase",
    "ExperimentSpec",
    "NetworkTopology",
    "OutputFormat",
    "PeriodOutcome",
    "PolicyConfig",
    "PolicyKind",
    "Position",
    "ReplicationResult",
    "RunSummary",
    "SatisfactionTrace",
    "SimulationConfig",
    "TopologyConfig",
    "build_network",
    "build_topology",
    "candidate_irs_set",
    "default_config_text",
    "emit_trace",
    "mean_satisfaction",
    "parse_config",
    "place_ues",
    "run_experiment",
    "run_monte_carlo",
    "run_period",
    "run_replication",
    "serving_cell",
]

__version__ = "0.1.0"
