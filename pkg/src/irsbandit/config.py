"""Dataclass configuration for every tunable of the simulator.

All configs are frozen; construction validates the cheap field invariants.
Cross-cutting checks that belong to an operation's error contract (grid fit,
cluster divisibility) are enforced where the operation runs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class DistributionCase(str, enum.Enum):
    """How UEs are scattered over the grid."""

    RANDOM = "random"
    CLUSTERED = "clustered"


class PolicyKind(str, enum.Enum):
    """Association policy run by each UE agent."""

    CONTEXTUAL_BANDIT = "cb"
    GREEDY = "greedy"


@dataclass(frozen=True)
class TopologyConfig:
    """Geometry of the two-tier layout.

    The defaults keep both IRS rings inside a 200 m square grid with the
    macro BS at the center and one small cell 50 m to each side.
    cluster_spread is the standard deviation (meters) of the isotropic
    Gaussian offset of clustered UEs around their cluster center; the
    default is sized for a queue of vehicles spanning ~100 m.
    """

    grid_side: float = 200.0
    small_cell_count: int = 2
    small_cell_offsets: tuple[tuple[float, float], ...] = ((-50.0, 0.0), (50.0, 0.0))
    irs_per_cell: int = 8
    irs_radius: float = 20.0
    eavesdroppers_per_cell: int = 2
    eve_radius: float = 25.0
    ue_count: int = 20
    distribution_case: DistributionCase = DistributionCase.RANDOM
    cluster_size: int = 10
    cluster_spread: float = 35.0
    detection_radius: float | None = None  # optional cap on candidate IRS distance

    def __post_init__(self):
        if self.grid_side <= 0:
            raise ValueError("grid_side must be positive")
        if self.small_cell_count < 1:
            raise ValueError("small_cell_count must be at least 1")
        if len(self.small_cell_offsets) != self.small_cell_count:
            raise ValueError(
                "small_cell_offsets must list exactly small_cell_count offsets"
            )
        if self.irs_per_cell < 2:
            raise ValueError("irs_per_cell must be at least 2")
        if self.irs_radius <= 0:
            raise ValueError("irs_radius must be positive")
        if self.eavesdroppers_per_cell < 0:
            raise ValueError("eavesdroppers_per_cell must be non-negative")
        if self.eve_radius <= self.irs_radius:
            raise ValueError("eve_radius must exceed irs_radius")
        if self.ue_count < 1:
            raise ValueError("ue_count must be at least 1")
        if self.cluster_size < 1:
            raise ValueError("cluster_size must be at least 1")
        if self.cluster_spread < 0:
            raise ValueError("cluster_spread must be non-negative")
        if self.detection_radius is not None and self.detection_radius <= 0:
            raise ValueError("detection_radius must be positive when set")


@dataclass(frozen=True)
class ChannelParams:
    """Link-budget constants of the cascaded BS -> IRS -> UE channel.

    The default budget is normalized: noise power is the 0 dB reference,
    ref_loss_db is folded into irs_gain_db, and irs_gain_db is calibrated
    (scripts/calibrate_satisfaction.py) so that the per-panel satisfaction
    probability of the default geometry sits strictly inside (0.2, 0.8).
    Absolute units are available by setting ref_loss_db / noise_power_db
    to real values.
    """

    carrier_hz: float = 5.0e9
    pathloss_exponent: float = 2.2
    ref_loss_db: float = 0.0
    irs_gain_db: float = 61.0
    tx_power_db: float = 5.0
    noise_power_db: float = 0.0

    def __post_init__(self):
        if self.carrier_hz <= 0:
            raise ValueError("carrier_hz must be positive")
        if self.pathloss_exponent < 2:
            raise ValueError("pathloss_exponent must be at least 2")
        if self.irs_gain_db < 0:
            raise ValueError("irs_gain_db must be non-negative")


@dataclass(frozen=True)
class PolicyConfig:
    """Exploration rate, stickiness, and which policy the agents run."""

    kind: PolicyKind = PolicyKind.CONTEXTUAL_BANDIT
    omega: float = 0.1
    phi: int = 2

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError("omega must be within [0, 1]")
        if self.phi < 1:
            raise ValueError("phi must be at least 1")


@dataclass(frozen=True)
class SimulationConfig:
    """Full experiment protocol for one Monte-Carlo run."""

    topology: TopologyConfig = TopologyConfig()
    channel: ChannelParams = ChannelParams()
    policy: PolicyConfig = PolicyConfig()
    rate_threshold: float = 1.0
    periods: int = 100
    replications: int = 100
    base_seed: int = 12345
    channel_budget: int = 10_000
    enforce_channel_budget: bool = True

    def __post_init__(self):
        if self.rate_threshold <= 0:
            raise ValueError("rate_threshold must be positive")
        if self.periods < 1:
            raise ValueError("periods must be at least 1")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.channel_budget < 1:
            raise ValueError("channel_budget must be at least 1")
        if (
            self.enforce_channel_budget
            and self.periods * self.replications > self.channel_budget
        ):
            raise ValueError(
                "periods * replications exceeds channel_budget; "
                "raise the budget or disable enforcement"
            )
