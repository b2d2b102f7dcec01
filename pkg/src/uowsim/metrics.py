"""Per-trial metric records: end-to-end delay, BER and complexity figures.

The delay of a route is propagation over the total path length plus, per
hop, packet serialization and an optional fixed processing time.  Absolute
delay magnitudes therefore depend on these model constants; only orderings
between protocols are meaningful for comparison purposes.
"""

from dataclasses import dataclass

from .channel import LIGHT_SPEED_WATER
from .routing import FailureReason, Protocol, Route, RoutingOutcome


@dataclass(frozen=True)
class DelayModel:
    """Constants of the delay computation.

    ``light_speed_water`` m/s, ``packet_bits`` bits per packet,
    ``data_rate`` bits/s, ``per_hop_processing`` seconds.
    """

    light_speed_water: float = LIGHT_SPEED_WATER
    packet_bits: float = 1024.0
    data_rate: float = 1e6
    per_hop_processing: float = 0.0

    def __post_init__(self):
        if self.light_speed_water <= 0.0 or self.packet_bits <= 0.0 or self.data_rate <= 0.0:
            raise ValueError("delay model rates and sizes must be > 0")
        if self.per_hop_processing < 0.0:
            raise ValueError(
                f"per_hop_processing must be >= 0, got {self.per_hop_processing}"
            )


@dataclass(frozen=True)
class TrialMetrics:
    """One protocol's result on one trial.

    On failure only ``evaluations`` and ``wall_clock_ns`` are populated;
    the route-derived fields stay None.
    """

    protocol: Protocol
    success: bool
    failure_reason: FailureReason | None
    hop_count: int | None
    e2e_ber: float | None
    e2e_delay_s: float | None
    total_distance_m: float | None
    evaluations: int
    wall_clock_ns: int


def e2e_delay(route: Route, model: DelayModel) -> float:
    """End-to-end delay of a route in seconds (empty route -> 0)."""
    propagation = route.total_distance / model.light_speed_water
    per_hop = model.packet_bits / model.data_rate + model.per_hop_processing
    return propagation + route.hop_count * per_hop


def collect_trial(outcomes, model: DelayModel, timings=None) -> list[TrialMetrics]:
    """Flatten per-protocol routing outcomes into metric records.

    ``outcomes`` maps Protocol -> RoutingOutcome for one trial; ``timings``
    optionally maps Protocol -> wall-clock nanoseconds (0 when absent).
    Records come back in Protocol enum order.
    """
    timings = timings or {}
    records = []
    for protocol in Protocol:
        if protocol not in outcomes:
            continue
        outcome: RoutingOutcome = outcomes[protocol]
        wall_clock = int(timings.get(protocol, 0))
        if outcome.success:
            route = outcome.route
            records.append(
                TrialMetrics(
                    protocol=protocol,
                    success=True,
                    failure_reason=None,
                    hop_count=route.hop_count,
                    e2e_ber=route.e2e_ber,
                    e2e_delay_s=e2e_delay(route, model),
                    total_distance_m=route.total_distance,
                    evaluations=outcome.evaluations,
                    wall_clock_ns=wall_clock,
                )
            )
        else:
            records.append(
                TrialMetrics(
                    protocol=protocol,
                    success=False,
                    failure_reason=outcome.failure_reason,
                    hop_count=None,
                    e2e_ber=None,
                    e2e_delay_s=None,
                    total_distance_m=None,
                    evaluations=outcome.evaluations,
                    wall_clock_ns=wall_clock,
                )
            )
    return records
