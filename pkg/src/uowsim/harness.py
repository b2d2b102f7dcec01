"""Seeded Monte-Carlo campaigns over node counts and routing protocols.

A campaign sweeps node counts and, for each count, runs a number of
realizations.  Every realization redraws the relay positions from a trial
seed derived as ``SeedSequence([master_seed, realization_index])``; source
and target stay fixed.  All three protocols run on the identical graph of a
trial.  Trials are independent, so they can execute on any number of
workers; records are always assembled and reduced in (node count,
realization, protocol) order, which keeps results bit-identical regardless
of parallelism.
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelParams, PhysicalConstants, ReceiverNoise, WaterType
from .metrics import DelayModel, TrialMetrics, collect_trial
from .routing import (
    FailureReason,
    Protocol,
    RoutingOutcome,
    WeightMode,
    crp,
    drp,
    srp,
)
from .topology import SOURCE_ID, TARGET_ID, build_graph, generate_deployment, path_exists

log = logging.getLogger(__name__)

THREADS_ENV_VAR = "UOWSN_THREADS"

DEFAULT_NODE_SWEEP = (20, 30, 40, 50, 60, 70, 80, 90, 100)


class ConfigError(ValueError):
    """Invalid simulation configuration."""


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one experiment.

    ``node_count`` may be a single int (one deployment size) or a sequence
    of ints (a campaign sweep).  When ``channel`` is None it resolves to the
    default parameters of ``water``.
    """

    area: tuple[float, float] = (250.0, 250.0)
    node_count: int | tuple[int, ...] = 40
    max_range: float = 80.0
    water: WaterType = WaterType.CLEAR_OCEAN
    channel: ChannelParams | None = None
    noise: ReceiverNoise = field(default_factory=ReceiverNoise)
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    source_pos: tuple[float, float] = (52.5, 125.0)
    target_pos: tuple[float, float] = (197.5, 125.0)
    protocols: tuple[Protocol, ...] = (Protocol.CRP, Protocol.DRP, Protocol.SRP)
    weight_mode: WeightMode = WeightMode.EXACT_LOG
    delay: DelayModel = field(default_factory=DelayModel)
    realizations: int = 500
    master_seed: int = 42
    srp_fallback: bool = False
    record_timing: bool = False

    def __post_init__(self):
        if self.channel is None:
            object.__setattr__(self, "channel", ChannelParams.for_water(self.water))
        if isinstance(self.node_count, int):
            counts = (self.node_count,)
        else:
            counts = tuple(self.node_count)
            object.__setattr__(self, "node_count", counts)
            if not counts:
                raise ConfigError("node_count sweep must not be empty")
        for n in counts:
            if not isinstance(n, int) or n < 2:
                raise ConfigError(f"node_count values must be ints >= 2, got {n!r}")
        width, height = self.area
        if width <= 0.0 or height <= 0.0:
            raise ConfigError(f"area dimensions must be > 0, got {self.area}")
        if self.max_range <= 0.0:
            raise ConfigError(f"max_range must be > 0, got {self.max_range}")
        if self.realizations < 1:
            raise ConfigError(f"realizations must be >= 1, got {self.realizations}")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        if not self.protocols:
            raise ConfigError("at least one protocol must be selected")
        for name, (x, y) in (("source_pos", self.source_pos), ("target_pos", self.target_pos)):
            if not (0.0 <= x <= width and 0.0 <= y <= height):
                raise ConfigError(f"{name} {(x, y)} lies outside the {self.area} area")
        separation = math.dist(self.source_pos, self.target_pos)
        if separation > math.hypot(width, height):
            log.warning(
                "source-target separation %.1f m exceeds the area diagonal", separation
            )

    @property
    def node_counts(self) -> tuple[int, ...]:
        """The node-count sweep as a tuple, even for a single value."""
        if isinstance(self.node_count, int):
            return (self.node_count,)
        return self.node_count

    def single_node_count(self) -> int:
        if not isinstance(self.node_count, int):
            raise ConfigError(
                f"a single trial needs one node_count, got sweep {self.node_count}"
            )
        return self.node_count


def default_campaign_config(**overrides) -> SimulationConfig:
    """The stock campaign: clear ocean, 250x250 m, range 80 m, 500 trials
    per node count over the 20..100 sweep."""
    overrides.setdefault("node_count", DEFAULT_NODE_SWEEP)
    return SimulationConfig(**overrides)


def derive_trial_seed(master_seed: int, realization_index: int) -> int:
    """Deterministic per-trial seed from the master seed and trial index."""
    sequence = np.random.SeedSequence([int(master_seed), int(realization_index)])
    return int(sequence.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class TrialResult:
    """Everything one trial produced, including the routes themselves."""

    trial_seed: int
    graph: object
    outcomes: dict
    metrics: list[TrialMetrics]


def run_single(config: SimulationConfig, trial_seed: int) -> TrialResult:
    """Deploy, build the graph and run every selected protocol once.

    A trial whose graph leaves source and target disconnected records a
    DISCONNECTED failure for all protocols without running them.
    """
    config.single_node_count()
    nodes = generate_deployment(config, trial_seed)
    graph = build_graph(nodes, config.max_range, config.channel, config.noise, config.constants)
    connected = path_exists(graph, SOURCE_ID, TARGET_ID)

    outcomes = {}
    timings = {}
    for protocol in config.protocols:
        if not connected:
            outcomes[protocol] = RoutingOutcome(
                route=None, failure_reason=FailureReason.DISCONNECTED, evaluations=0
            )
            timings[protocol] = 0
            continue
        started = time.perf_counter_ns() if config.record_timing else 0
        if protocol is Protocol.CRP:
            outcome = crp(graph, SOURCE_ID, TARGET_ID, config.weight_mode)
        elif protocol is Protocol.DRP:
            outcome = drp(graph, SOURCE_ID, TARGET_ID)
        else:
            outcome = srp(graph, SOURCE_ID, TARGET_ID, fallback=config.srp_fallback)
        timings[protocol] = time.perf_counter_ns() - started if config.record_timing else 0
        outcomes[protocol] = outcome

    ordered = {p: outcomes[p] for p in Protocol if p in outcomes}
    metrics = collect_trial(ordered, config.delay, timings)
    return TrialResult(trial_seed=trial_seed, graph=graph, outcomes=ordered, metrics=metrics)


def run_trial(config: SimulationConfig, realization_index: int) -> list[TrialMetrics]:
    """One seeded realization; a pure function of (config, index)."""
    trial_seed = derive_trial_seed(config.master_seed, realization_index)
    return run_single(config, trial_seed).metrics


@dataclass(frozen=True)
class TrialRecord:
    """A TrialMetrics tagged with its campaign coordinates."""

    n_nodes: int
    realization: int
    seed: int
    metrics: TrialMetrics


@dataclass(frozen=True)
class AggregateStats:
    """Campaign statistics for one (protocol, node count) cell.

    Means and standard deviations (population, ddof=0) are taken over the
    successful trials only; cells with no success carry None.
    """

    protocol: Protocol
    n_nodes: int
    trials: int
    successes: int
    success_rate: float
    mean_e2e_ber: float | None
    std_e2e_ber: float | None
    mean_delay_s: float | None
    std_delay_s: float | None
    mean_evaluations: float | None
    std_evaluations: float | None
    mean_hops: float | None
    std_hops: float | None


@dataclass(frozen=True)
class CampaignResult:
    records: list[TrialRecord]
    aggregates: list[AggregateStats]

    def get(self, protocol: Protocol, n_nodes: int) -> AggregateStats:
        for stats in self.aggregates:
            if stats.protocol is protocol and stats.n_nodes == n_nodes:
                return stats
        raise KeyError((protocol, n_nodes))


def _run_index_range(config: SimulationConfig, indices) -> list[TrialRecord]:
    records = []
    n = config.single_node_count()
    for index in indices:
        seed = derive_trial_seed(config.master_seed, index)
        for metric in run_single(config, seed).metrics:
            records.append(
                TrialRecord(n_nodes=n, realization=index, seed=seed, metrics=metric)
            )
    return records


def resolve_workers(n_workers: int | None = None) -> int:
    """Worker count: explicit argument, else UOWSN_THREADS, else 1 (0 = auto)."""
    if n_workers is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if not raw:
            return 1
        try:
            n_workers = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    if n_workers < 0:
        raise ConfigError(f"worker count must be >= 0, got {n_workers}")
    return n_workers if n_workers > 0 else (os.cpu_count() or 1)


def run_campaign(config: SimulationConfig, n_workers: int | None = None) -> CampaignResult:
    """Execute the full sweep and aggregate per (protocol, node count).

    The result is a pure function of the config: work may be spread over
    processes, but records are reassembled in deterministic order before
    aggregation.
    """
    workers = resolve_workers(n_workers)
    per_count_configs = [replace(config, node_count=n) for n in config.node_counts]
    all_indices = range(config.realizations)

    records: list[TrialRecord] = []
    if workers <= 1:
        for cfg in per_count_configs:
            records.extend(_run_index_range(cfg, all_indices))
    else:
        tasks = []
        chunk = max(1, math.ceil(config.realizations / (workers * 4)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cfg in per_count_configs:
                for start in range(0, config.realizations, chunk):
                    stop = min(start + chunk, config.realizations)
                    tasks.append(pool.submit(_run_index_range, cfg, range(start, stop)))
            chunks = [task.result() for task in tasks]
        for part in chunks:
            records.extend(part)

    aggregates = aggregate_records(records, config)
    return CampaignResult(records=records, aggregates=aggregates)


def aggregate_records(records, config: SimulationConfig) -> list[AggregateStats]:
    """Reduce trial records into per-(protocol, node count) statistics."""
    by_cell: dict[tuple[Protocol, int], list[TrialRecord]] = {}
    for record in records:
        by_cell.setdefault((record.metrics.protocol, record.n_nodes), []).append(record)

    aggregates = []
    for n in config.node_counts:
        for protocol in config.protocols:
            cell = sorted(by_cell.get((protocol, n), []), key=lambda r: r.realization)
            successes = [r.metrics for r in cell if r.metrics.success]
            mean_ber, std_ber = _mean_std([m.e2e_ber for m in successes])
            mean_delay, std_delay = _mean_std([m.e2e_delay_s for m in successes])
            mean_evals, std_evals = _mean_std([m.evaluations for m in successes])
            mean_hops, std_hops = _mean_std([m.hop_count for m in successes])
            aggregates.append(
                AggregateStats(
                    protocol=protocol,
                    n_nodes=n,
                    trials=len(cell),
                    successes=len(successes),
                    success_rate=len(successes) / len(cell) if cell else 0.0,
                    mean_e2e_ber=mean_ber,
                    std_e2e_ber=std_ber,
                    mean_delay_s=mean_delay,
                    std_delay_s=std_delay,
                    mean_evaluations=mean_evals,
                    std_evaluations=std_evals,
                    mean_hops=mean_hops,
                    std_hops=std_hops,
                )
            )
    return aggregates


def config_from_dict(raw: dict) -> SimulationConfig:
    """Build a SimulationConfig from a parsed config document.

    Keys mirror the dataclass field names; unknown keys are rejected so
    typos fail loudly.  Angles inside ``channel`` are radians; water names
    are clear / coastal / turbid; protocol names crp / drp / srp; weight
    mode paper / exact.
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"config document must be a mapping, got {type(raw).__name__}")
    known = {
        "area", "node_count", "max_range", "water", "channel", "noise",
        "constants", "source_pos", "target_pos", "protocols", "weight_mode",
        "delay", "realizations", "master_seed", "srp_fallback", "record_timing",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    kwargs = {}
    try:
        if "area" in raw:
            kwargs["area"] = _pair(raw["area"], "area")
        if "node_count" in raw:
            value = raw["node_count"]
            kwargs["node_count"] = (
                tuple(int(v) for v in value) if isinstance(value, (list, tuple)) else int(value)
            )
        if "max_range" in raw:
            kwargs["max_range"] = float(raw["max_range"])
        water = WaterType(raw["water"]) if "water" in raw else WaterType.CLEAR_OCEAN
        kwargs["water"] = water
        channel_overrides = dict(raw.get("channel", {}))
        if channel_overrides or "water" in raw:
            kwargs["channel"] = ChannelParams.for_water(water, **channel_overrides)
        if "noise" in raw:
            kwargs["noise"] = ReceiverNoise(**raw["noise"])
        if "constants" in raw:
            kwargs["constants"] = PhysicalConstants(**raw["constants"])
        if "source_pos" in raw:
            kwargs["source_pos"] = _pair(raw["source_pos"], "source_pos")
        if "target_pos" in raw:
            kwargs["target_pos"] = _pair(raw["target_pos"], "target_pos")
        if "protocols" in raw:
            kwargs["protocols"] = tuple(Protocol(p) for p in raw["protocols"])
        if "weight_mode" in raw:
            kwargs["weight_mode"] = WeightMode(raw["weight_mode"])
        if "delay" in raw:
            kwargs["delay"] = DelayModel(**raw["delay"])
        if "realizations" in raw:
            kwargs["realizations"] = int(raw["realizations"])
        if "master_seed" in raw:
            kwargs["master_seed"] = int(raw["master_seed"])
        if "srp_fallback" in raw:
            kwargs["srp_fallback"] = bool(raw["srp_fallback"])
        if "record_timing" in raw:
            kwargs["record_timing"] = bool(raw["record_timing"])
        return SimulationConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _pair(value, name: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{name} must be a pair of numbers, got {value!r}")
    return (float(value[0]), float(value[1]))


def _mean_std(values):
    if not values:
        return None, None
    arr = np.array(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=0))
