"""Command-line front end: parameter sweeps, single routes and campaigns.

Four subcommands: ``link-budget`` and ``ber-sweep`` tabulate the channel
model over distance / water / divergence grids, ``route`` runs one seeded
trial and dumps the selected routes, ``campaign`` runs the full Monte-Carlo
sweep.  All results land as CSV (plus plain-text route dumps) under the
output directory, with floats in 9-significant-digit scientific notation so
files are byte-reproducible.

Exit codes: 0 success (routing failures are valid results), 2 configuration
or usage error, 3 output I/O error.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .channel import ChannelParams, WaterType, extinction_coefficient, received_power_los, single_link_ber
from .harness import (
    DEFAULT_NODE_SWEEP,
    ConfigError,
    SimulationConfig,
    config_from_dict,
    run_campaign,
    run_single,
)
from .routing import route_dump_lines

DEFAULT_DISTANCES = tuple(float(d) for d in range(5, 105, 5))
DEFAULT_DIVERGENCES_DEG = (30.0, 60.0, 90.0)
ALL_WATERS = (WaterType.CLEAR_OCEAN, WaterType.COASTAL_OCEAN, WaterType.TURBID_HARBOR)


@dataclass(frozen=True)
class OutputRecordSet:
    """A typed table: schema id, (name, kind) columns and value rows.

    Kinds are str / int / float / bool.  Floats serialize as ``%.8e``,
    bools as true/false, None as the empty cell; parsing inverts this, so
    emit -> parse -> emit is byte-stable.
    """

    schema_id: str
    columns: tuple[tuple[str, str], ...]
    rows: tuple[tuple, ...]

    def to_lines(self) -> list[str]:
        lines = [",".join(name for name, _ in self.columns)]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} != schema width {len(self.columns)}"
                )
            lines.append(
                ",".join(_format_cell(value, kind) for value, (_, kind) in zip(row, self.columns))
            )
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    @classmethod
    def parse(cls, text: str, schema_id: str, columns) -> "OutputRecordSet":
        lines = text.splitlines()
        header = ",".join(name for name, _ in columns)
        if not lines or lines[0] != header:
            raise ValueError(f"unexpected header for schema {schema_id}")
        rows = []
        for line in lines[1:]:
            cells = line.split(",")
            if len(cells) != len(columns):
                raise ValueError(f"row width {len(cells)} != schema width {len(columns)}")
            rows.append(
                tuple(_parse_cell(cell, kind) for cell, (_, kind) in zip(cells, columns))
            )
        return cls(schema_id=schema_id, columns=tuple(columns), rows=tuple(rows))


def _format_cell(value, kind: str) -> str:
    if value is None:
        return ""
    if kind == "float":
        return f"{value:.8e}"
    if kind == "int":
        return str(int(value))
    if kind == "bool":
        return "true" if value else "false"
    return str(value)


def _parse_cell(cell: str, kind: str):
    if cell == "":
        return None
    if kind == "float":
        return float(cell)
    if kind == "int":
        return int(cell)
    if kind == "bool":
        return cell == "true"
    return cell


LINK_BUDGET_COLUMNS = (
    ("water", "str"),
    ("divergence_deg", "float"),
    ("distance_m", "float"),
    ("received_power_w", "float"),
)

BER_SWEEP_COLUMNS = (
    ("water", "str"),
    ("divergence_deg", "float"),
    ("distance_m", "float"),
    ("ber", "float"),
)

ROUTE_SUMMARY_COLUMNS = (
    ("protocol", "str"),
    ("seed", "int"),
    ("success", "bool"),
    ("failure_reason", "str"),
    ("hop_count", "int"),
    ("e2e_ber", "float"),
    ("e2e_delay_s", "float"),
    ("total_distance_m", "float"),
    ("evaluations", "int"),
    ("wall_clock_ns", "int"),
)

CAMPAIGN_TRIAL_COLUMNS = (
    ("protocol", "str"),
    ("n_nodes", "int"),
    ("realization", "int"),
    ("seed", "int"),
    ("success", "bool"),
    ("failure_reason", "str"),
    ("hop_count", "int"),
    ("e2e_ber", "float"),
    ("e2e_delay_s", "float"),
    ("total_distance_m", "float"),
    ("evaluations", "int"),
    ("wall_clock_ns", "int"),
)

CAMPAIGN_AGGREGATE_COLUMNS = (
    ("protocol", "str"),
    ("n_nodes", "int"),
    ("trials", "int"),
    ("success_rate", "float"),
    ("mean_e2e_ber", "float"),
    ("std_e2e_ber", "float"),
    ("mean_delay_s", "float"),
    ("std_delay_s", "float"),
    ("mean_evaluations", "float"),
    ("mean_hops", "float"),
)


def _sweep_params(base: ChannelParams, water: WaterType, divergence_deg: float) -> ChannelParams:
    """Base channel parameters with extinction and divergence pinned by the sweep."""
    return ChannelParams(
        wavelength=base.wavelength,
        extinction=extinction_coefficient(water),
        tx_power=base.tx_power,
        tx_efficiency=base.tx_efficiency,
        rx_efficiency=base.rx_efficiency,
        aperture_area=base.aperture_area,
        trajectory_angle=base.trajectory_angle,
        divergence_angle=math.radians(divergence_deg),
    )


def cmd_link_budget(config: SimulationConfig, distances, waters, divergences_deg) -> OutputRecordSet:
    """Received power over the water x divergence x distance grid."""
    _require_sweep(distances, waters, divergences_deg)
    rows = []
    for water in waters:
        for div_deg in divergences_deg:
            params = _sweep_params(config.channel, water, div_deg)
            for distance in distances:
                rows.append(
                    (water.value, div_deg, distance, received_power_los(params, distance))
                )
    return OutputRecordSet("link_budget", LINK_BUDGET_COLUMNS, tuple(rows))


def cmd_ber_sweep(config: SimulationConfig, distances, waters, divergences_deg) -> OutputRecordSet:
    """Single-link BER over the water x divergence x distance grid."""
    _require_sweep(distances, waters, divergences_deg)
    rows = []
    for water in waters:
        for div_deg in divergences_deg:
            params = _sweep_params(config.channel, water, div_deg)
            for distance in distances:
                power = received_power_los(params, distance)
                ber = single_link_ber(power, config.noise, params, config.constants)
                rows.append((water.value, div_deg, distance, ber))
    return OutputRecordSet("ber_sweep", BER_SWEEP_COLUMNS, tuple(rows))


def _require_sweep(distances, waters, divergences_deg):
    if not distances or not waters or not divergences_deg:
        raise ConfigError("sweep lists must not be empty")
    if any(d <= 0 for d in distances):
        raise ConfigError("distances must be > 0")


def cmd_route(config: SimulationConfig, seed: int):
    """One trial at the given trial seed: summary rows plus route dumps."""
    result = run_single(config, seed)
    rows = []
    dumps = {}
    for metric in result.metrics:
        rows.append(
            (
                metric.protocol.value,
                seed,
                metric.success,
                metric.failure_reason.value if metric.failure_reason else None,
                metric.hop_count,
                metric.e2e_ber,
                metric.e2e_delay_s,
                metric.total_distance_m,
                metric.evaluations,
                metric.wall_clock_ns,
            )
        )
        outcome = result.outcomes[metric.protocol]
        if outcome.success:
            dumps[metric.protocol] = route_dump_lines(
                metric.protocol, result.graph, outcome.route
            )
    summary = OutputRecordSet("route_summary", ROUTE_SUMMARY_COLUMNS, tuple(rows))
    return summary, dumps


def cmd_campaign(config: SimulationConfig, n_workers=None):
    """Full campaign: per-trial and aggregate record sets."""
    result = run_campaign(config, n_workers=n_workers)
    trial_rows = []
    for record in result.records:
        metric = record.metrics
        trial_rows.append(
            (
                metric.protocol.value,
                record.n_nodes,
                record.realization,
                record.seed,
                metric.success,
                metric.failure_reason.value if metric.failure_reason else None,
                metric.hop_count,
                metric.e2e_ber,
                metric.e2e_delay_s,
                metric.total_distance_m,
                metric.evaluations,
                metric.wall_clock_ns,
            )
        )
    aggregate_rows = [
        (
            stats.protocol.value,
            stats.n_nodes,
            stats.trials,
            stats.success_rate,
            stats.mean_e2e_ber,
            stats.std_e2e_ber,
            stats.mean_delay_s,
            stats.std_delay_s,
            stats.mean_evaluations,
            stats.mean_hops,
        )
        for stats in result.aggregates
    ]
    trials = OutputRecordSet("campaign_trials", CAMPAIGN_TRIAL_COLUMNS, tuple(trial_rows))
    aggregate = OutputRecordSet(
        "campaign_aggregate", CAMPAIGN_AGGREGATE_COLUMNS, tuple(aggregate_rows)
    )
    return trials, aggregate


def _float_list(text: str):
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _int_list(text: str):
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _water_list(text: str):
    try:
        return [WaterType(part.strip()) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"waters must be from clear/coastal/turbid, got {text!r}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uowsim",
        description="Underwater optical wireless sensor network simulator",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON configuration file")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument(
        "--water",
        type=_water_list,
        default=None,
        help="comma-separated water types (clear,coastal,turbid)",
    )
    sweep.add_argument(
        "--distances", type=_float_list, default=None, help="comma-separated distances [m]"
    )
    sweep.add_argument(
        "--divergences",
        type=_float_list,
        default=None,
        help="comma-separated divergence angles [deg]",
    )

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int, default=None, help="seed (route: trial seed, campaign: master seed)")
    sim.add_argument("--protocols", default=None, help="comma-separated subset of crp,drp,srp")
    sim.add_argument("--weight-mode", choices=["paper", "exact"], default=None)
    sim.add_argument("--nodes", type=_int_list, default=None, help="node count(s), comma-separated")
    sim.add_argument("--realizations", type=int, default=None)
    sim.add_argument("--water", default=None, help="water type (clear, coastal or turbid)")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("link-budget", parents=[common, sweep], help="received power sweep")
    commands.add_parser("ber-sweep", parents=[common, sweep], help="single-link BER sweep")
    commands.add_parser("route", parents=[common, sim], help="route one seeded trial")
    commands.add_parser("campaign", parents=[common, sim], help="run a Monte-Carlo campaign")
    return parser


def _load_config_doc(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    return doc


def _sim_config(args, campaign: bool) -> SimulationConfig:
    doc = _load_config_doc(args.config)
    if args.seed is not None and campaign:
        doc["master_seed"] = args.seed
    if args.nodes is not None:
        doc["node_count"] = args.nodes if len(args.nodes) > 1 else args.nodes[0]
    if args.realizations is not None:
        doc["realizations"] = args.realizations
    if args.protocols is not None:
        doc["protocols"] = [p.strip() for p in args.protocols.split(",") if p.strip()]
    if getattr(args, "weight_mode", None) is not None:
        doc["weight_mode"] = args.weight_mode
    if args.water is not None:
        if "," in args.water:
            raise ConfigError("route/campaign take a single water type")
        doc["water"] = args.water
    if campaign and "node_count" not in doc:
        doc["node_count"] = list(DEFAULT_NODE_SWEEP)
    return config_from_dict(doc)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_lines(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("link-budget", "ber-sweep"):
            doc = _load_config_doc(args.config)
            config = config_from_dict(doc)
            distances = args.distances if args.distances is not None else list(DEFAULT_DISTANCES)
            waters = args.water if args.water is not None else list(ALL_WATERS)
            divergences = (
                args.divergences if args.divergences is not None else list(DEFAULT_DIVERGENCES_DEG)
            )
            if args.command == "link-budget":
                recordset = cmd_link_budget(config, distances, waters, divergences)
                filename = "link_budget.csv"
            else:
                recordset = cmd_ber_sweep(config, distances, waters, divergences)
                filename = "ber_sweep.csv"
            out = _out_dir(args)
            recordset.write(out / filename)
            print(f"wrote {out / filename} ({len(recordset.rows)} rows)")
        elif args.command == "route":
            config = _sim_config(args, campaign=False)
            config.single_node_count()
            seed = args.seed if args.seed is not None else config.master_seed
            summary, dumps = cmd_route(config, seed)
            out = _out_dir(args)
            summary.write(out / "route_summary.csv")
            for protocol, lines in dumps.items():
                _write_lines(out / f"route_{protocol.value}.txt", lines)
            print(f"wrote {out / 'route_summary.csv'} ({len(summary.rows)} protocols)")
            for row in summary.rows:
                status = "ok" if row[2] else f"failed ({row[3]})"
                print(f"  {row[0]}: {status}")
        elif args.command == "campaign":
            config = _sim_config(args, campaign=True)
            trials, aggregate = cmd_campaign(config)
            out = _out_dir(args)
            trials.write(out / "campaign_trials.csv")
            aggregate.write(out / "campaign_aggregate.csv")
            print(
                f"wrote {out / 'campaign_trials.csv'} ({len(trials.rows)} rows) and "
                f"{out / 'campaign_aggregate.csv'} ({len(aggregate.rows)} rows)"
            )
        else:  # pragma: no cover - argparse enforces the command set
            raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
