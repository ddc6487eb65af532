"""Command-line interface: run scenarios, sweep parameters, and run the pricing and spatial labs.

Usage:
$ labour-games run --out results/
$ labour-games sweep --param mobility.band_floor --values 0.2,0.4,0.6 --out sweep/
$ labour-games pricing-lab --scenario my_scenario.toml --out pricing/
$ labour-games spatial-lab --scenario my_scenario.toml --out spatial/
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import output_utils, repeated_pricing, run_messages, sim_engine, spatial
from .command_errors import ScenarioError, SimCommandError
from .output_utils import write_output
from .scenario_config import DEFAULT_SCENARIO, apply_override, load_scenario


logger = logging.getLogger(__name__)

MODES = ("run", "sweep", "pricing-lab", "spatial-lab")
SWEEP_MODES = ("run", "pricing-lab")
SWEEP_COLUMNS = (
    "value", "status", "steady_state_period", "w_bar", "e_m", "Y", "u_rate", "v_rate", "delta_star", "message",
)


@dataclass
class RunConfig:
    scenario_path: Path = DEFAULT_SCENARIO
    out_dir: Path = None
    seed: int = None
    periods: int = None
    mode: str = "run"

    def validate(self):
        """Validate the run config."""
        if not str(self.scenario_path) or not self.out_dir or not str(self.out_dir):
            raise ScenarioError("Both a scenario path and an output directory are required.")
        if self.mode not in MODES:
            raise ScenarioError(f"Unknown mode {self.mode!r}")
        if self.periods is not None and self.periods < 1:
            raise ScenarioError("--periods must be positive", key_path="periods")
        if self.seed is not None and self.seed < 0:
            raise ScenarioError("--seed must be non-negative", key_path="seed")


@dataclass
class SweepSpec:
    param: str
    values: tuple
    jobs: int = None

    def validate(self):
        if not self.param:
            raise ScenarioError("A sweep needs a parameter path.")
        if len(self.values) < 2:
            raise ScenarioError("A sweep needs at least two values.", key_path=self.param)
        if self.jobs is not None and self.jobs < 1:
            raise ScenarioError("--jobs must be at least 1")


def parse_cli(argv=None):
    parser = argparse.ArgumentParser(
        prog="labour-games", description="Labour-market and pricing-game simulator driven by scenario files."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in ("run", "sweep", "pricing-lab", "spatial-lab"):
        sub = subparsers.add_parser(command)
        sub.add_argument(
            "--scenario",
            type=Path,
            default=DEFAULT_SCENARIO,
            help="Scenario TOML file. Defaults to the packaged default scenario.",
        )
        sub.add_argument("--out", type=Path, required=True, help="Directory for result files.")
        sub.add_argument("--seed", type=int, help="Override the scenario seed.")
        sub.add_argument("--periods", type=int, help="Override the number of periods.")
        sub.add_argument("--verbose", action="store_true", help="Show per-period detail in the log.")

        if command == "sweep":
            sub.add_argument("--param", required=True, help="Dotted path, e.g. mobility.band_floor.")
            sub.add_argument("--values", required=True, help="Comma-separated values, e.g. 0.2,0.4,0.6.")
            sub.add_argument("--mode", choices=SWEEP_MODES, default="run", help="What to run for each value.")
            sub.add_argument("--jobs", type=int, help="Parallel sub-runs. Defaults to the number of cores.")

    return parser.parse_args(argv)


def main(argv=None):
    args = parse_cli(argv)
    output_utils.configure_logging(args.verbose)

    config = RunConfig(
        scenario_path=args.scenario,
        out_dir=args.out,
        seed=args.seed,
        periods=args.periods,
        mode=args.mode if args.command == "sweep" else args.command,
    )
    if args.command == "sweep":
        values = tuple(value.strip() for value in args.values.split(",") if value.strip())
        return sweep_command(config, SweepSpec(args.param, values, args.jobs))
    return run_command(config)


def run_command(config):
    """Run one scenario in the configured mode; returns the exit code."""
    try:
        config.validate()
        scenario = _load(config)
        write_output(run_messages.scenario_loaded(config.scenario_path, scenario.periods, scenario.seed))

        if config.mode == "pricing-lab":
            names = _pricing_lab(scenario, config.out_dir)["files"]
        elif config.mode == "spatial-lab":
            names = _spatial_lab(scenario, config.out_dir)
        else:
            write_output(run_messages.run_started)
            series = sim_engine.run(scenario)
            analysis = output_utils.write_run_outputs(config.out_dir, scenario, series)
            if analysis["run"] is None:
                write_output(run_messages.no_steady_state)
            names = output_utils.RUN_FILES
    except SimCommandError as exc:
        print(exc.message, file=sys.stderr)
        return exc.exit_code

    write_output(run_messages.files_written(config.out_dir, names))
    return 0


def sweep_command(config, spec):
    """Run one sub-run per value (in parallel) and collect sweep_summary.csv."""
    try:
        config.validate()
        spec.validate()
        if config.mode not in SWEEP_MODES:
            raise ScenarioError(f"Sweeps support the modes {', '.join(SWEEP_MODES)}")
        base = _load(config)
        # Resolve the path once so a typo fails before any sub-run starts.
        apply_override(base, spec.param, spec.values[0])
    except SimCommandError as exc:
        print(exc.message, file=sys.stderr)
        return exc.exit_code

    write_output(run_messages.sweep_started)
    jobs = [
        (index, value, base, spec.param, config.mode, Path(config.out_dir) / f"{spec.param}={value}")
        for index, value in enumerate(spec.values)
    ]
    workers = spec.jobs or os.cpu_count() or 1
    if workers == 1:
        results = [_sweep_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_sweep_job, jobs))

    exit_code = 0
    for row, code in results:
        if code:
            write_output(run_messages.sweep_value_failed(row[0], row[-1]))
            exit_code = max(exit_code, code)

    try:
        text = output_utils.csv_text(SWEEP_COLUMNS, [row for row, _ in results], f"sweep over {spec.param}")
        output_utils.write_atomic(Path(config.out_dir) / "sweep_summary.csv", text)
    except SimCommandError as exc:
        print(exc.message, file=sys.stderr)
        return exc.exit_code

    write_output(run_messages.files_written(config.out_dir, ["sweep_summary.csv"]))
    return exit_code


# --- Helper functions ---

def _load(config):
    scenario = load_scenario(config.scenario_path)
    if config.seed is not None:
        scenario = apply_override(scenario, "seed", config.seed)
    if config.periods is not None:
        scenario = apply_override(scenario, "periods", config.periods)
    return scenario


def _sweep_job(job):
    """One sweep value; returns (summary row, exit code) and never raises."""
    index, value, base, param, mode, out_dir = job
    try:
        scenario = apply_override(base, param, value)
        if mode == "pricing-lab":
            result = _pricing_lab(scenario, out_dir)
            return (value, "ok", None, None, None, None, None, None, result["delta_star"], ""), 0

        series = sim_engine.run(scenario)
        analysis = output_utils.write_run_outputs(out_dir, scenario, series)
        steady = analysis["post_shock"] if scenario.shocks else analysis["run"]
        if steady is None:
            last = series.rows[-1]
            values = {name: getattr(last, name) for name in ("w_bar", "e_m", "Y", "u_rate", "v_rate")}
            period = None
        else:
            values, period = steady.values, steady.period
        row = (
            value, "ok", period,
            values["w_bar"], values["e_m"], values["Y"], values["u_rate"], values["v_rate"],
            None, "",
        )
        return row, 0
    except SimCommandError as exc:
        logger.warning("Sweep value %s (#%d) failed: %s", value, index, exc.message)
        return (value, "failed", None, None, None, None, None, None, None, exc.message), exc.exit_code


def _pricing_lab(scenario, out_dir):
    if scenario.pricing is None:
        raise ScenarioError(run_messages.no_pricing_section.strip(), key_path="pricing")

    spec = scenario.pricing
    game = spec.game()
    result = repeated_pricing.play_repeated(game, list(spec.machines()), scenario.periods, spec.delta, scenario.seed)
    grim = repeated_pricing.critical_discount_grim(game)
    abreu = repeated_pricing.abreu_critical(game, min(spec.p_stick, game.c), spec.k_stick)
    entrant = repeated_pricing.Entrant(c_e=spec.entrant_cost, E=spec.entry_fee)
    limit = repeated_pricing.three_period_schedule(game, entrant)

    rows = [
        (t, tuple(result.prices[t]), tuple(result.profits[t]), result.signals[t])
        for t in range(scenario.periods)
    ]
    out_dir = Path(out_dir)
    output_utils.write_atomic(
        out_dir / "pricing.csv",
        output_utils.csv_text(("t", "prices", "profits", "signal"), rows, "per-firm values are ';'-separated"),
    )
    summary = run_messages.pricing_summary(grim, abreu, limit)
    output_utils.write_atomic(out_dir / "summary.txt", summary.lstrip("\n"))
    write_output(summary)
    return {"files": ("pricing.csv", "summary.txt"), "delta_star": grim.delta_star}


def _spatial_lab(scenario, out_dir):
    if scenario.spatial is None:
        raise ScenarioError(run_messages.no_spatial_section.strip(), key_path="spatial")

    spec = scenario.spatial
    market = spec.market()
    coalition = spatial.Coalition(spec.coalition)
    equilibrium = spatial.salop_equilibrium(market)
    report = spatial.coalition_evaluate(market, coalition)
    diverted = spatial.diversion_mass(market, coalition)
    free_entry = spatial.free_entry_firm_count(spec.tau, spec.entry_cost) if spec.entry_cost > 0 else None

    rows = [
        (i, market.positions[i], equilibrium.prices[i], equilibrium.shares[i], equilibrium.profits[i])
        for i in range(market.n_firms)
    ]
    out_dir = Path(out_dir)
    output_utils.write_atomic(
        out_dir / "spatial.csv",
        output_utils.csv_text(("firm", "position", "price", "share", "profit"), rows, "pre-merger equilibrium"),
    )
    summary = run_messages.spatial_summary(equilibrium, report, free_entry, diverted)
    output_utils.write_atomic(out_dir / "summary.txt", summary.lstrip("\n"))
    write_output(summary)
    return ("spatial.csv", "summary.txt")
