"""Messages shown while running scenarios and writing results."""

# Static strings first; anything that depends on run results is built in a function.

from textwrap import dedent


run_started = """
Running scenario..."""

sweep_started = """
Running parameter sweep..."""

no_steady_state = """
No steady state was found; the tracked aggregates were still moving at the end
  of the run. Try more periods, or a looser [output] steady_tol."""

no_pricing_section = """
This command needs a [pricing] table in the scenario file."""

no_spatial_section = """
This command needs a [spatial] table in the scenario file."""

stick_not_credible = """
The stick is not self-enforcing here: the stick-and-carrot threshold only
  guards the collusive phase and ignores deviations while the stick is played.
"""


# --- Dynamic strings ---

def scenario_loaded(path, periods, seed):
    return f"  Loaded {path} ({periods} periods, seed {seed})."


def files_written(out_dir, names):
    listing = "\n".join(f"    {name}" for name in names)
    return f"  Wrote to {out_dir}:\n{listing}"


def sweep_value_failed(value, message):
    return f"  Run for value {value} failed: {message}"


def steady_state_report(label, steady):
    if steady is None:
        return f"{label}: none found"
    values = ", ".join(f"{name}={value:.9g}" for name, value in steady.values.items())
    return f"{label}: from period {steady.period} (window {steady.window}, tol {steady.tol:g}): {values}"


def run_summary(scenario, series, steady, half_life):
    """Human-readable summary of a completed run."""
    first, last = series.rows[0], series.rows[-1]
    shocks = ", ".join(
        f"{shock.magnitude:+g} for {shock.duration} from t={shock.start}" for shock in scenario.shocks
    ) or "none"
    half_life_text = "n/a" if half_life is None else f"{half_life:.3g} periods"

    msg = dedent(
        f"""
        --- Scenario run summary ---

        Periods: {len(series)}  Seed: {scenario.seed}
        Households: {last.e_m + last.e_u}  Firms: {scenario.economy.firms}
        Shocks: {shocks}

        Period {first.t}: Y={first.Y:.6g}  w_bar={first.w_bar:.6g}  e_m={first.e_m}  u_rate={first.u_rate:.4f}
        Period {last.t}: Y={last.Y:.6g}  w_bar={last.w_bar:.6g}  e_m={last.e_m}  u_rate={last.u_rate:.4f}

        Steady state: {"none found" if steady is None else f"from period {steady.period}"}
        Aggregate-wage gap half-life after the first shock: {half_life_text}
        """
    )
    return msg


def pricing_summary(grim, abreu, limit):
    msg = dedent(
        f"""
        --- Pricing lab ---

        Grim trigger critical discount: {grim.delta_star:.9g} (simulated: {_maybe(grim.simulated)})
        Stick-and-carrot critical discount: {abreu.delta_star:.9g}
          punishment too weak: {abreu.too_weak}  stick credible: {abreu.stick_credible}
        Limit pricing schedule: P1={limit.schedule.P1:.9g}  P2={limit.schedule.P2:.9g}  P3={limit.schedule.P3:.9g}
          entry undeterrable: {limit.undeterrable}
        """
    )
    if not abreu.stick_credible:
        msg += stick_not_credible
    return msg


def spatial_summary(equilibrium, report, free_entry, diverted):
    prices = ", ".join(f"{p:.9g}" for p in equilibrium.prices)
    msg = dedent(
        f"""
        --- Spatial lab ---

        Equilibrium prices: {prices}
        Coalition profit: {report.coalition_profit:.9g}  standalone sum: {report.standalone_profit_sum:.9g}
        Profitable: {report.profitable}
        Diverted consumer mass: {diverted:.6g}
        Distances to outside rivals: before {_pair(report.pre_merger_D)}, after {_pair(report.D)}
        Free-entry firm count: {"n/a" if free_entry is None else free_entry}
        """
    )
    return msg


def _maybe(value):
    return "n/a" if value is None else f"{value:.9g}"


def _pair(values):
    return "(" + ", ".join(f"{v:.6g}" for v in values) + ")"
