"""Tests for loading, validating, and overriding scenario files."""

from textwrap import dedent

import pytest
import toml

from labour_games import scenario_config as sc
from labour_games.command_errors import ScenarioError
from labour_games.firm_side import TechShock
from labour_games.sim_engine import PricingSpec, Scenario


def write_scenario(tmp_path, text):
    path = tmp_path / "scenario.toml"
    path.write_text(dedent(text).lstrip())
    return path


def test_load_default_scenario():
    scenario = sc.load_scenario(sc.DEFAULT_SCENARIO)
    assert scenario.periods == 200
    assert scenario.seed == 42
    assert scenario.shocks == (TechShock(-0.05, duration=10, start=80),)
    assert scenario.pricing == PricingSpec()
    assert scenario.spatial.entry_cost == 0.05


def test_minimal_file_uses_defaults(tmp_path):
    path = write_scenario(tmp_path, "schema_version = 1\n")
    assert sc.load_scenario(path) == Scenario()


def test_out_of_range_value_names_key_and_line(tmp_path):
    path = write_scenario(
        tmp_path,
        """
        schema_version = 1
        [params]
        lambda_reneg = 1.5
        """,
    )
    with pytest.raises(ScenarioError) as exc_info:
        sc.load_scenario(path)

    error = exc_info.value
    assert error.key_path == "params.lambda_reneg"
    assert error.line == 3
    assert error.exit_code == 2
    assert "params.lambda_reneg" in error.message


def test_unknown_key_is_rejected(tmp_path):
    path = write_scenario(
        tmp_path,
        """
        schema_version = 1
        [params]
        lamda_reneg = 0.5
        """,
    )
    with pytest.raises(ScenarioError, match="lamda_reneg") as exc_info:
        sc.load_scenario(path)
    assert exc_info.value.line == 3


def test_unknown_table_is_rejected(tmp_path):
    path = write_scenario(tmp_path, "schema_version = 1\n[labour]\nx = 1\n")
    with pytest.raises(ScenarioError, match="labour"):
        sc.load_scenario(path)


def test_schema_version_is_required(tmp_path):
    path = write_scenario(tmp_path, "seed = 1\n")
    with pytest.raises(ScenarioError) as exc_info:
        sc.load_scenario(path)
    assert exc_info.value.key_path == "schema_version"


def test_zero_periods(tmp_path):
    path = write_scenario(tmp_path, "schema_version = 1\nperiods = 0\n")
    with pytest.raises(ScenarioError) as exc_info:
        sc.load_scenario(path)
    assert exc_info.value.key_path == "periods"
    assert exc_info.value.line == 2


def test_non_integer_periods(tmp_path):
    path = write_scenario(tmp_path, 'schema_version = 1\nperiods = "ten"\n')
    with pytest.raises(ScenarioError, match="periods must be an integer"):
        sc.load_scenario(path)


def test_boolean_for_number(tmp_path):
    path = write_scenario(tmp_path, "schema_version = 1\n[params]\nr = true\n")
    with pytest.raises(ScenarioError, match="boolean"):
        sc.load_scenario(path)


def test_invalid_shock_names_its_table(tmp_path):
    path = write_scenario(
        tmp_path,
        """
        schema_version = 1
        [[shocks]]
        magnitude = 0.0
        """,
    )
    with pytest.raises(ScenarioError) as exc_info:
        sc.load_scenario(path)
    assert exc_info.value.key_path == "shocks[0]"


def test_parse_error_reports_line(tmp_path):
    path = write_scenario(tmp_path, "schema_version = 1\nperiods = = 3\n")
    with pytest.raises(ScenarioError, match="Could not parse") as exc_info:
        sc.load_scenario(path)
    assert exc_info.value.line is not None


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="not found"):
        sc.load_scenario(tmp_path / "missing.toml")


def test_dump_and_reload_default():
    scenario = sc.load_scenario(sc.DEFAULT_SCENARIO)
    text = sc.dump_scenario(scenario)
    assert sc.parse_scenario(toml.loads(text), text) == scenario


def test_dump_omits_unset_values():
    data = sc.scenario_to_dict(Scenario())
    assert "pricing" not in data
    assert "protection_tenure" not in data["mobility"]


def test_override_section_value():
    scenario = sc.apply_override(Scenario(), "mobility.band_floor", "0.4")
    assert scenario.mobility.band_floor == 0.4
    assert Scenario().mobility.band_floor == 0.2


def test_override_top_level_value():
    assert sc.apply_override(Scenario(), "periods", "50").periods == 50
    assert sc.apply_override(Scenario(), "seed", 7).seed == 7


def test_override_creates_optional_table():
    scenario = sc.apply_override(Scenario(), "pricing.delta", "0.8")
    assert scenario.pricing == PricingSpec(delta=0.8)


def test_override_tuple_value():
    scenario = sc.apply_override(Scenario(), "spatial.coalition", "0,1,2")
    assert scenario.spatial.coalition == (0, 1, 2)


@pytest.mark.parametrize(
    "path, value", [("mobility.floor", "0.4"), ("nothing.here", "1"), ("params", "1"), ("params.lambda_reneg", "2")]
)
def test_bad_overrides(path, value):
    with pytest.raises(ScenarioError) as exc_info:
        sc.apply_override(Scenario(), path, value)
    assert exc_info.value.key_path == path


def test_override_type_mismatch():
    with pytest.raises(ScenarioError, match="expected int"):
        sc.apply_override(Scenario(), "periods", "1.5")
