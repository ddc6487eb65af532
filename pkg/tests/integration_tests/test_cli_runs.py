"""Run the command-line interface in-process against small scenario files."""

from filecmp import dircmp
from pathlib import Path

import pytest

from labour_games import cli
from labour_games.output_utils import RUN_FILES
from labour_games.sim_engine import SERIES_COLUMNS


REFERENCE_DIR = Path(__file__).parent / "reference_files"
SHORT_RUN = REFERENCE_DIR / "short_run.toml"
NO_OPTIONAL = REFERENCE_DIR / "no_optional_tables.toml"
GOLDEN_RUN = REFERENCE_DIR / "golden_run"


def run_cli(*args):
    return cli.main([str(arg) for arg in args])


def data_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")][1:]


def test_run_writes_result_files(tmp_path):
    assert run_cli("run", "--scenario", SHORT_RUN, "--out", tmp_path) == 0

    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(RUN_FILES)
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert lines[1] == ",".join(SERIES_COLUMNS)
    assert len(data_lines(tmp_path / "series.csv")) == 30


def test_repeated_runs_write_identical_files(tmp_path_factory):
    first = tmp_path_factory.mktemp("first_run")
    second = tmp_path_factory.mktemp("second_run")
    assert run_cli("run", "--scenario", SHORT_RUN, "--out", first) == 0
    assert run_cli("run", "--scenario", SHORT_RUN, "--out", second) == 0

    dc = dircmp(first, second)
    assert_dirs_match(dc)


def test_run_matches_golden_files(tmp_path):
    assert run_cli("run", "--scenario", REFERENCE_DIR / "golden_run.toml", "--out", tmp_path) == 0

    dc = dircmp(tmp_path, GOLDEN_RUN)
    assert_dirs_match(dc)
    for name in RUN_FILES:
        assert (tmp_path / name).read_bytes() == (GOLDEN_RUN / name).read_bytes()


def test_periods_override(tmp_path):
    assert run_cli("run", "--scenario", NO_OPTIONAL, "--out", tmp_path, "--periods", 5) == 0
    assert len(data_lines(tmp_path / "series.csv")) == 5


def test_override_that_breaks_the_scenario(tmp_path, capsys):
    # short_run.toml has a shock ending at period 18.
    assert run_cli("run", "--scenario", SHORT_RUN, "--out", tmp_path, "--periods", 12) == 2
    assert "shock window" in capsys.readouterr().err


def test_out_of_range_value(tmp_path, capsys):
    assert run_cli("run", "--scenario", REFERENCE_DIR / "bad_range.toml", "--out", tmp_path) == 2

    err = capsys.readouterr().err
    assert "params.lambda_reneg" in err
    assert "line: 4" in err
    assert not any(tmp_path.iterdir())


def test_unknown_key(tmp_path, capsys):
    assert run_cli("run", "--scenario", REFERENCE_DIR / "unknown_key.toml", "--out", tmp_path) == 2
    assert "lamda_reneg" in capsys.readouterr().err


def test_missing_scenario(tmp_path, capsys):
    assert run_cli("run", "--scenario", tmp_path / "nope.toml", "--out", tmp_path) == 2
    assert "not found" in capsys.readouterr().err


def test_out_is_required():
    with pytest.raises(SystemExit):
        run_cli("run")


def test_pricing_lab(tmp_path, capsys):
    assert run_cli("pricing-lab", "--scenario", SHORT_RUN, "--out", tmp_path) == 0

    assert len(data_lines(tmp_path / "pricing.csv")) == 30
    summary = (tmp_path / "summary.txt").read_text()
    assert "Grim trigger critical discount: 0.5 " in summary
    assert "stick credible: False" in summary
    assert "ignores deviations while the stick is played" in summary
    assert "Stick-and-carrot critical discount" in capsys.readouterr().out


def test_pricing_lab_needs_pricing_table(tmp_path, capsys):
    assert run_cli("pricing-lab", "--scenario", NO_OPTIONAL, "--out", tmp_path) == 2
    assert "[pricing]" in capsys.readouterr().err


def test_spatial_lab(tmp_path):
    assert run_cli("spatial-lab", "--scenario", SHORT_RUN, "--out", tmp_path) == 0

    assert len(data_lines(tmp_path / "spatial.csv")) == 4
    summary = (tmp_path / "summary.txt").read_text()
    assert "Profitable: True" in summary
    assert "Free-entry firm count: 4" in summary


def test_spatial_lab_needs_spatial_table(tmp_path):
    assert run_cli("spatial-lab", "--scenario", NO_OPTIONAL, "--out", tmp_path) == 2


def test_sweep(tmp_path):
    exit_code = run_cli(
        "sweep", "--scenario", NO_OPTIONAL, "--out", tmp_path,
        "--param", "mobility.band_floor", "--values", "0.2,0.4", "--jobs", 1,
    )
    assert exit_code == 0

    rows = data_lines(tmp_path / "sweep_summary.csv")
    assert [row.split(",")[:2] for row in rows] == [["0.2", "ok"], ["0.4", "ok"]]
    assert (tmp_path / "mobility.band_floor=0.2" / "series.csv").exists()
    assert (tmp_path / "mobility.band_floor=0.4" / "series.csv").exists()


def test_parallel_sweep_matches_serial(tmp_path_factory):
    serial = tmp_path_factory.mktemp("serial_sweep")
    parallel = tmp_path_factory.mktemp("parallel_sweep")
    args = ["--scenario", NO_OPTIONAL, "--param", "params.lambda_reneg", "--values", "0.25,0.5,1.0"]

    assert run_cli("sweep", "--out", serial, "--jobs", 1, *args) == 0
    assert run_cli("sweep", "--out", parallel, "--jobs", 2, *args) == 0
    assert (serial / "sweep_summary.csv").read_text() == (parallel / "sweep_summary.csv").read_text()


def test_sweep_reports_failed_values(tmp_path):
    exit_code = run_cli(
        "sweep", "--scenario", NO_OPTIONAL, "--out", tmp_path,
        "--param", "mobility.band_floor", "--values", "0.2,1.5", "--jobs", 1,
    )
    assert exit_code == 2

    rows = data_lines(tmp_path / "sweep_summary.csv")
    assert rows[0].startswith("0.2,ok")
    assert rows[1].startswith("1.5,failed")


def test_sweep_rejects_unknown_parameter(tmp_path):
    exit_code = run_cli(
        "sweep", "--scenario", NO_OPTIONAL, "--out", tmp_path, "--param", "mobility.floor", "--values", "0.2,0.4",
    )
    assert exit_code == 2
    assert not (tmp_path / "sweep_summary.csv").exists()


def test_sweep_needs_two_values(tmp_path):
    exit_code = run_cli(
        "sweep", "--scenario", NO_OPTIONAL, "--out", tmp_path, "--param", "mobility.band_floor", "--values", "0.2",
    )
    assert exit_code == 2


def test_pricing_sweep(tmp_path):
    exit_code = run_cli(
        "sweep", "--scenario", SHORT_RUN, "--out", tmp_path,
        "--param", "pricing.n_firms", "--values", "2,3", "--mode", "pricing-lab", "--jobs", 1,
    )
    assert exit_code == 0

    header, *rows = [line for line in (tmp_path / "sweep_summary.csv").read_text().splitlines()[1:]]
    delta_index = header.split(",").index("delta_star")
    assert [row.split(",")[delta_index] for row in rows] == ["0.5", "0.666666667"]


# --- Helper functions ---

def assert_dirs_match(dc):
    """Recursively check that two result directories hold identical files."""
    assert not dc.left_only
    assert not dc.right_only
    assert not dc.diff_files
    for sub_dc in dc.subdirs.values():
        assert_dirs_match(sub_dc)
