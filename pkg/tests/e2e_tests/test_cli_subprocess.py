"""Run the installed command-line interface in subprocesses.

This test:
- Runs `python -m labour_games` for each mode against a tiny scenario.
- Checks exit codes, the files written, and the diagnostics on stderr.
- Runs the same scenario twice and compares the result files byte for byte.
"""

import sys

import pytest

from tests.e2e_tests.utils import e2e_utils


# Skip these tests if the package can't be started as a module.
pytestmark = pytest.mark.skipif(
    not e2e_utils.package_runnable(sys.executable), reason="labour_games must be importable to run e2e tests."
)

TINY = e2e_utils.REFERENCE_DIR / "tiny.toml"


def test_help_lists_commands(cli_options):
    output = e2e_utils.run_cli(cli_options, "--help")
    assert output.returncode == 0
    for command in ("run", "sweep", "pricing-lab", "spatial-lab"):
        assert command in output.stdout


def test_run(cli_options, out_root):
    out_dir = out_root / "run"
    output = e2e_utils.run_cli(cli_options, f"run --scenario {TINY.as_posix()} --out {out_dir.as_posix()}")

    assert output.returncode == 0, output.stderr
    assert "Scenario run summary" in output.stdout
    assert len(e2e_utils.read_data_rows(out_dir / "series.csv")) == 15
    assert len(e2e_utils.read_data_rows(out_dir / "beveridge.csv")) == 15


def test_runs_are_byte_identical(cli_options, out_root):
    paths = []
    for name in ("repeat_a", "repeat_b"):
        out_dir = out_root / name
        output = e2e_utils.run_cli(cli_options, f"run --scenario {TINY.as_posix()} --out {out_dir.as_posix()}")
        assert output.returncode == 0, output.stderr
        paths.append(out_dir)

    for name in ("series.csv", "beveridge.csv", "summary.txt", "steady_state.txt"):
        assert (paths[0] / name).read_bytes() == (paths[1] / name).read_bytes()


def test_seed_override(cli_options, out_root):
    out_dir = out_root / "seeded"
    output = e2e_utils.run_cli(
        cli_options, f"run --scenario {TINY.as_posix()} --out {out_dir.as_posix()} --seed 11"
    )
    assert output.returncode == 0, output.stderr
    assert "seed 11" in output.stdout


def test_pricing_lab(cli_options, out_root):
    out_dir = out_root / "pricing"
    output = e2e_utils.run_cli(cli_options, f"pricing-lab --scenario {TINY.as_posix()} --out {out_dir.as_posix()}")

    assert output.returncode == 0, output.stderr
    assert (out_dir / "pricing.csv").exists()
    assert "Limit pricing schedule" in (out_dir / "summary.txt").read_text()


def test_spatial_lab(cli_options, out_root):
    out_dir = out_root / "spatial"
    output = e2e_utils.run_cli(cli_options, f"spatial-lab --scenario {TINY.as_posix()} --out {out_dir.as_posix()}")

    assert output.returncode == 0, output.stderr
    assert len(e2e_utils.read_data_rows(out_dir / "spatial.csv")) == 5


def test_sweep(cli_options, out_root):
    out_dir = out_root / "sweep"
    output = e2e_utils.run_cli(
        cli_options,
        f"sweep --scenario {TINY.as_posix()} --out {out_dir.as_posix()} "
        "--param params.lambda_reneg --values 0.25,1.0 --jobs 2",
    )

    assert output.returncode == 0, output.stderr
    assert len(e2e_utils.read_data_rows(out_dir / "sweep_summary.csv")) == 2


def test_invalid_scenario_exits_with_code_2(cli_options, out_root, tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("schema_version = 1\n\n[params]\nlambda_reneg = 1.5\n")

    output = e2e_utils.run_cli(cli_options, f"run --scenario {path.as_posix()} --out {(out_root / 'broken').as_posix()}")
    assert output.returncode == 2
    assert "params.lambda_reneg" in output.stderr
    assert "line: 4" in output.stderr


def test_unwritable_output_exits_with_code_4(cli_options, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")

    output = e2e_utils.run_cli(cli_options, f"run --scenario {TINY.as_posix()} --out {(blocker / 'out').as_posix()}")
    assert output.returncode == 4
    assert "Could not write" in output.stderr
