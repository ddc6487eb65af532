"""Configuration for e2e test runs."""

import sys
from dataclasses import dataclass

import pytest


# --- Custom CLI args ---
def pytest_addoption(parser):
    parser.addoption(
        "--python-cmd",
        action="store",
        default=sys.executable,
        help="Interpreter used to run `python -m labour_games`. Defaults to the one running pytest.",
    )
    parser.addoption(
        # Useful for inspecting result files after a failing run. Without this, each
        # test writes into its own pytest temp dir, which is garbage collected.
        "--keep-outputs",
        action="store_true",
        help="Print the output directory of each CLI run so its files can be inspected.",
    )

@dataclass
class CLIOptions:
    python_cmd: str = sys.executable
    keep_outputs: bool = False

@pytest.fixture(scope="session")
def cli_options(request):
    return CLIOptions(
        python_cmd=request.config.getoption("--python-cmd"),
        keep_outputs=request.config.getoption("--keep-outputs"),
    )


# --- Fixtures ---

@pytest.fixture(scope="module")
def out_root(tmp_path_factory, cli_options):
    """Parent directory for all CLI runs in a test module."""
    tmp_path = tmp_path_factory.mktemp("e2e_cli_runs")
    if cli_options.keep_outputs:
        print(f"\nWriting e2e results to: {tmp_path.as_posix()}")
    return tmp_path
