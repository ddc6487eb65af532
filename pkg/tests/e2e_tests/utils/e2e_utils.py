"""Utility functions for e2e tests."""

import shlex
import subprocess
from pathlib import Path


REFERENCE_DIR = Path(__file__).parents[1] / "reference_files"


def package_runnable(python_cmd):
    """Ensure `python -m labour_games` can be started before running tests."""
    cmd = f"{python_cmd} -m labour_games --help"
    cmd_parts = shlex.split(cmd)
    try:
        output = subprocess.run(cmd_parts, capture_output=True)
    except FileNotFoundError:
        return False
    return output.returncode == 0


def run_cli(cli_options, args):
    """Run the CLI in a subprocess and return the completed process."""
    cmd = f"{cli_options.python_cmd} -m labour_games {args}"
    cmd_parts = shlex.split(cmd)
    return subprocess.run(cmd_parts, capture_output=True, text=True)


def read_data_rows(path):
    """CSV lines below the comment and header lines."""
    lines = [line for line in Path(path).read_text().splitlines() if not line.startswith("#")]
    return lines[1:]
