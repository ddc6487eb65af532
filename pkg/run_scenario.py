"""Run a scenario from a source checkout.

Usage:
$ python run_scenario.py run --out results/
$ python run_scenario.py sweep --param mobility.band_floor --values 0.2,0.4,0.6 --out sweep/

This is the same interface as the `labour-games` command installed with the package.
"""

import sys

from labour_games import cli


if __name__ == "__main__":
    sys.exit(cli.main())
