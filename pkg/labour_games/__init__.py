from .scenario_config import load_scenario
from .sim_engine import Scenario, run
