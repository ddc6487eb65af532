"""Shared domain types, parameters, and household primitives.

Every other module consumes these records. They're immutable; anything that
"changes" a record builds a new one with dataclasses.replace().
"""

import math
from dataclasses import dataclass, replace

from .command_errors import ModelError


OUTPUT_MODES = ("cobb_douglas", "additive")


@dataclass(frozen=True)
class Params:
    """Model parameters for one scenario.

    Range constraints are checked at construction; an invalid Params is never built.
    """

    alpha_exp: float = 0.5
    r: float = 0.05
    b: float = 0.05
    g: float = 0.0
    lambda_reneg: float = 0.25
    beta_power: float = 0.5
    kappa: float = 1.0
    phi: float = 1.0
    psi: float = 0.0
    h_hold_band: float = 0.02
    tol: float = 1e-6

    # Mechanism settings without a calibrated value of their own.
    n_window: int = 4
    rho: float = 0.8
    k_punish: int = 3
    benefit: float = 0.4
    hiring_cost: float = 1.0
    menu_cost: float = 0.0
    f_rate0: float = 0.3
    base_effort: float = 0.5
    output_mode: str = "cobb_douglas"

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Reject any parameter outside its admissible range."""
        _check(0 < self.alpha_exp < 1, "alpha_exp", "must lie in (0, 1)")
        _check(self.r >= 0, "r", "must be >= 0")
        _check(0 <= self.b < 1, "b", "must lie in [0, 1)")
        _check(self.g >= 0, "g", "must be >= 0")
        _check(0 <= self.lambda_reneg <= 1, "lambda_reneg", "must lie in [0, 1]")
        _check(0 < self.beta_power < 1, "beta_power", "must lie in (0, 1)")
        _check(self.kappa > 0, "kappa", "must be > 0")
        _check(self.phi > 0, "phi", "must be > 0")
        _check(self.psi >= 0, "psi", "must be >= 0")
        _check(self.h_hold_band >= 0, "h_hold_band", "must be >= 0")
        _check(self.tol > 0, "tol", "must be > 0")
        _check(int(self.n_window) == self.n_window and self.n_window >= 1, "n_window", "must be an integer >= 1")
        _check(0 < self.rho < 1, "rho", "must lie in (0, 1)")
        _check(int(self.k_punish) == self.k_punish and self.k_punish >= 1, "k_punish", "must be an integer >= 1")
        _check(self.benefit >= 0, "benefit", "must be >= 0")
        _check(self.hiring_cost >= 0, "hiring_cost", "must be >= 0")
        _check(self.menu_cost >= 0, "menu_cost", "must be >= 0")
        _check(0 <= self.f_rate0 <= 1, "f_rate0", "must lie in [0, 1]")
        _check(0 <= self.base_effort <= 1, "base_effort", "must lie in [0, 1]")
        _check(self.output_mode in OUTPUT_MODES, "output_mode", f"must be one of {', '.join(OUTPUT_MODES)}")


@dataclass(frozen=True)
class HouseholdState:
    """One household: endowment, job status, pay, effort, and mobility score."""

    wealth: float = 1.0
    employed: bool = False
    wage: float = 0.0
    effort: float = 0.0
    score: float = 0.5
    tenure: int = 0

    def __post_init__(self):
        _check(self.wage >= 0, "wage", "must be >= 0")
        _check(0 <= self.effort <= 1, "effort", "must lie in [0, 1]")
        _check(0 < self.score < 1, "score", "must lie in (0, 1)")
        _check(self.tenure >= 0, "tenure", "must be >= 0")
        _check(self.employed or self.tenure == 0, "tenure", "must be 0 for an unemployed household")


@dataclass(frozen=True)
class Aggregates:
    """Economy-wide totals for one period.

    The employed and unemployed pools always partition the household count.
    """

    H: int
    e_m: int
    e_u: int
    A: float = 1.0
    K: float = 1.0
    L: float = 0.0
    w_bar: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        _check(self.e_m >= 0 and self.e_u >= 0, "e_m", "counts must be >= 0")
        _check(self.e_m + self.e_u == self.H, "e_m", f"e_m + e_u must equal H ({self.e_m} + {self.e_u} != {self.H})")
        _check(self.A > 0, "A", "must be > 0")
        _check(self.K > 0, "K", "must be > 0")
        _check(self.L >= 0, "L", "must be >= 0")
        _check(self.p > 0, "p", "must be > 0")

    def with_counts(self, H, e_m):
        """Return a copy with new counts; e_u follows from H - e_m."""
        return replace(self, H=H, e_m=e_m, e_u=H - e_m)


def household_utility(hh, leisure, A, params):
    """Quasi-linear period utility of a household.

    U = wealth + wage*(1 - leisure) - kappa*effort^(1+phi)/(1+phi) + psi*ln(A)
    """
    if not 0 <= leisure <= 1:
        raise ModelError(f"leisure must lie in [0, 1], got {leisure}")
    if A <= 0:
        raise ModelError(f"knowledge A must be > 0, got {A}")

    disutility = params.kappa * hh.effort ** (1 + params.phi) / (1 + params.phi)
    return hh.wealth + hh.wage * (1 - leisure) - disutility + params.psi * math.log(A)


def budget_satisfied(hh, lifetime_earnings_npv, fiscal_carryover, drawdown=None):
    """Check whether a household's consumption claims fit its resources.

    The claims are the wealth the household draws down (its whole endowment unless
    `drawdown` says otherwise) plus the fiscal carry-over to the next generation.
    """
    if lifetime_earnings_npv < 0:
        raise ModelError(f"lifetime_earnings_npv must be >= 0, got {lifetime_earnings_npv}")

    if drawdown is None:
        drawdown = hh.wealth
    claims = drawdown + fiscal_carryover
    return claims <= hh.wealth + lifetime_earnings_npv


# --- Helper functions ---

def _check(condition, name, requirement):
    if not condition:
        raise ModelError(f"{name} {requirement}")
