"""Nash wage bargaining, staggered renegotiation, and effort punishment.

Wages are solved on an explicit grid so the outcome can be checked against an
exhaustive evaluation of the Nash product. Ties go to the lowest wage: firms keep
the stronger bargaining position.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .command_errors import ModelError


@dataclass(frozen=True)
class WageContract:
    wage: float
    agreed_at: int = 0
    promised_wage: float = 0.0
    effort_multiplier: float = 1.0
    punish_remaining: int = 0

    def __post_init__(self):
        if self.wage < 0:
            raise ModelError(f"contract wage must be >= 0, got {self.wage}")
        if not 0 < self.effort_multiplier <= 1:
            raise ModelError(f"effort_multiplier must lie in (0, 1], got {self.effort_multiplier}")
        if self.punish_remaining < 0:
            raise ModelError("punish_remaining must be >= 0")


@dataclass(frozen=True)
class DisagreementPoint:
    z_e: float = 0.0
    z_f: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.z_e) and math.isfinite(self.z_f)):
            raise ModelError("disagreement payoffs must be finite")


@dataclass(frozen=True)
class Agreement:
    wage: float
    worker_value: float
    firm_value: float

    agreed = True


@dataclass(frozen=True)
class Disagreement:
    agreed = False


def employment_value(w, r, b):
    """Discounted value of a job paying w, with survival exp(-(r+b)t): w / (r + b)."""
    if r + b <= 0:
        raise ModelError("employment value diverges when r + b = 0")
    if w < 0:
        raise ModelError(f"wage must be >= 0, got {w}")
    return w / (r + b)


def unemployment_value(z_benefit, f_rate, V_E, r):
    """Value of searching: (z + f * V_E) / (r + f)."""
    if r + f_rate <= 0:
        raise ModelError("unemployment value diverges when r + f_rate = 0")
    if not 0 <= f_rate <= 1:
        raise ModelError(f"f_rate must lie in [0, 1], got {f_rate}")
    return (z_benefit + f_rate * V_E) / (r + f_rate)


def wage_grid(low, high, n_points=801):
    """Evenly spaced wage grid; the endpoints are included."""
    if n_points < 3:
        raise ModelError("a wage grid needs at least 3 points")
    if not high > low:
        raise ModelError(f"wage grid needs high > low, got [{low}, {high}]")
    return np.linspace(low, high, n_points)


def nash_bargain(worker_surplus, firm_surplus, d, beta_power, grid, refine=False):
    """Grid wage maximising the Nash product over the feasible set.

    Surplus callables may accept a numpy array; scalar-only callables are evaluated
    point by point. With refine=True the grid argmax is polished by a bounded scalar
    search inside its neighbouring cells.
    """
    if not 0 < beta_power < 1:
        raise ModelError(f"beta_power must lie in (0, 1), got {beta_power}")
    grid = _validate_grid(grid)

    worker_gain = _evaluate(worker_surplus, grid) - d.z_e
    firm_gain = _evaluate(firm_surplus, grid) - d.z_f
    feasible = (worker_gain >= 0) & (firm_gain >= 0)
    if not feasible.any():
        return Disagreement()

    products = np.full(grid.shape, -np.inf)
    products[feasible] = nash_product(worker_gain[feasible], firm_gain[feasible], beta_power)
    # argmax returns the first maximiser, the lowest wage on an increasing grid.
    best = int(np.argmax(products))
    wage = float(grid[best])

    if refine:
        wage = _refine(worker_surplus, firm_surplus, d, beta_power, grid, best, products[best])

    return Agreement(
        wage=wage,
        worker_value=float(_evaluate(worker_surplus, np.array([wage]))[0]),
        firm_value=float(_evaluate(firm_surplus, np.array([wage]))[0]),
    )


def nash_product(worker_gain, firm_gain, beta_power):
    return worker_gain**beta_power * firm_gain ** (1 - beta_power)


def search_surpluses(x, V_U, params):
    """Default surpluses grounded in the search values.

    Worker: V_E(w) - V_U. Firm: (x - w)/(r + b) plus the refill cost a separation
    would force it to pay again.
    """
    discount = params.r + params.b
    if discount <= 0:
        raise ModelError("search surpluses need r + b > 0")

    def worker_surplus(w):
        return np.asarray(w, dtype=float) / discount - V_U

    def firm_surplus(w):
        return (x - np.asarray(w, dtype=float)) / discount + params.hiring_cost

    return worker_surplus, firm_surplus


def staggered_update(w_bar_prev, w_target, lambda_reneg):
    """Aggregate sticky wage: only the renegotiating share moves to the target."""
    if not 0 <= lambda_reneg <= 1:
        raise ModelError(f"lambda_reneg must lie in [0, 1], got {lambda_reneg}")
    return lambda_reneg * w_target + (1 - lambda_reneg) * w_bar_prev


def should_renegotiate(w_old, w_target, headcount, menu_cost):
    """Whether the firm reopens a contract.

    Contracts are reopened at the firm's initiative, so only a cut qualifies, and
    only if it saves more on the wage bill than the menu cost.
    """
    if w_target >= w_old:
        return False
    if menu_cost <= 0:
        return True
    return (w_old - w_target) * headcount > menu_cost


def reversion_check(contract, paid, rho, k):
    """Punish a firm that pays below its promise with rho effort for k periods."""
    if not 0 < rho < 1:
        raise ModelError(f"rho must lie in (0, 1), got {rho}")
    if k < 1:
        raise ModelError(f"punishment length k must be >= 1, got {k}")

    if paid < contract.promised_wage:
        return replace(contract, effort_multiplier=rho, punish_remaining=k)

    remaining = max(contract.punish_remaining - 1, 0)
    multiplier = contract.effort_multiplier if remaining > 0 else 1.0
    return replace(contract, effort_multiplier=multiplier, punish_remaining=remaining)


def npv(payoffs, delta):
    payoffs = np.asarray(payoffs, dtype=float)
    return float(np.sum(delta ** np.arange(payoffs.size) * payoffs))


def npv_feasible(payoffs, delta, threshold):
    """Whether the discounted payoff stream reaches the threshold."""
    if not 0 < delta < 1:
        raise ModelError(f"delta must lie in (0, 1), got {delta}")
    return npv(payoffs, delta) >= threshold


# --- Helper functions ---

def _validate_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ModelError("wage grid must be one-dimensional with at least 3 points")
    if not np.all(np.isfinite(grid)):
        raise ModelError("wage grid must be finite")
    if not np.all(np.diff(grid) > 0):
        raise ModelError("wage grid must be strictly increasing")
    return grid


def _evaluate(func, grid):
    try:
        values = np.asarray(func(grid), dtype=float)
        if values.shape == grid.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([func(float(w)) for w in grid], dtype=float)


def _refine(worker_surplus, firm_surplus, d, beta_power, grid, best, best_product):
    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, grid.size - 1)]

    def negative_product(w):
        gain_e = float(_evaluate(worker_surplus, np.array([w]))[0]) - d.z_e
        gain_f = float(_evaluate(firm_surplus, np.array([w]))[0]) - d.z_f
        if gain_e < 0 or gain_f < 0:
            return np.inf
        return -nash_product(gain_e, gain_f, beta_power)

    result = minimize_scalar(negative_product, bounds=(low, high), method="bounded", options={"xatol": 1e-12})
    if result.success and -result.fun > best_product:
        return float(result.x)
    return float(grid[best])
