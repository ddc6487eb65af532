"""Competition on a unit circle: Salop equilibrium, coalitions, consumer diversion.

Consumers are spread uniformly (mass 1) around a circle of circumference 1 and only
compare the two firms on either side of them. A firm's market is the pair of arcs it
wins against its two neighbours, so shares always add up to 1.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .command_errors import ConvergenceError, ModelError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircleMarket:
    positions: tuple
    tau: float = 1.0
    c: float = 0.0
    T_switch: float = 0.0

    def __post_init__(self):
        positions = tuple(float(x) for x in self.positions)
        object.__setattr__(self, "positions", positions)
        if len(positions) < 2:
            raise ModelError("a circle market needs at least 2 firms")
        if any(not 0 <= x < 1 for x in positions):
            raise ModelError("firm positions must lie in [0, 1)")
        if len(set(positions)) != len(positions):
            raise ModelError("firm positions must be distinct")
        if self.tau <= 0:
            raise ModelError(f"transport cost tau must be > 0, got {self.tau}")
        if self.c < 0 or self.T_switch < 0:
            raise ModelError("production and switching costs must be >= 0")

    @classmethod
    def equally_spaced(cls, n_firms, tau=1.0, c=0.0, T_switch=0.0):
        return cls(tuple(i / n_firms for i in range(n_firms)), tau, c, T_switch)

    @property
    def n_firms(self):
        return len(self.positions)


@dataclass(frozen=True)
class Coalition:
    members: tuple

    def __post_init__(self):
        members = tuple(int(i) for i in self.members)
        object.__setattr__(self, "members", members)
        if len(set(members)) != len(members):
            raise ModelError("coalition members must be distinct")
        if len(members) < 2:
            raise ModelError("a coalition needs at least 2 members")


@dataclass(frozen=True)
class SalopEquilibrium:
    prices: np.ndarray
    shares: np.ndarray
    profits: np.ndarray
    iterations: int


@dataclass(frozen=True)
class CoalitionReport:
    coalition_profit: float
    standalone_profit_sum: float
    profitable: bool
    D: tuple
    pre_merger_D: tuple
    merged_position: float
    coalition_price: float
    member_prices: tuple
    shares: tuple
    coalition_share: float
    social_diagnostic: float


@dataclass(frozen=True)
class Diversion:
    diverted: bool
    target_count: int


def salop_equilibrium(market, n_grid=400, damping=0.5, tol=1e-7, max_iters=1000):
    """Damped synchronous best-response iteration to a price equilibrium.

    Each best response is found on a price grid and polished by a bounded scalar
    search around the grid optimum.
    """
    left, right, d_left, d_right = _neighbours(market.positions)
    n = market.n_firms
    prices = np.full(n, market.c + market.tau / n)

    for iteration in range(1, max_iters + 1):
        best = np.array(
            [
                _best_response(market, prices, i, left[i], right[i], d_left[i], d_right[i], n_grid)
                for i in range(n)
            ]
        )
        updated = prices + damping * (best - prices)
        change = np.max(np.abs(updated - prices))
        prices = updated
        logger.debug("Best-response iteration %d: max price change %.3g", iteration, change)
        if change < tol:
            shares = market_shares(market, prices)
            return SalopEquilibrium(prices, shares, (prices - market.c) * shares, iteration)

    raise ConvergenceError("Best-response iteration did not converge", last_iterate=prices, iterations=max_iters)


def market_shares(market, prices):
    left, right, d_left, d_right = _neighbours(market.positions)
    prices = np.asarray(prices, dtype=float)
    return np.array(
        [
            _demand(market, prices[i], prices[left[i]], prices[right[i]], d_left[i], d_right[i])
            for i in range(market.n_firms)
        ]
    )


def merged_position(market, coalition):
    """Midpoint of the arc spanned by the coalition, walking clockwise from its first member."""
    ring = _ring_run(market, coalition)
    start = market.positions[ring[0]]
    length = (market.positions[ring[-1]] - start) % 1.0
    return (start + length / 2) % 1.0


def coalition_evaluate(market, coalition, **solver_options):
    """Compare a coalition's joint post-merger profit with its members' standalone profits."""
    ring = _ring_run(market, coalition)

    before = salop_equilibrium(market, **solver_options)
    standalone = float(sum(before.profits[i] for i in ring))

    outside = [i for i in range(market.n_firms) if i not in set(ring)]
    midpoint = merged_position(market, coalition)
    merged_market = CircleMarket(
        tuple(market.positions[i] for i in outside) + (midpoint,), market.tau, market.c, market.T_switch
    )
    after = salop_equilibrium(merged_market, **solver_options)
    coalition_profit = float(after.profits[-1])
    coalition_share = float(after.shares[-1])

    first, last = market.positions[ring[0]], market.positions[ring[-1]]
    left_rival = market.positions[_ring_neighbour(market, ring[0], -1)]
    right_rival = market.positions[_ring_neighbour(market, ring[-1], +1)]
    pre_merger_D = ((first - left_rival) % 1.0, (right_rival - last) % 1.0)
    D = ((midpoint - left_rival) % 1.0, (right_rival - midpoint) % 1.0)

    return CoalitionReport(
        coalition_profit=coalition_profit,
        standalone_profit_sum=standalone,
        profitable=coalition_profit > standalone,
        D=D,
        pre_merger_D=pre_merger_D,
        merged_position=midpoint,
        coalition_price=float(after.prices[-1]),
        member_prices=tuple(float(before.prices[i]) for i in ring),
        shares=tuple(float(s) for s in after.shares),
        coalition_share=coalition_share,
        social_diagnostic=1.0 - coalition_share,
    )


def consumer_diversion(R_star, R_bar, T_switch, N, j, affiliated=True):
    """Does a consumer leave their operator for the merged entity?

    An affiliated consumer pays T_switch on top of the access cost to switch. Ties stay.
    """
    if min(R_star, R_bar, T_switch) < 0:
        raise ModelError("access and switching costs must be >= 0")
    if not 0 <= j < N:
        raise ModelError(f"absorbed firm count j must lie in [0, N), got j={j}, N={N}")

    cost = R_star + (T_switch if affiliated else 0.0)
    return Diversion(diverted=cost < R_bar, target_count=N - j)


def diversion_mass(market, coalition, n_consumers=1000):
    """Share of consumers that would move to the merged site, on an evenly spaced grid."""
    midpoint = merged_position(market, coalition)
    absorbed = len(coalition.members) - 1
    positions = np.asarray(market.positions)
    consumers = (np.arange(n_consumers) + 0.5) / n_consumers

    diverted = 0
    for x in consumers:
        R_bar = market.tau * np.min(_circle_distance(x, positions))
        R_star = market.tau * _circle_distance(x, midpoint)
        if consumer_diversion(R_star, R_bar, market.T_switch, market.n_firms, absorbed).diverted:
            diverted += 1
    return diverted / n_consumers


def free_entry_firm_count(tau, entry_cost):
    """Largest N at which symmetric Salop profit tau/N^2 still covers the entry cost."""
    if tau <= 0 or entry_cost <= 0:
        raise ModelError("free entry needs tau > 0 and entry_cost > 0")
    return int(math.floor(math.sqrt(tau / entry_cost)))


# --- Helper functions ---

def _circle_distance(x, y):
    gap = np.abs(np.asarray(x) - np.asarray(y)) % 1.0
    return np.minimum(gap, 1.0 - gap)


def _neighbours(positions):
    positions = np.asarray(positions)
    n = positions.size
    order = np.argsort(positions)
    left = np.empty(n, dtype=int)
    right = np.empty(n, dtype=int)
    for rank, i in enumerate(order):
        left[i] = order[(rank - 1) % n]
        right[i] = order[(rank + 1) % n]
    d_left = (positions - positions[left]) % 1.0
    d_right = (positions[right] - positions) % 1.0
    return left, right, d_left, d_right


def _demand(market, p, p_left, p_right, d_left, d_right):
    tau = market.tau
    to_right = np.clip((p_right - p + tau * d_right) / (2 * tau), 0.0, d_right)
    to_left = np.clip((p_left - p + tau * d_left) / (2 * tau), 0.0, d_left)
    return to_right + to_left


def _best_response(market, prices, i, left, right, d_left, d_right, n_grid):
    high = max(market.c, prices[left], prices[right]) + market.tau * max(d_left, d_right)
    grid = np.linspace(market.c, high, n_grid)
    profit = (grid - market.c) * _demand(market, grid, prices[left], prices[right], d_left, d_right)
    k = int(np.argmax(profit))

    def negative_profit(p):
        return -(p - market.c) * _demand(market, p, prices[left], prices[right], d_left, d_right)

    low, upper = grid[max(k - 1, 0)], grid[min(k + 1, n_grid - 1)]
    result = minimize_scalar(negative_profit, bounds=(low, upper), method="bounded", options={"xatol": 1e-12})
    if result.success and -result.fun >= profit[k]:
        return float(result.x)
    return float(grid[k])


def _ring_run(market, coalition):
    """Coalition members in clockwise order; rejects gaps and unknown indices."""
    n = market.n_firms
    if any(not 0 <= i < n for i in coalition.members):
        raise ModelError(f"coalition members must be firm indices in [0, {n})")
    if len(coalition.members) >= n:
        raise ModelError("a coalition must leave at least one outside firm")

    order = [int(i) for i in np.argsort(market.positions)]
    rank = {firm: r for r, firm in enumerate(order)}
    ranks = {rank[i] for i in coalition.members}
    starts = [r for r in ranks if (r - 1) % n not in ranks]
    if len(starts) != 1:
        raise ModelError("coalition members must form one contiguous arc")

    return [order[(starts[0] + k) % n] for k in range(len(ranks))]


def _ring_neighbour(market, firm, step):
    order = [int(i) for i in np.argsort(market.positions)]
    return order[(order.index(firm) + step) % market.n_firms]
