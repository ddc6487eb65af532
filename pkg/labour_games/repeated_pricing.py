"""Repeated Bertrand pricing: strategy machines, critical discount factors, limit pricing.

Strategies are explicit state machines. Each period a machine emits a price from its
current phase, then observes the outcome and may change phase. Machines are single-owner
mutable objects; play_repeated() resets them before a run.
"""

import enum
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .bargaining import npv
from .command_errors import ModelError


logger = logging.getLogger(__name__)

PRICE_GRID_POINTS = 400


@dataclass(frozen=True)
class StageGame:
    """Homogeneous-goods Bertrand stage game with linear demand D(p) = max(a - b_d*p, 0)."""

    n_firms: int = 2
    a: float = 10.0
    b_d: float = 1.0
    c: float = 2.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.n_firms < 1:
            raise ModelError(f"n_firms must be >= 1, got {self.n_firms}")
        if self.a <= 0 or self.b_d <= 0:
            raise ModelError("demand intercept and slope must be > 0")
        if self.c < 0:
            raise ModelError(f"unit cost must be >= 0, got {self.c}")
        if self.a <= self.b_d * self.c:
            raise ModelError("demand must be positive at marginal cost (a > b_d * c)")
        if self.sigma < 0:
            raise ModelError(f"monitoring noise must be >= 0, got {self.sigma}")

    def demand(self, p):
        return max(self.a - self.b_d * p, 0.0)

    @property
    def monopoly_price(self):
        return (self.a / self.b_d + self.c) / 2

    @property
    def monopoly_profit(self):
        p = self.monopoly_price
        return (p - self.c) * self.demand(p)

    def price_grid(self, n_points=PRICE_GRID_POINTS):
        return np.linspace(self.c, self.monopoly_price, n_points)


@dataclass(frozen=True)
class Entrant:
    c_e: float = 2.0
    E: float = 0.0
    in_market: bool = False

    def __post_init__(self):
        if self.c_e < 0:
            raise ModelError(f"entrant cost must be >= 0, got {self.c_e}")
        if self.E < 0:
            raise ModelError(f"entry fee must be >= 0, got {self.E}")


class PhaseKind(enum.Enum):
    COOPERATE = "cooperate"
    PUNISH = "punish"


@dataclass(frozen=True)
class Phase:
    """Current phase; `remaining` is None for a punishment that never ends."""

    kind: PhaseKind = PhaseKind.COOPERATE
    remaining: int = None


COOPERATE = Phase()


class StrategyMachine:
    """Base class for repeated-game strategies."""

    def __init__(self):
        self.phase = COOPERATE

    def reset(self):
        self.phase = COOPERATE

    def bind(self, game):
        """Resolve defaults that depend on the stage game."""

    def price(self, t):
        raise NotImplementedError

    def observe(self, prices, signal):
        """Update the phase after period prices and the public signal are known."""


class GrimTrigger(StrategyMachine):
    """Collude until the public signal falls below the trigger, then punish forever."""

    def __init__(self, p_collude, p_punish, trigger_threshold=None):
        super().__init__()
        if p_punish > p_collude:
            raise ModelError("grim trigger needs p_punish <= p_collude")
        self.p_collude = p_collude
        self.p_punish = p_punish
        self.trigger_threshold = trigger_threshold

    def bind(self, game):
        if self.trigger_threshold is None:
            self.trigger_threshold = self.p_collude - 3 * game.sigma

    def price(self, t):
        return self.p_collude if self.phase.kind is PhaseKind.COOPERATE else self.p_punish

    def observe(self, prices, signal):
        if self.phase.kind is PhaseKind.COOPERATE and signal < self.trigger_threshold:
            self.phase = Phase(PhaseKind.PUNISH, None)


class AbreuStickCarrot(StrategyMachine):
    """Punish any undercut with k_stick periods at p_stick, then return to collusion.

    Monitoring is perfect. The stick only counts down in periods where every firm
    priced at or below p_stick; a firm refusing the stick restarts it.
    """

    def __init__(self, p_collude, p_stick, k_stick):
        super().__init__()
        if k_stick < 1:
            raise ModelError(f"k_stick must be >= 1, got {k_stick}")
        if p_stick > p_collude:
            raise ModelError("the stick price must not exceed the collusive price")
        self.p_collude = p_collude
        self.p_stick = p_stick
        self.k_stick = k_stick

    def price(self, t):
        return self.p_collude if self.phase.kind is PhaseKind.COOPERATE else self.p_stick

    def observe(self, prices, signal):
        prices = np.asarray(prices, dtype=float)
        if self.phase.kind is PhaseKind.COOPERATE:
            if np.any(prices < self.p_collude):
                self.phase = Phase(PhaseKind.PUNISH, self.k_stick)
            return

        if np.all(prices <= self.p_stick + 1e-12):
            remaining = self.phase.remaining - 1
            self.phase = COOPERATE if remaining == 0 else Phase(PhaseKind.PUNISH, remaining)
        else:
            self.phase = Phase(PhaseKind.PUNISH, self.k_stick)


class LimitSchedule(StrategyMachine):
    """Three-period incumbent schedule: P1, then the limit price P2, then P3 onward."""

    def __init__(self, P1, P2, P3):
        super().__init__()
        self.P1, self.P2, self.P3 = P1, P2, P3

    def price(self, t):
        return (self.P1, self.P2)[t] if t < 2 else self.P3


class ConstantPrice(StrategyMachine):
    def __init__(self, p):
        super().__init__()
        self.p = p

    def price(self, t):
        return self.p


class DeviateOnce(StrategyMachine):
    """Follow another machine, except for one period in which a deviation price is played.

    The wrapped machine observes everything, including the deviation, so after the
    deviating period the firm follows whatever its strategy now prescribes.
    """

    def __init__(self, base, p_deviate, at=0):
        super().__init__()
        self.base = base
        self.p_deviate = p_deviate
        self.at = at

    def reset(self):
        self.base.reset()

    def bind(self, game):
        self.base.bind(game)

    @property
    def phase(self):
        return self.base.phase

    @phase.setter
    def phase(self, value):
        # Phase lives on the wrapped machine.
        pass

    def price(self, t):
        return self.p_deviate if t == self.at else self.base.price(t)

    def observe(self, prices, signal):
        self.base.observe(prices, signal)


@dataclass(frozen=True)
class RepeatedGameResult:
    prices: np.ndarray
    profits: np.ndarray
    signals: np.ndarray
    discounted: np.ndarray
    delta: float


@dataclass(frozen=True)
class GrimThreshold:
    delta_star: float
    simulated: float = None
    degenerate: bool = False


@dataclass(frozen=True)
class AbreuThreshold:
    delta_star: float
    too_weak: bool = False
    stick_credible: bool = True


@dataclass(frozen=True)
class LimitPricing:
    schedule: LimitSchedule
    profits: tuple
    entrant_value_at_p2: float
    grid_step: float
    undeterrable: bool = False


class Decision(enum.Enum):
    UNDERCUT = "undercut"
    COLLUDE = "collude"


def stage_profits(prices, game):
    """Bertrand allocation: the lowest price serves the market, ties split it evenly."""
    prices = np.asarray(prices, dtype=float)
    if prices.shape != (game.n_firms,):
        raise ModelError(f"expected {game.n_firms} prices, got {prices.size}")
    if np.any(prices < 0):
        raise ModelError("prices must be >= 0")

    p_min = prices.min()
    winners = prices == p_min
    share = winners / winners.sum()
    return share * game.demand(p_min) * (prices - game.c)


def play_repeated(game, strategies, T, delta, seed=0):
    """Play the stage game T times with the given machines."""
    if T < 1:
        raise ModelError(f"T must be >= 1, got {T}")
    if len(strategies) != game.n_firms:
        raise ModelError(f"expected {game.n_firms} strategies, got {len(strategies)}")
    if not 0 < delta < 1:
        raise ModelError(f"delta must lie in (0, 1), got {delta}")

    rng = np.random.default_rng(seed)
    for machine in strategies:
        machine.reset()
        machine.bind(game)

    prices = np.empty((T, game.n_firms))
    profits = np.empty((T, game.n_firms))
    signals = np.empty(T)
    for t in range(T):
        prices[t] = [machine.price(t) for machine in strategies]
        profits[t] = stage_profits(prices[t], game)
        noise = rng.normal(0.0, game.sigma) if game.sigma > 0 else 0.0
        signals[t] = prices[t].min() + noise
        for machine in strategies:
            machine.observe(prices[t], signals[t])

    discounts = delta ** np.arange(T)
    return RepeatedGameResult(prices, profits, signals, discounts @ profits, delta)


def critical_discount_grim(game, T=400):
    """Smallest discount factor sustaining collusion under Nash reversion: 1 - 1/n.

    The analytic threshold is cross-checked by bisection over simulated
    comply-vs-deviate payoff streams.
    """
    if game.n_firms < 2:
        return GrimThreshold(0.0, None, degenerate=True)

    analytic = 1 - 1 / game.n_firms
    p_m = game.monopoly_price

    def collusive(i):
        return GrimTrigger(p_m, game.c)

    simulated = simulated_critical_discount(game, collusive, T=T)
    if simulated is None or abs(simulated - analytic) > 1e-2:
        logger.warning("Simulated grim threshold %s disagrees with analytic %s", simulated, analytic)
    return GrimThreshold(analytic, simulated)


def abreu_critical(game, p_stick, k_stick, n_grid=10001):
    """Smallest discount factor at which no one-period undercut beats stick-and-carrot.

    Deviation grabs the monopoly profit once, then the deviant follows the strategy:
    k_stick periods at p_stick, then collusion again.
    """
    if p_stick > game.c:
        raise ModelError(f"p_stick must be <= c ({game.c}) to be a stick, got {p_stick}")
    if k_stick < 1:
        raise ModelError(f"k_stick must be >= 1, got {k_stick}")

    n = game.n_firms
    pi_m = game.monopoly_profit
    pi_stick = (p_stick - game.c) * game.demand(p_stick) / n

    def punishment_value(delta):
        collusive = pi_m / (n * (1 - delta))
        stick = pi_stick * (1 - delta**k_stick) / (1 - delta)
        return stick + delta**k_stick * collusive

    def incentive(delta):
        return pi_m / (n * (1 - delta)) - (pi_m + delta * punishment_value(delta))

    deltas = np.linspace(0.0, 1.0, n_grid)[:-1]
    values = np.array([incentive(d) for d in deltas])
    sustaining = np.flatnonzero(values >= 0)
    if sustaining.size == 0:
        return AbreuThreshold(1.0, too_weak=True, stick_credible=False)

    first = int(sustaining[0])
    if first == 0:
        delta_star = float(deltas[0])
    else:
        delta_star = _bisect(incentive, deltas[first - 1], deltas[first])
    return AbreuThreshold(delta_star, too_weak=False, stick_credible=punishment_value(delta_star) >= 0)


def simulated_critical_discount(game, collusive, T=400, n_grid=PRICE_GRID_POINTS, tol=1e-6):
    """Bisection over simulated streams for the smallest delta where complying beats undercutting.

    `collusive(i)` builds firm i's strategy. Firm 0 deviates once at t = 0 by one
    price-grid step below the monopoly price and follows its strategy afterwards.
    """
    game = replace(game, sigma=0.0)
    step = (game.monopoly_price - game.c) / (n_grid - 1)

    comply = play_repeated(game, [collusive(i) for i in range(game.n_firms)], T, 0.5)
    deviant = DeviateOnce(collusive(0), game.monopoly_price - step, at=0)
    deviate = play_repeated(game, [deviant] + [collusive(i) for i in range(1, game.n_firms)], T, 0.5)

    comply_stream = comply.profits[:, 0]
    deviate_stream = deviate.profits[:, 0]

    def advantage(delta):
        return npv(comply_stream, delta) - npv(deviate_stream, delta)

    low, high = tol, 1 - tol
    if advantage(high) < 0:
        return None
    if advantage(low) >= 0:
        return low
    return _bisect(advantage, low, high, tol=tol)


def entrant_profit(P_e, q_e, entrant):
    """Entrant's value from entering: q_e * (P_e - c_e) - E. Entry pays iff positive."""
    if q_e < 0:
        raise ModelError(f"entrant quantity must be >= 0, got {q_e}")
    return q_e * (P_e - entrant.c_e) - entrant.E


def three_period_schedule(game, entrant, n_grid=PRICE_GRID_POINTS):
    """Monopoly price, limit price that deters entry, then recovery to the monopoly price.

    The entrant answers an incumbent price with a one-grid-step undercut and serves the
    whole residual demand at that price.
    """
    if game.monopoly_price <= entrant.c_e:
        raise ModelError("no entry threat: the monopoly price does not exceed the entrant's cost")

    grid = game.price_grid(n_grid)
    step = float(grid[1] - grid[0])
    incumbent = np.array([(p - game.c) * game.demand(p) for p in grid])
    i1 = int(np.argmax(incumbent))
    P1 = float(grid[i1])

    def entrant_value(i):
        P_e = float(grid[i - 1]) if i > 0 else float(grid[0]) - step
        return entrant_profit(P_e, game.demand(P_e), entrant)

    deterring = [i for i in range(i1 + 1) if entrant_value(i) <= 0]
    if deterring:
        i2 = deterring[-1]
        P2, undeterrable = float(grid[i2]), False
    else:
        i2 = 0
        P2, undeterrable = game.c, True

    profits = tuple((p - game.c) * game.demand(p) for p in (P1, P2, P1))
    return LimitPricing(LimitSchedule(P1, P2, P1), profits, entrant_value(i2), step, undeterrable)


def undercut_vs_collude(gamma, c_collude):
    """Undercut only if it strictly beats colluding."""
    if not (math.isfinite(gamma) and math.isfinite(c_collude)):
        raise ModelError("undercut and collusion values must be finite")
    return Decision.UNDERCUT if gamma > c_collude else Decision.COLLUDE


# --- Helper functions ---

def _bisect(func, low, high, tol=1e-12, max_iter=200):
    """Smallest point in [low, high] where func >= 0, given func(low) < 0 <= func(high)."""
    for _ in range(max_iter):
        if high - low <= tol:
            break
        mid = (low + high) / 2
        if func(mid) >= 0:
            high = mid
        else:
            low = mid
    return float(high)
