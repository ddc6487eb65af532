"""Period-by-period simulation of the labour market, plus steady-state tools.

Each period runs in a fixed order:
    1. knowledge shock, in effect for this period only
    2. production, marginal revenue and average products, reservation productivity
    3. separations, hiring decisions, job protection
    4. scoring and admission of unemployed workers into vacancies
    5. wage bargaining, firm-initiated wage cuts, effort punishment
    6. one stage of the pricing game, if configured
    7. knowledge growth from skilled inflow
    8. record the period

A scenario and a seed fully determine a run.
"""

import copy
import logging
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.stats import spearmanr

from . import bargaining, firm_side, mobility
from .command_errors import ConvergenceError, ModelError, StepError
from .mobility import MobilityPolicy
from .model_core import Aggregates, HouseholdState, Params, budget_satisfied, household_utility
from .repeated_pricing import AbreuStickCarrot, GrimTrigger, StageGame
from .spatial import CircleMarket, Coalition


logger = logging.getLogger(__name__)

STEADY_STATE_TRACKED = ("w_bar", "e_m", "Y")
PRICING_STRATEGIES = ("grim", "abreu")


@dataclass(frozen=True)
class EconomySpec:
    """Initial economy: households, identical firms, and starting wage."""

    households: int = 1000
    firms: int = 4
    capital: float = 1000.0
    A0: float = 1.0
    price_level: float = 1.0
    initial_wage: float = 1.6
    employed_share: float = 0.5
    wealth: float = 1.0
    fiscal_carryover: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.households < 1:
            raise ModelError("households must be >= 1")
        if self.firms < 1:
            raise ModelError("firms must be >= 1")
        if self.capital <= 0:
            raise ModelError("capital must be > 0")
        if self.A0 <= 0:
            raise ModelError("A0 must be > 0")
        if self.price_level <= 0:
            raise ModelError("price_level must be > 0")
        if self.initial_wage < 0:
            raise ModelError("initial_wage must be >= 0")
        if not 0 <= self.employed_share <= 1:
            raise ModelError("employed_share must lie in [0, 1]")
        if self.wealth < 0:
            raise ModelError("wealth must be >= 0")


@dataclass(frozen=True)
class PricingSpec:
    n_firms: int = 2
    a: float = 10.0
    b_d: float = 1.0
    c: float = 2.0
    sigma: float = 0.0
    strategy: str = "grim"
    p_stick: float = 1.0
    k_stick: int = 3
    delta: float = 0.9
    entry_fee: float = 0.0
    entrant_cost: float = 2.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.game()
        if self.strategy not in PRICING_STRATEGIES:
            raise ModelError(f"strategy must be one of {', '.join(PRICING_STRATEGIES)}")
        if self.strategy == "abreu" and self.p_stick > self.c:
            raise ModelError("p_stick must be <= c")
        if self.k_stick < 1:
            raise ModelError("k_stick must be >= 1")
        if not 0 < self.delta < 1:
            raise ModelError("delta must lie in (0, 1)")
        if self.entry_fee < 0 or self.entrant_cost < 0:
            raise ModelError("entry_fee and entrant_cost must be >= 0")

    def game(self):
        return StageGame(self.n_firms, self.a, self.b_d, self.c, self.sigma)

    def machines(self):
        game = self.game()
        p_m = game.monopoly_price
        if self.strategy == "abreu":
            machines = [AbreuStickCarrot(p_m, self.p_stick, self.k_stick) for _ in range(self.n_firms)]
        else:
            machines = [GrimTrigger(p_m, self.c) for _ in range(self.n_firms)]
        for machine in machines:
            machine.bind(game)
        return tuple(machines)


@dataclass(frozen=True)
class SpatialSpec:
    """Circle market for the spatial lab; empty positions mean equally spaced firms."""

    n_firms: int = 4
    tau: float = 1.0
    c: float = 0.0
    T_switch: float = 0.0
    positions: tuple = ()
    coalition: tuple = (0, 1)
    entry_cost: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        market = self.market()
        Coalition(self.coalition)
        if len(self.coalition) >= market.n_firms:
            raise ModelError("coalition must leave at least one outside firm")
        if self.entry_cost < 0:
            raise ModelError("entry_cost must be >= 0")

    def market(self):
        if self.positions:
            return CircleMarket(tuple(self.positions), self.tau, self.c, self.T_switch)
        return CircleMarket.equally_spaced(self.n_firms, self.tau, self.c, self.T_switch)


@dataclass(frozen=True)
class OutputSpec:
    steady_window: int = 10
    steady_tol: float = 1e-3
    wage_grid_points: int = 801

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.steady_window < 2:
            raise ModelError("steady_window must be >= 2")
        if self.steady_tol <= 0:
            raise ModelError("steady_tol must be > 0")
        if self.wage_grid_points < 3:
            raise ModelError("wage_grid_points must be >= 3")


@dataclass(frozen=True)
class Scenario:
    params: Params = field(default_factory=Params)
    economy: EconomySpec = field(default_factory=EconomySpec)
    mobility: MobilityPolicy = field(default_factory=MobilityPolicy)
    shocks: tuple = ()
    pricing: PricingSpec = None
    spatial: SpatialSpec = None
    output: OutputSpec = field(default_factory=OutputSpec)
    periods: int = 200
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "shocks", tuple(self.shocks))
        self.validate()

    def validate(self):
        if self.periods < 1:
            raise ModelError(f"periods must be >= 1, got {self.periods}")
        for shock in self.shocks:
            if shock.start + shock.duration > self.periods:
                raise ModelError(
                    f"shock window [{shock.start}, {shock.start + shock.duration}) "
                    f"must lie within [0, {self.periods})"
                )


@dataclass(frozen=True)
class SeriesRow:
    """One recorded period. Field order is the CSV column order."""

    t: int
    Y: float
    A: float
    K: float
    L: float
    w_bar: float
    p: float
    e_m: int
    e_u: int
    vacancies_total: int
    h_mean: float
    u_rate: float
    v_rate: float
    prices: tuple
    admissions: int
    structural_unemployed: int
    utility_mean: float
    budget_violations: int
    skilled_inflow: float
    f_rate: float


SERIES_COLUMNS = tuple(f.name for f in fields(SeriesRow))


@dataclass(frozen=True)
class TimeSeries:
    rows: tuple = ()

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name not in SERIES_COLUMNS:
            raise ModelError(f"unknown series column: {name}")
        if name == "prices":
            return [row.prices for row in self.rows]
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    def between(self, start, stop):
        return TimeSeries(tuple(row for row in self.rows if start <= row.t < stop))


@dataclass(frozen=True)
class SteadyState:
    period: int
    values: dict
    window: int
    tol: float


@dataclass(frozen=True)
class BalancedGrowth:
    w: float
    p: float
    K: float
    L: float
    Y: float
    real_wage: float
    mpl_residual: float
    capital_residual: float
    iterations: int


@dataclass(frozen=True)
class SimState:
    """Everything carried from one period to the next.

    Household arrays are indexed by household id; employer is -1 for the unemployed.
    A is the unshocked knowledge stock: shocks scale it for one period at a time
    and only knowledge growth changes it. f_history holds the job-finding rates of
    the last n_window periods.
    """

    A: float
    firms: tuple
    contracts: tuple
    employer: np.ndarray
    tenure: np.ndarray
    incumbent: np.ndarray
    productivity: np.ndarray
    f_history: tuple
    w_bar: float
    growth_carry: float = 0.0
    machines: tuple = ()
    row: SeriesRow = None


def initial_state(scenario):
    params, econ = scenario.params, scenario.economy
    H = econ.households
    productivity = (np.arange(H) + 1) / H

    n_employed = _round_half_up(econ.employed_share * H)
    employer = np.full(H, -1, dtype=int)
    for k, hh_id in enumerate(range(H - n_employed, H)):
        employer[hh_id] = k % econ.firms
    tenure = np.where(employer >= 0, 1, 0)

    firms = []
    for i in range(econ.firms):
        firm = firm_side.FirmState(
            K=econ.capital,
            e_m=int(np.sum(employer == i)),
            price=econ.price_level,
            wage_offer=econ.initial_wage,
            n_window=params.n_window,
        )
        # The window starts full of the initial period's average product.
        opening = firm_side.average_product(firm, econ.A0, params.alpha_exp)
        firms.append(replace(firm, mrpl_history=(opening,) * params.n_window))
    contracts = tuple(
        bargaining.WageContract(wage=econ.initial_wage, promised_wage=econ.initial_wage) for _ in range(econ.firms)
    )
    machines = scenario.pricing.machines() if scenario.pricing else ()

    return SimState(
        A=econ.A0,
        firms=tuple(firms),
        contracts=contracts,
        employer=employer,
        tenure=tenure,
        incumbent=employer >= 0,
        productivity=productivity,
        f_history=(params.f_rate0,) * params.n_window,
        w_bar=econ.initial_wage,
        machines=machines,
    )


def step(state, scenario, t):
    """Advance the economy by one period; errors carry the period index."""
    if not 0 <= t < scenario.periods:
        raise ModelError(f"period {t} lies outside [0, {scenario.periods})")
    try:
        return _advance(state, scenario, t)
    except StepError:
        raise
    except ModelError as exc:
        raise StepError(t, exc) from exc


def run(scenario):
    logger.info("Running %d periods (seed %d)", scenario.periods, scenario.seed)
    state = initial_state(scenario)
    rows = []
    for t in range(scenario.periods):
        state = step(state, scenario, t)
        rows.append(state.row)
    logger.info("Run finished: w_bar=%.6g, e_m=%d", rows[-1].w_bar, rows[-1].e_m)
    return TimeSeries(tuple(rows))


def detect_steady_state(series, window, tol):
    """Earliest period from which every window of the tracked columns stays within tol.

    The variation of a column over a window is (max - min) / |mean|.
    """
    if window < 2:
        raise ModelError(f"window must be >= 2, got {window}")
    if window > len(series):
        raise ModelError(f"window {window} exceeds the series length {len(series)}")

    columns = [series.column(name) for name in STEADY_STATE_TRACKED]
    n_windows = len(series) - window + 1
    calm = np.ones(n_windows, dtype=bool)
    for values in columns:
        for s in range(n_windows):
            segment = values[s : s + window]
            scale = max(abs(float(np.mean(segment))), 1e-12)
            if (segment.max() - segment.min()) / scale >= tol:
                calm[s] = False

    # Earliest start of an unbroken run of calm windows reaching the end.
    if not calm[-1]:
        return None
    start = n_windows - 1
    while start > 0 and calm[start - 1]:
        start -= 1

    last = series.rows[-1]
    values = {name: getattr(last, name) for name in STEADY_STATE_TRACKED + ("u_rate", "v_rate", "A")}
    return SteadyState(period=series.rows[start].t, values=values, window=window, tol=tol)


def steady_state_between(series, start, stop, window, tol):
    """Steady state of the periods start <= t < stop, or None if it is too short or never settles."""
    segment = series.between(start, stop)
    if len(segment) < window:
        return None
    return detect_steady_state(segment, window, tol)


def wage_gap_half_life(series, shock_start, reference=None):
    """Periods until the gap between w_bar and its reference has halved.

    The gap is measured from the last pre-shock period; the reference defaults to
    the final recorded w_bar. The crossing is linearly interpolated.
    """
    if shock_start < 1:
        raise ModelError("the half-life needs at least one pre-shock period")
    t = series.column("t")
    w = series.column("w_bar")
    if reference is None:
        reference = float(w[-1])

    origin = int(np.searchsorted(t, shock_start - 1))
    if origin >= len(t) or t[origin] != shock_start - 1:
        raise ModelError(f"period {shock_start - 1} is not in the series")

    gaps = np.abs(w - reference)
    half = gaps[origin] / 2
    if gaps[origin] == 0:
        return 0.0
    for j in range(origin + 1, len(t)):
        if gaps[j] <= half:
            previous = gaps[j - 1]
            fraction = (previous - half) / (previous - gaps[j]) if previous != gaps[j] else 1.0
            return float(t[j - 1] + fraction - t[origin])
    return None


def beveridge_points(series):
    if not len(series):
        raise ModelError("beveridge_points needs a non-empty series")
    return [(row.u_rate, row.v_rate) for row in series.rows]


def beveridge_rank_correlation(points):
    """Spearman rank correlation between unemployment and vacancy rates."""
    if len(points) < 3:
        raise ModelError("a rank correlation needs at least three points")
    u, v = zip(*points)
    statistic, _ = spearmanr(u, v)
    return float(statistic)


def balanced_growth_solve(params, A=1.0, households=1000, f_rate=None, grid_points=801, tol=None, max_iters=1000):
    """Steady state where the bargained real wage equals the marginal product of labour.

    Employment follows the flow balance u = b / (b + f). Capital satisfies its
    first-order condition at the user cost r*A, which fixes K/L = (alpha/r)^(1/(1-alpha)).
    Each iteration bargains a nominal wage against the current marginal revenue
    product and resets the price level so that w/p equals the marginal product.
    The map is a contraction with factor beta + (1 - beta) * f / (r + f); iteration
    stops once the implied distance to the fixed point is below tol.
    """
    if params.r <= 0:
        raise ModelError("balanced growth needs r > 0")
    if A <= 0:
        raise ModelError(f"knowledge A must be > 0, got {A}")
    f = params.f_rate0 if f_rate is None else f_rate
    if not 0 < f <= 1:
        raise ModelError(f"f_rate must lie in (0, 1], got {f}")
    tol = params.tol if tol is None else tol

    alpha = params.alpha_exp
    L = households * (1 - params.b / (params.b + f))
    k = (alpha / params.r) ** (1 / (1 - alpha))
    K = k * L
    mpl = (1 - alpha) * A * k**alpha
    Y = A * K**alpha * L ** (1 - alpha)
    beta = params.beta_power
    rho = beta + (1 - beta) * f / (params.r + f)

    w, p = mpl, 1.0
    for iteration in range(1, max_iters + 1):
        x = p * mpl
        V_U = bargaining.unemployment_value(
            params.benefit, f, bargaining.employment_value(w, params.r, params.b), params.r
        )
        worker_surplus, firm_surplus = bargaining.search_surpluses(x, V_U, params)
        grid = bargaining.wage_grid(0.0, x + (params.r + params.b) * params.hiring_cost, grid_points)
        outcome = bargaining.nash_bargain(
            worker_surplus, firm_surplus, bargaining.DisagreementPoint(), params.beta_power, grid, refine=True
        )
        if not outcome.agreed:
            raise ConvergenceError("No feasible wage at the balanced-growth iterate", last_iterate=(w, p))

        change = abs(outcome.wage - w)
        w = outcome.wage
        p = w / mpl
        logger.debug("Balanced growth iteration %d: w=%.9g, p=%.9g", iteration, w, p)
        if change * rho / (1 - rho) < tol:
            return BalancedGrowth(
                w=w,
                p=p,
                K=K,
                L=L,
                Y=Y,
                real_wage=w / p,
                mpl_residual=abs(mpl - w / p),
                capital_residual=abs(alpha * A * k ** (alpha - 1) - params.r * A),
                iterations=iteration,
            )

    raise ConvergenceError("Balanced-growth iteration did not converge", last_iterate=(w, p), iterations=max_iters)


# --- Helper functions ---

def _advance(state, scenario, t):
    params, econ, policy = scenario.params, scenario.economy, scenario.mobility
    employer = state.employer.copy()
    tenure = state.tenure.copy()
    incumbent = state.incumbent.copy()
    productivity = state.productivity
    n_firms = len(state.firms)

    # Population growth enters the unemployed pool.
    growth = employer.size * params.g + state.growth_carry
    newcomers = int(math.floor(growth))
    growth_carry = growth - newcomers
    if newcomers:
        new_ids = np.arange(employer.size, employer.size + newcomers)
        productivity = np.concatenate([productivity, (new_ids % econ.households + 1) / econ.households])
        employer = np.concatenate([employer, np.full(newcomers, -1, dtype=int)])
        tenure = np.concatenate([tenure, np.zeros(newcomers, dtype=int)])
        incumbent = np.concatenate([incumbent, np.zeros(newcomers, dtype=bool)])
    H = employer.size

    # (1) Knowledge shock, applied to this period only.
    e_start = int(np.sum(employer >= 0))
    agg = Aggregates(H=H, e_m=e_start, e_u=H - e_start, A=state.A, K=econ.capital * n_firms, w_bar=state.w_bar)
    for shock in scenario.shocks:
        agg = firm_side.apply_tech_shock(agg, shock, t)
    A = agg.A

    # (2) Production, marginal revenue products, and this period's average products.
    alpha = params.alpha_exp
    Y = 0.0
    L = 0.0
    x, average = [], []
    for i, firm in enumerate(state.firms):
        labour = firm.e_m * state.contracts[i].effort_multiplier
        Y += firm_side.output(firm.K, labour, A, alpha, params.output_mode)
        L += labour
        if firm.e_m >= 1:
            x.append(firm_side.mrpl(firm, A, alpha))
        else:
            x.append(firm.price * firm_side.output(firm.K, 1, A, alpha))
        average.append(firm_side.average_product(firm, A, alpha))

    # (3) Separations, hiring decisions, job protection.
    actions, vacancies = [], []
    for i, firm in enumerate(state.firms):
        staff = _staff(employer, i)
        leaving = _round_half_up(params.b * staff.size)
        by_seniority = sorted(staff, key=lambda hh: (-tenure[hh], hh))[:leaving]
        _release(employer, tenure, by_seniority)

        x_bar = firm_side.reservation_productivity(firm)
        action = firm_side.hiring_decision(x[i], x_bar, replace(firm, e_m=staff.size - leaving), params)
        remaining = _staff(employer, i)
        action = mobility.job_protection_filter(action, tenure[remaining], policy)
        if action.destroyed:
            newest_first = sorted(remaining, key=lambda hh: (tenure[hh], -hh))
            unprotected = [
                hh
                for hh in newest_first
                if policy.protection_tenure is None or tenure[hh] < policy.protection_tenure
            ]
            _release(employer, tenure, unprotected[: action.destroyed])
            replacements = 0
        else:
            replacements = leaving
        actions.append(action)
        vacancies.append(action.vacancies + replacements)

    # (4) Scoring and admission.
    bands = _vacancy_bands(vacancies, state.contracts, policy)
    floors = [policy.band_for(i)[0] for i in range(n_firms)]
    offered = float(np.mean([band.wage for band in bands])) if bands else state.w_bar
    stats = {
        "max_a": float(productivity.max()),
        "max_w": max([contract.wage for contract in state.contracts] + [offered, 1e-12]),
    }

    candidates, eligible, structural = [], 0, 0
    for hh in np.flatnonzero(employer < 0):
        if incumbent[hh]:
            score = mobility.PointScore(1 - mobility.SCORE_EPSILON)
        else:
            score = mobility.score_worker(productivity[hh], offered, policy, stats)
        if incumbent[hh] or score.s >= min(floors):
            eligible += 1
        else:
            structural += 1
        candidates.append((int(hh), score))

    outcomes = mobility.admit_batch(candidates, bands)
    scores = dict(candidates)
    admissions, skilled = 0, 0
    for hh, outcome in outcomes.items():
        if not outcome.matched:
            continue
        admissions += 1
        employer[hh] = outcome.vacancy.firm
        tenure[hh] = 0
        if not incumbent[hh]:
            if scores[hh].s >= policy.skilled_threshold:
                skilled += 1
            incumbent[hh] = True
    f_rate = min(admissions / eligible, 1.0) if eligible else 0.0

    # (5) Bargaining, staggered wages, effort punishment.
    f_recent = math.fsum(state.f_history) / len(state.f_history)
    V_U = bargaining.unemployment_value(
        params.benefit, f_recent, bargaining.employment_value(state.w_bar, params.r, params.b), params.r
    )
    firms, contracts, paid = [], [], []
    for i, firm in enumerate(state.firms):
        headcount = int(np.sum(employer == i))
        contract = state.contracts[i]
        worker_surplus, firm_surplus = bargaining.search_surpluses(x[i], V_U, params)
        grid = bargaining.wage_grid(
            0.0, x[i] + (params.r + params.b) * params.hiring_cost, scenario.output.wage_grid_points
        )
        outcome = bargaining.nash_bargain(
            worker_surplus, firm_surplus, bargaining.DisagreementPoint(), params.beta_power, grid
        )

        wage, agreed_at = contract.wage, contract.agreed_at
        if outcome.agreed and bargaining.should_renegotiate(wage, outcome.wage, headcount, params.menu_cost):
            wage = bargaining.staggered_update(wage, outcome.wage, params.lambda_reneg)
            agreed_at = t
        pay = min(wage, x[i]) if actions[i].destroyed else wage
        contract = replace(contract, wage=wage, promised_wage=wage, agreed_at=agreed_at)
        contracts.append(bargaining.reversion_check(contract, pay, params.rho, params.k_punish))
        paid.append(pay)
        firms.append(replace(firm, e_m=headcount, vacancies=vacancies[i], wage_offer=wage).remember(average[i]))

    employed = np.sum([firm.e_m for firm in firms])
    if employed:
        w_bar = float(np.average([c.wage for c in contracts], weights=[firm.e_m for firm in firms]))
    else:
        w_bar = float(np.mean([c.wage for c in contracts]))

    # (6) Pricing game.
    machines, prices = state.machines, ()
    if machines:
        machines = copy.deepcopy(machines)
        game = scenario.pricing.game()
        stage_prices = np.array([machine.price(t) for machine in machines])
        signal = stage_prices.min()
        if game.sigma > 0:
            signal += np.random.default_rng([scenario.seed, t]).normal(0.0, game.sigma)
        for machine in machines:
            machine.observe(stage_prices, signal)
        prices = tuple(float(p) for p in stage_prices)

    # (7) Knowledge growth.
    skilled_inflow = skilled / H
    A_next = mobility.knowledge_update(state.A, skilled_inflow, policy)

    tenure[employer >= 0] += 1

    # (8) Record.
    e_m = int(np.sum(employer >= 0))
    agg = replace(agg.with_counts(H, e_m), L=L, w_bar=w_bar, p=econ.price_level)
    utility_mean, violations = _household_diagnostics(
        firms, contracts, paid, H - e_m, V_U, A, scenario
    )
    total_vacancies = int(sum(vacancies))
    row = SeriesRow(
        t=t,
        Y=Y,
        A=A,
        K=agg.K,
        L=L,
        w_bar=w_bar,
        p=agg.p,
        e_m=agg.e_m,
        e_u=agg.e_u,
        vacancies_total=total_vacancies,
        h_mean=float(np.mean([action.h for action in actions])),
        u_rate=agg.e_u / H,
        v_rate=total_vacancies / H,
        prices=prices,
        admissions=admissions,
        structural_unemployed=structural,
        utility_mean=utility_mean,
        budget_violations=violations,
        skilled_inflow=skilled_inflow,
        f_rate=f_rate,
    )
    logger.debug("Period %d: e_m=%d, w_bar=%.6g, vacancies=%d", t, e_m, w_bar, total_vacancies)

    return SimState(
        A=A_next,
        firms=tuple(firms),
        contracts=tuple(contracts),
        employer=employer,
        tenure=tenure,
        incumbent=incumbent,
        productivity=productivity,
        f_history=(state.f_history + (f_rate,))[-len(state.f_history):],
        w_bar=w_bar,
        growth_carry=growth_carry,
        machines=machines,
        row=row,
    )


def _staff(employer, firm_index):
    return np.flatnonzero(employer == firm_index)


def _release(employer, tenure, households):
    for hh in households:
        employer[hh] = -1
        tenure[hh] = 0


def _vacancy_bands(vacancies, contracts, policy):
    """Vacancy bands, numbered round-robin across firms so tied bands fill evenly."""
    bands = []
    for k in range(max(vacancies, default=0)):
        for i, count in enumerate(vacancies):
            if k < count:
                s_lo, s_hi = policy.band_for(i)
                bands.append(mobility.VacancyBand(s_lo, s_hi, len(bands), contracts[i].wage, i))
    return bands


def _household_diagnostics(firms, contracts, paid, unemployed, V_U, A, scenario):
    """Mean period utility and budget violations, evaluated per group of identical households."""
    params, econ = scenario.params, scenario.economy
    groups = []
    for firm, contract, pay in zip(firms, contracts, paid):
        if firm.e_m:
            hh = HouseholdState(
                wealth=econ.wealth,
                employed=True,
                wage=pay,
                effort=params.base_effort * contract.effort_multiplier,
                tenure=1,
            )
            npv = bargaining.employment_value(pay, params.r, params.b)
            groups.append((hh, 0.0, npv, firm.e_m))
    if unemployed:
        groups.append((HouseholdState(wealth=econ.wealth), 1.0, V_U, unemployed))

    total = sum(count for *_, count in groups)
    utility = sum(household_utility(hh, leisure, A, params) * count for hh, leisure, _, count in groups)
    violations = sum(
        count for hh, _, npv, count in groups if not budget_satisfied(hh, npv, econ.fiscal_carryover)
    )
    return utility / total, int(violations)


def _round_half_up(value):
    return int(math.floor(value + 0.5))
