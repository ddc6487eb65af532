"""Production, marginal revenue product of labour, and the endogenous hiring rule.

A firm compares its marginal revenue product x with its reservation productivity
x_bar, the mean of the average products it earned over the last few periods.
Above the dead band it posts vacancies, below it destroys jobs, and inside it holds.
"""

import enum
import math
from dataclasses import dataclass, replace

from .command_errors import ModelError


@dataclass(frozen=True)
class FirmState:
    K: float
    e_m: int
    vacancies: int = 0
    price: float = 1.0
    mrpl_history: tuple = ()
    wage_offer: float = 0.0
    n_window: int = 4

    def __post_init__(self):
        if self.K <= 0:
            raise ModelError(f"firm capital K must be > 0, got {self.K}")
        if self.e_m < 0 or self.vacancies < 0:
            raise ModelError("firm headcount and vacancies must be >= 0")
        if self.price <= 0:
            raise ModelError(f"firm price must be > 0, got {self.price}")
        if self.wage_offer < 0:
            raise ModelError(f"wage_offer must be >= 0, got {self.wage_offer}")
        if len(self.mrpl_history) > self.n_window:
            raise ModelError(f"mrpl_history holds at most {self.n_window} entries")

    def remember(self, value):
        """Return a copy with `value` appended to the history window."""
        history = (tuple(self.mrpl_history) + (float(value),))[-self.n_window:]
        return replace(self, mrpl_history=history)


class HiringKind(enum.Enum):
    POST_VACANCIES = "post"
    HOLD = "hold"
    DESTROY_JOBS = "destroy"


@dataclass(frozen=True)
class HiringAction:
    """A firm's labour-demand decision for one period.

    `creation_value` is the discounted job-creation value h * x^alpha / (1 + r)
    recorded alongside the decision.
    """

    kind: HiringKind
    count: int = 0
    h: float = 0.0
    creation_value: float = 0.0

    def __post_init__(self):
        if not -1 < self.h < 1:
            raise ModelError(f"hiring rate must lie in (-1, 1), got {self.h}")
        if self.kind is HiringKind.HOLD:
            if self.h != 0 or self.count != 0:
                raise ModelError("Hold carries h = 0 and no count")
        elif self.count <= 0:
            raise ModelError(f"{self.kind.name} needs a positive count")
        elif self.kind is HiringKind.POST_VACANCIES and self.h <= 0:
            raise ModelError("PostVacancies needs h > 0")
        elif self.kind is HiringKind.DESTROY_JOBS and self.h >= 0:
            raise ModelError("DestroyJobs needs h < 0")

    @classmethod
    def hold(cls, creation_value=0.0):
        return cls(HiringKind.HOLD, 0, 0.0, creation_value)

    @property
    def vacancies(self):
        return self.count if self.kind is HiringKind.POST_VACANCIES else 0

    @property
    def destroyed(self):
        return self.count if self.kind is HiringKind.DESTROY_JOBS else 0


@dataclass(frozen=True)
class TechShock:
    magnitude: float
    duration: int = 1
    start: int = 0

    def __post_init__(self):
        if self.magnitude <= -1:
            raise ModelError(f"shock magnitude must be > -1, got {self.magnitude}")
        if not -1 < self.magnitude < 1 or self.magnitude == 0:
            raise ModelError(f"shock magnitude must be a nonzero fraction in (-1, 1), got {self.magnitude}")
        if self.duration < 1:
            raise ModelError(f"shock duration must be >= 1, got {self.duration}")
        if self.start < 0:
            raise ModelError(f"shock start must be >= 0, got {self.start}")

    def active(self, t):
        return self.start <= t < self.start + self.duration


def output(K, L, A, alpha_exp, mode="cobb_douglas"):
    """Aggregate output.

    The default is Y = A * K^alpha * L^(1-alpha). The "additive" mode evaluates
    the additive form Y = K^alpha + L^(1-alpha) + A, kept for comparison runs.
    """
    if K <= 0:
        raise ModelError(f"capital K must be > 0, got {K}")
    if A <= 0:
        raise ModelError(f"knowledge A must be > 0, got {A}")
    if L < 0:
        raise ModelError(f"labour L must be >= 0, got {L}")
    if not 0 < alpha_exp < 1:
        raise ModelError(f"alpha_exp must lie in (0, 1), got {alpha_exp}")

    if mode == "cobb_douglas":
        return A * K**alpha_exp * L ** (1 - alpha_exp)
    if mode == "additive":
        return K**alpha_exp + L ** (1 - alpha_exp) + A
    raise ModelError(f"unknown output mode: {mode}")


def mrpl(firm, A, alpha_exp):
    """Discrete marginal revenue product of the firm's last worker."""
    if firm.e_m < 1:
        raise ModelError("mrpl needs at least one employed worker")

    marginal = output(firm.K, firm.e_m, A, alpha_exp) - output(firm.K, firm.e_m - 1, A, alpha_exp)
    return firm.price * marginal


def average_product(firm, A, alpha_exp):
    """Labour's share of revenue per worker, (1 - alpha) * p * Y / e_m.

    This is the per-period value kept in the reservation-productivity window.
    Under the default technology it equals the marginal revenue product of the
    headcount taken as a continuum, so a firm at rest holds. A firm with no staff
    is valued as if it employed one worker.
    """
    headcount = max(firm.e_m, 1)
    return firm.price * (1 - alpha_exp) * output(firm.K, headcount, A, alpha_exp) / headcount


def reservation_productivity(firm):
    """Mean of the firm's stored productivity window."""
    if not firm.mrpl_history:
        raise ModelError("reservation productivity is undefined for an empty history")
    return math.fsum(firm.mrpl_history) / len(firm.mrpl_history)


def hiring_decision(x, x_bar, firm, params):
    """Choose between posting vacancies, holding, and destroying jobs."""
    if x_bar <= 0:
        raise ModelError(f"reservation productivity must be > 0, got {x_bar}")

    gap = (x - x_bar) / x_bar
    band = params.h_hold_band

    if x > x_bar * (1 + band):
        h = min(gap, 1 - params.tol)
        value = h * max(x, 0.0) ** params.alpha_exp / (1 + params.r)
        if value <= 0:
            return HiringAction.hold(value)
        count = max(1, _round_half_up(h * firm.e_m))
        return HiringAction(HiringKind.POST_VACANCIES, count, h, value)

    if x < x_bar * (1 - band):
        h = max(gap, -1 + params.tol)
        value = h * max(x, 0.0) ** params.alpha_exp / (1 + params.r)
        if firm.e_m == 0:
            return HiringAction.hold(value)
        count = min(firm.e_m, max(1, _round_half_up(-h * firm.e_m)))
        return HiringAction(HiringKind.DESTROY_JOBS, count, h, value)

    return HiringAction.hold()


def apply_tech_shock(agg, shock, t):
    """Knowledge in effect at t: scaled while the shock window is open.

    The result is for period t only; callers keep the unshocked stock.
    """
    if not shock.active(t):
        return agg
    return replace(agg, A=agg.A * (1 + shock.magnitude))


# --- Helper functions ---

def _round_half_up(value):
    return int(math.floor(value + 0.5))
