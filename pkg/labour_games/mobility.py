"""Mobility point scores, vacancy bands, knowledge growth, and job protection."""

import enum
from dataclasses import dataclass, replace

import numpy as np

from .command_errors import ModelError
from .firm_side import HiringAction, HiringKind


SCORE_EPSILON = 1e-6


@dataclass(frozen=True)
class PointScore:
    s: float

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise ModelError(f"point score must lie strictly in (0, 1), got {self.s}")


@dataclass(frozen=True)
class VacancyBand:
    s_lo: float
    s_hi: float
    vacancy_id: int = 0
    wage: float = 0.0
    firm: int = 0

    def __post_init__(self):
        if not 0 < self.s_lo <= self.s_hi < 1:
            raise ModelError(f"vacancy band needs 0 < s_lo <= s_hi < 1, got [{self.s_lo}, {self.s_hi}]")
        if self.wage < 0:
            raise ModelError(f"offered wage must be >= 0, got {self.wage}")


@dataclass(frozen=True)
class MobilityPolicy:
    """Scoring weights, protection, knowledge channel, and the band layout firms post.

    protection_tenure None switches job protection off.
    """

    theta_a: float = 1.0
    theta_w: float = 0.0
    protection_tenure: int = None
    knowledge_gain: float = 0.0
    band_floor: float = 0.2
    band_ceiling: float = 0.95
    band_step: float = 0.0
    skilled_threshold: float = 0.7

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.theta_a < 0 or self.theta_w < 0:
            raise ModelError("score weights must be >= 0")
        if self.theta_a + self.theta_w <= 0:
            raise ModelError("at least one score weight must be positive")
        if self.protection_tenure is not None and self.protection_tenure < 0:
            raise ModelError(f"protection_tenure must be >= 0, got {self.protection_tenure}")
        if self.knowledge_gain < 0:
            raise ModelError(f"knowledge_gain must be >= 0, got {self.knowledge_gain}")
        if not 0 < self.band_floor <= self.band_ceiling < 1:
            raise ModelError("bands need 0 < band_floor <= band_ceiling < 1")
        if self.band_step < 0:
            raise ModelError(f"band_step must be >= 0, got {self.band_step}")
        if not 0 < self.skilled_threshold < 1:
            raise ModelError("skilled_threshold must lie in (0, 1)")

    def band_for(self, firm_index):
        """Score band a firm attaches to its vacancies; floors rise with firm index."""
        s_lo = min(self.band_floor + firm_index * self.band_step, self.band_ceiling)
        return s_lo, self.band_ceiling


class AdmissionKind(enum.Enum):
    MATCHED = "matched"
    STRUCTURALLY_UNEMPLOYED = "structurally_unemployed"


@dataclass(frozen=True)
class Admission:
    kind: AdmissionKind
    vacancy: VacancyBand = None

    @property
    def matched(self):
        return self.kind is AdmissionKind.MATCHED


STRUCTURALLY_UNEMPLOYED = Admission(AdmissionKind.STRUCTURALLY_UNEMPLOYED)


@dataclass(frozen=True)
class WagePressure:
    band_floors: tuple
    wages: tuple
    differences: tuple
    slope: float = None


def score_worker(productivity_a, offered_wage, policy, population_stats):
    """Weighted, normalised score clamped inside (0, 1).

    population_stats is a mapping with the population maxima "max_a" and "max_w".
    """
    max_a, max_w = population_stats["max_a"], population_stats["max_w"]
    if max_a <= 0 or max_w <= 0:
        raise ModelError("population maxima must be > 0")
    if productivity_a <= 0:
        raise ModelError(f"productivity must be > 0, got {productivity_a}")
    if offered_wage < 0:
        raise ModelError(f"offered wage must be >= 0, got {offered_wage}")

    weighted = policy.theta_a * productivity_a / max_a + policy.theta_w * offered_wage / max_w
    s = weighted / (policy.theta_a + policy.theta_w)
    return PointScore(float(np.clip(s, SCORE_EPSILON, 1 - SCORE_EPSILON)))


def admit(s_star, vacancies):
    """Match to the reachable band with the highest floor; ties go to the lowest vacancy id."""
    s = s_star.s if isinstance(s_star, PointScore) else float(s_star)
    reachable = [band for band in vacancies if band.s_lo <= s]
    if not reachable:
        return STRUCTURALLY_UNEMPLOYED
    best = min(reachable, key=lambda band: (-band.s_lo, band.vacancy_id))
    return Admission(AdmissionKind.MATCHED, best)


def admit_batch(workers, vacancies):
    """Admit workers in ascending id; each vacancy is filled at most once.

    workers is an iterable of (worker_id, score). Returns {worker_id: Admission}.
    """
    open_vacancies = list(vacancies)
    outcomes = {}
    for worker_id, score in sorted(workers, key=lambda item: item[0]):
        outcome = admit(score, open_vacancies)
        if outcome.matched:
            open_vacancies.remove(outcome.vacancy)
        outcomes[worker_id] = outcome
    return outcomes


def structural_unemployment(scores, vacancies):
    """Number of scores that reach no band at all."""
    if not vacancies:
        return 0
    lowest = min(band.s_lo for band in vacancies)
    return sum(1 for s in scores if (s.s if isinstance(s, PointScore) else s) < lowest)


def knowledge_update(A, skilled_inflow_share, policy):
    if A <= 0:
        raise ModelError(f"knowledge A must be > 0, got {A}")
    if not 0 <= skilled_inflow_share <= 1:
        raise ModelError(f"skilled inflow share must lie in [0, 1], got {skilled_inflow_share}")
    return A * (1 + policy.knowledge_gain * skilled_inflow_share)


def job_protection_filter(action, tenures, policy):
    """Cap job destruction at the number of workers below the protection tenure."""
    if action.kind is not HiringKind.DESTROY_JOBS or policy.protection_tenure is None:
        return action

    unprotected = sum(1 for tenure in tenures if tenure < policy.protection_tenure)
    count = min(action.count, unprotected)
    if count == 0:
        return HiringAction.hold(action.creation_value)
    return replace(action, count=count)


def wage_pressure_diagnostic(runs, window=10):
    """Steady-state nominal wage per run and how it moves with the band floor.

    runs is a sequence of (band_floor, series) pairs from runs that differ only in
    band_floor. The steady wage is the mean of w_bar over the last `window` periods.
    """
    runs = sorted(runs, key=lambda run: run[0])
    if len(runs) < 2:
        raise ModelError("wage pressure needs at least two runs")

    floors = tuple(float(floor) for floor, _ in runs)
    wages = tuple(float(np.mean(series.column("w_bar")[-window:])) for _, series in runs)
    differences = tuple(float(d) for d in np.diff(wages))

    slope = None
    if floors[-1] > floors[0]:
        slope = float(np.polyfit(floors, wages, 1)[0])
    return WagePressure(floors, wages, differences, slope)
