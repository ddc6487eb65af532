"""Tests for point scores, vacancy bands, knowledge growth, and job protection."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from labour_games import mobility as mb
from labour_games.command_errors import ModelError
from labour_games.firm_side import HiringAction, HiringKind


STATS = {"max_a": 1.0, "max_w": 2.0}


class FakeSeries:
    def __init__(self, w_bar):
        self.w_bar = np.asarray(w_bar, dtype=float)

    def column(self, name):
        assert name == "w_bar"
        return self.w_bar


def test_scores_are_clamped_inside_the_unit_interval():
    policy = mb.MobilityPolicy(theta_a=1.0, theta_w=1.0)
    assert mb.score_worker(1.0, 2.0, policy, STATS).s == pytest.approx(1 - mb.SCORE_EPSILON)


def test_score_weights():
    assert mb.score_worker(0.5, 2.0, mb.MobilityPolicy(), STATS).s == pytest.approx(0.5)
    assert mb.score_worker(0.5, 1.0, mb.MobilityPolicy(theta_a=1, theta_w=1), STATS).s == pytest.approx(0.5)


@given(
    a=st.floats(min_value=0.01, max_value=1.0),
    w=st.floats(min_value=0.0, max_value=1.0),
    raise_by=st.floats(min_value=0.0, max_value=1.0),
)
def test_score_non_decreasing_in_wage(a, w, raise_by):
    policy = mb.MobilityPolicy(theta_a=1.0, theta_w=0.5)
    assert mb.score_worker(a, w + raise_by, policy, STATS).s >= mb.score_worker(a, w, policy, STATS).s


def test_score_needs_positive_maxima():
    with pytest.raises(ModelError):
        mb.score_worker(0.5, 1.0, mb.MobilityPolicy(), {"max_a": 0.0, "max_w": 1.0})


def test_admit_prefers_highest_reachable_floor():
    bands = [mb.VacancyBand(0.2, 0.9, 0), mb.VacancyBand(0.5, 0.9, 1), mb.VacancyBand(0.8, 0.9, 2)]
    admission = mb.admit(mb.PointScore(0.6), bands)
    assert admission.matched
    assert admission.vacancy.vacancy_id == 1


def test_admit_ties_go_to_lowest_id():
    bands = [mb.VacancyBand(0.5, 0.9, 3), mb.VacancyBand(0.5, 0.9, 1)]
    assert mb.admit(mb.PointScore(0.6), bands).vacancy.vacancy_id == 1


def test_unreachable_bands_mean_structural_unemployment():
    admission = mb.admit(mb.PointScore(0.1), [mb.VacancyBand(0.5, 0.9, 0)])
    assert admission is mb.STRUCTURALLY_UNEMPLOYED
    assert not admission.matched


def test_batch_admission_fills_each_vacancy_once():
    workers = [(2, mb.PointScore(0.8)), (1, mb.PointScore(0.9))]
    outcomes = mb.admit_batch(workers, [mb.VacancyBand(0.5, 0.9, 0)])
    assert outcomes[1].matched
    assert not outcomes[2].matched


@given(
    scores=st.lists(st.floats(min_value=0.01, max_value=0.99), min_size=1, max_size=20),
    floors=st.lists(st.floats(min_value=0.05, max_value=0.9), min_size=1, max_size=10),
    lowered=st.floats(min_value=0.0, max_value=0.04),
)
def test_lower_floors_never_reduce_matches(scores, floors, lowered):
    workers = [(i, s) for i, s in enumerate(scores)]
    bands = [mb.VacancyBand(f, 0.95, k) for k, f in enumerate(floors)]
    easier = [mb.VacancyBand(f - lowered, 0.95, k) for k, f in enumerate(floors)]

    def matches(vacancies):
        return sum(outcome.matched for outcome in mb.admit_batch(workers, vacancies).values())

    assert matches(easier) >= matches(bands)


def test_structural_unemployment_count():
    bands = [mb.VacancyBand(0.4, 0.9, 0), mb.VacancyBand(0.6, 0.9, 1)]
    assert mb.structural_unemployment([0.1, 0.3, 0.5, 0.7], bands) == 2
    assert mb.structural_unemployment([0.1], []) == 0


def test_knowledge_update():
    policy = mb.MobilityPolicy(knowledge_gain=0.5)
    assert mb.knowledge_update(1.0, 0.2, policy) == pytest.approx(1.1)
    assert mb.knowledge_update(mb.knowledge_update(1.0, 0.2, policy), 0.2, policy) == pytest.approx(1.21)
    assert mb.knowledge_update(1.0, 0.2, mb.MobilityPolicy()) == 1.0


def test_protection_caps_destruction():
    policy = mb.MobilityPolicy(protection_tenure=5)
    destroy = HiringAction(HiringKind.DESTROY_JOBS, 5, -0.5)

    assert mb.job_protection_filter(destroy, [10] * 8, policy).kind is HiringKind.HOLD
    assert mb.job_protection_filter(destroy, [1, 2, 3, 10, 10], policy).count == 3
    assert mb.job_protection_filter(destroy, [1] * 8, mb.MobilityPolicy()) == destroy


def test_protection_leaves_hiring_alone():
    post = HiringAction(HiringKind.POST_VACANCIES, 2, 0.2)
    assert mb.job_protection_filter(post, [10] * 8, mb.MobilityPolicy(protection_tenure=5)) == post


def test_band_layout():
    policy = mb.MobilityPolicy(band_floor=0.2, band_step=0.3, band_ceiling=0.7)
    assert policy.band_for(0) == (0.2, 0.7)
    assert policy.band_for(1) == (pytest.approx(0.5), 0.7)
    assert policy.band_for(5) == (0.7, 0.7)


@pytest.mark.parametrize(
    "kwargs", [{"theta_a": 0.0, "theta_w": 0.0}, {"band_floor": 0.0}, {"band_floor": 0.9, "band_ceiling": 0.5}]
)
def test_invalid_policy(kwargs):
    with pytest.raises(ModelError):
        mb.MobilityPolicy(**kwargs)


def test_wage_pressure_diagnostic():
    runs = [(0.6, FakeSeries([1.0] * 5 + [1.5] * 10)), (0.2, FakeSeries([1.2] * 10))]
    pressure = mb.wage_pressure_diagnostic(runs, window=10)

    assert pressure.band_floors == (0.2, 0.6)
    assert pressure.wages == pytest.approx((1.2, 1.5))
    assert pressure.differences == pytest.approx((0.3,))
    assert pressure.slope == pytest.approx(0.75)


def test_identical_runs_show_no_pressure():
    runs = [(0.2, FakeSeries([1.2] * 10)), (0.4, FakeSeries([1.2] * 10))]
    assert mb.wage_pressure_diagnostic(runs).differences == (0.0,)


def test_wage_pressure_needs_two_runs():
    with pytest.raises(ModelError):
        mb.wage_pressure_diagnostic([(0.2, FakeSeries([1.0]))])
