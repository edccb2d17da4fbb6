"""Deterministic counter-based sampling and the rejection-rate simulators."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pointnull.calibration import type_i_error
from pointnull.model import AlternativeSpread, Observation, posterior_h0
from pointnull.montecarlo import (
    MonteCarloReport,
    SimulationPlan,
    _rejection_count,
    draw_standard_normal,
    simulate_power,
    simulate_type_i,
    splitmix64,
    uniform_unit,
)
from pointnull.numerics import DomainError
from pointnull.priors import KLSelfInformationPrior

SIGMA_STAR_005_KL = 2.1089733943720829818
KL = KLSelfInformationPrior()

# Published test vector for the splitmix64 stream seeded with 1234567.
SPLITMIX_1234567 = (
    6457827717110365317,
    3203168211198807973,
    9817491932198370423,
    4593380528125082431,
    16408922859458223821,
)

seeds = st.integers(0, 2**64 - 1)
indices = st.integers(0, 2**20)


def make_plan(**overrides):
    plan = dict(n=1000, seed=0, theta=0.0, sigma=SIGMA_STAR_005_KL, alpha_b=0.05, scheme=KL)
    plan.update(overrides)
    return SimulationPlan(**plan)


# ---------------------------------------------------------------------------
# generator


def test_splitmix_published_vector():
    got = tuple(splitmix64(1234567, i) for i in range(5))
    assert got == SPLITMIX_1234567


@given(seeds, indices)
def test_splitmix_is_a_pure_64_bit_function(seed, index):
    first = splitmix64(seed, index)
    assert splitmix64(seed, index) == first
    assert 0 <= first <= 2**64 - 1


def test_splitmix_streams_differ_across_seeds_and_indices():
    stream_a = [splitmix64(0, i) for i in range(100)]
    stream_b = [splitmix64(1, i) for i in range(100)]
    assert len(set(stream_a)) == 100
    assert set(stream_a).isdisjoint(stream_b)


@given(seeds, indices)
def test_uniform_unit_stays_strictly_inside(seed, index):
    u = uniform_unit(seed, index)
    assert 0.0 < u < 1.0
    assert uniform_unit(seed, index) == u


@given(seeds, indices)
def test_normal_draws_are_deterministic_and_finite(seed, index):
    z = draw_standard_normal(seed, index)
    assert math.isfinite(z)
    assert draw_standard_normal(seed, index) == z


def test_normal_draws_have_sane_moments():
    n = 1_000_000
    total = total_sq = extreme = 0
    for i in range(n):
        z = draw_standard_normal(0, i)
        total += z
        total_sq += z * z
        if abs(z) > 1.9599639845400545:
            extreme += 1
    mean = total / n
    var = total_sq / n - mean * mean
    assert abs(mean) <= 0.004
    assert abs(var - 1.0) <= 0.005
    assert abs(extreme / n - 0.05) <= 0.0007


# ---------------------------------------------------------------------------
# plans and reports


def test_plan_validation():
    with pytest.raises(DomainError):
        make_plan(n=0)
    with pytest.raises(DomainError):
        make_plan(n=2.0)
    with pytest.raises(DomainError):
        make_plan(seed=-1)
    with pytest.raises(DomainError):
        make_plan(seed=2**64)
    with pytest.raises(DomainError):
        make_plan(theta=math.inf)
    with pytest.raises(DomainError):
        make_plan(sigma=-1.0)
    with pytest.raises(DomainError):
        make_plan(alpha_b=1.0)


def test_type_i_requires_null_effect():
    with pytest.raises(DomainError):
        simulate_type_i(make_plan(theta=0.5))


def test_runs_are_reproducible():
    plan = make_plan(n=2000)
    assert simulate_type_i(plan) == simulate_type_i(plan)


def test_rejection_count_is_partitionable():
    plan = make_plan(n=2000)
    full = _rejection_count(plan, 0, plan.n)
    for split in (1, plan.n // 3, plan.n - 1):
        assert full == _rejection_count(plan, 0, split) + _rejection_count(plan, split, plan.n)


def test_counted_event_is_the_posterior_decision():
    plan = make_plan(n=500)
    spread = AlternativeSpread(plan.sigma)
    rho = plan.scheme.rho0(plan.sigma)
    expected = sum(
        posterior_h0(Observation(draw_standard_normal(plan.seed, i)), spread, rho) < plan.alpha_b
        for i in range(plan.n)
    )
    assert _rejection_count(plan, 0, plan.n) == expected


def test_type_i_estimate_brackets_the_analytic_rate():
    report = simulate_type_i(make_plan(n=20000))
    assert report.analytic_value == type_i_error(SIGMA_STAR_005_KL, 0.05, KL)
    assert report.within_3se
    assert report.rejections == round(report.estimate * report.n)


def test_past_positivity_bound_every_draw_rejects():
    report = simulate_type_i(make_plan(n=500, sigma=3.0))
    assert report.rejections == 500
    assert report.estimate == 1.0
    assert report.std_error == 0.0
    assert report.ci95 == (1.0, 1.0)
    assert report.within_3se  # analytic rate is also exactly 1


def test_power_saturates_for_huge_effects():
    report = simulate_power(make_plan(n=200, theta=40.0))
    assert report.rejections == 200
    assert report.analytic_value == pytest.approx(1.0, abs=1e-12)


def test_power_at_null_equals_type_i_run():
    plan = make_plan(n=3000)
    assert simulate_power(plan) == simulate_type_i(plan)


def test_power_tracks_analytic_at_moderate_effect():
    report = simulate_power(make_plan(n=20000, theta=2.0))
    assert report.within_3se


def test_single_draw_report_is_well_formed():
    report = simulate_type_i(make_plan(n=1))
    assert isinstance(report, MonteCarloReport)
    assert report.n == 1
    assert report.estimate in (0.0, 1.0)
    assert 0.0 <= report.ci95[0] <= report.ci95[1] <= 1.0


def test_standard_error_formula():
    report = simulate_type_i(make_plan(n=20000))
    p = report.estimate
    assert report.std_error == math.sqrt(p * (1.0 - p) / report.n)
    assert report.ci95[0] == max(0.0, p - 1.96 * report.std_error)
    assert report.ci95[1] == min(1.0, p + 1.96 * report.std_error)


def test_three_se_coverage_across_seeds():
    """The 3-standard-error check should cover near-certainly (99.7%) per run."""
    hits = sum(
        simulate_type_i(make_plan(n=10000, seed=seed)).within_3se for seed in range(100)
    )
    assert hits >= 95
