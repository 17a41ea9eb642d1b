import math

import pytest

from unscathed.exceptions import SimulationError, ValidationError
from unscathed.models import McEstimate, SimulationTally
from unscathed.montecarlo import (
    DOMAIN_SIMULATION,
    POINT_CAP,
    PoissonStepper,
    SeededStream,
    cn_from_tally,
    combine_independent,
    estimate_cn_sim,
    estimate_p_sim,
    estimate_regions_sim,
    mc_integrate_region,
    p_from_tally,
    regions_from_tally,
    run_simulation,
    run_stepper,
    simulate_shooters,
)
from unscathed.regions import region_by_name, region_catalog

P_REFERENCE = 0.2841855631295


def test_streams_are_reproducible():
    first = SeededStream.for_block(42, DOMAIN_SIMULATION, 7)
    second = SeededStream.for_block(42, DOMAIN_SIMULATION, 7)
    other = SeededStream.for_block(42, DOMAIN_SIMULATION, 8)
    draws = [first.uniform() for _ in range(5)]
    assert draws == [second.uniform() for _ in range(5)]
    assert draws != [other.uniform() for _ in range(5)]


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_stream_rejects_bad_seed(seed):
    with pytest.raises(ValidationError):
        SeededStream(seed, 0)


def test_exponential_draws_are_positive():
    stream = SeededStream(1, 0)
    assert all(stream.exponential() > 0.0 for _ in range(100))


def test_stepper_tracks_viable_shooters():
    stepper = PoissonStepper.from_points([1.0, -3.0], [0.0, 0.0])
    assert stepper.viable == [0, 1]
    stepper.add(0.5, 0.0)
    assert stepper.viable == [1]
    assert stepper.certified() == []
    assert stepper.max_gap() == pytest.approx(math.pi)


def test_stepper_gives_up_at_the_cap():
    with pytest.raises(SimulationError):
        run_stepper(PoissonStepper(), SeededStream(3, 0), early=False, cap=1)


def test_scalar_simulation_resolves_every_shooter():
    outcome = simulate_shooters(SeededStream(11, 0))
    assert outcome.cutoff_reason == "resolved-all"
    assert outcome.shooters == len(outcome.shooter_points)
    again = simulate_shooters(SeededStream(11, 0))
    assert again == outcome


def test_early_cutoff_reports_a_lower_bound():
    full = simulate_shooters(SeededStream(5, 1))
    early = run_stepper(PoissonStepper(), SeededStream(5, 1), early=True, cap=POINT_CAP)
    assert early.points_used <= full.points_used
    if early.cutoff_reason == "early-shot-known":
        assert 1 <= early.shooters <= full.shooters
    else:
        assert early.shooters == full.shooters


def test_simulation_does_not_depend_on_threads():
    serial = run_simulation(3000, 5, threads=1)
    threaded = run_simulation(3000, 5, threads=3)
    assert serial.histogram == threaded.histogram
    assert serial.unscathed == threaded.unscathed
    assert sum(serial.histogram) == 3000
    assert serial.unscathed == serial.histogram[0]


def test_simulation_rejects_empty_runs():
    with pytest.raises(ValidationError):
        run_simulation(0, 1)


def test_expected_number_of_shooters_is_one():
    c1 = cn_from_tally(run_simulation(20_000, 17))[1]
    assert abs(c1.mean - 1.0) < 5 * c1.stderr


def test_early_cutoff_estimate_of_p():
    p = estimate_p_sim(20_000, 23)
    assert abs(p.mean - P_REFERENCE) < 5 * p.stderr


def test_classification_uses_catalog_names():
    tally = run_simulation(2000, 9, classify=True)
    names = {spec.name for spec in region_catalog()}
    assert set(tally.region_counts) <= names
    assert sum(tally.histogram) == 2000


def test_estimators_on_a_synthetic_tally():
    tally = SimulationTally(samples=4, histogram=[1, 1, 2, 0, 0, 0], unscathed=1)
    tally.region_counts["(I,IV)"] = 6
    tally.region_squares["(I,IV)"] = 18
    cn = cn_from_tally(tally)
    assert cn[1].mean == pytest.approx(1.25)
    assert cn[2].mean == pytest.approx(0.5)
    assert cn[3].mean == 0.0
    p = p_from_tally(tally)
    assert p.mean == pytest.approx(0.25)
    assert p.stderr == pytest.approx(0.25)
    assert regions_from_tally(tally)["(I,IV)"].mean == pytest.approx(0.75)


def test_tallies_merge_by_addition():
    first = SimulationTally(samples=2, histogram=[1, 1, 0, 0, 0, 0], unscathed=1, region_counts={"(I,IV)": 1})
    second = SimulationTally(samples=3, histogram=[0, 2, 1, 0, 0, 0], region_counts={"(I,IV)": 2})
    first.merge(second)
    assert first.samples == 5
    assert first.histogram == [1, 3, 1, 0, 0, 0]
    assert first.region_counts == {"(I,IV)": 3}


def test_combine_independent_adds_in_quadrature():
    total = combine_independent(
        [McEstimate(mean=1.0, stderr=0.3, samples=10), McEstimate(mean=2.0, stderr=0.4, samples=10)]
    )
    assert total.mean == pytest.approx(3.0)
    assert total.stderr == pytest.approx(0.5)
    assert total.samples == 20


def test_combine_independent_needs_one_weight_each():
    with pytest.raises(ValidationError):
        combine_independent([McEstimate(mean=1.0, stderr=0.1, samples=1)], [1.0, 2.0])


def test_monte_carlo_integral_of_a_two_point_region():
    estimate = mc_integrate_region(region_by_name("I,IV"), 200_000, 2)
    assert estimate.stderr > 0.0
    assert abs(estimate.mean - 0.0288814929604) < 5 * estimate.stderr


def test_monte_carlo_integral_is_reproducible():
    spec = region_by_name("II,III")
    assert mc_integrate_region(spec, 10_000, 4) == mc_integrate_region(spec, 10_000, 4, threads=2)


def test_seeded_estimators_match_their_tallies():
    cn = estimate_cn_sim(500, 21)
    assert cn == cn_from_tally(run_simulation(500, 21))
    assert set(cn) == {1, 2, 3, 4, 5}
    regions = estimate_regions_sim(500, 21)
    assert regions == regions_from_tally(run_simulation(500, 21, classify=True))
    assert regions
    assert all(name in {spec.name for spec in region_catalog()} for name in regions)
