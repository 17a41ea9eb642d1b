import math

import numpy as np
import pytest

from unscathed.geometry import closer_to_origin_array, union_area_oracle, union_area_w_array
from unscathed.models import PlanarPoint, ShootingDisk
from unscathed.reference import NUMERICAL, region_uncertainties, region_values
from unscathed.regions import region_by_name, region_contains_array
from unscathed.verify import (
    c1_check,
    c2_cartesian_check,
    c2_cartesian_report,
    cartesian_c2_integrand,
    certificate_check,
    consistency_audit,
    direction_two_sets,
    figure1_probe,
    jacobian_check,
    nondegeneracy_check,
    partition_check,
    partition_report,
    planted_catalog_check,
    planted_tao_wu_catalog,
    proposal_sniping_sets,
    rotations,
    sample_region,
    slice_implications_check,
    verify_region_bidirectional,
    verify_w_oracle,
)


@pytest.fixture(scope="module")
def sets():
    return direction_two_sets(400, 0)


@pytest.mark.parametrize("name", ["I,IV", "II,II,II", "I,I,III"])
def test_region_samples_stay_inside(name):
    spec = region_by_name(name)
    thetas, ts = sample_region(spec, 200, np.random.default_rng(1))
    assert thetas.shape[0] > 0
    assert region_contains_array(spec, thetas, ts).all()


def test_proposal_sets_snipe_the_origin():
    points = proposal_sniping_sets(4, 50, np.random.default_rng(2))
    assert points.shape == (50, 4, 2)
    assert closer_to_origin_array(points).all()


def test_rotations_label_every_start():
    points = proposal_sniping_sets(3, 10, np.random.default_rng(3))
    thetas, ts, names = rotations(points)
    assert thetas.shape == (30, 2)
    assert ts.shape == (30, 2)
    assert all(name.count(",") == 2 for name in names)


def test_w_oracle_check_passes():
    report = verify_w_oracle(samples_per_region=20, seed=1)
    assert report.passed, report.witnesses
    assert report.details["worst_relative_error"] < 1e-9


def test_w_oracle_check_catches_a_wrong_area():
    def skewed(thetas, ts, variant=None):
        return 1.01 * union_area_w_array(thetas, ts, variant)

    report = verify_w_oracle(samples_per_region=5, seed=1, area_fn=skewed)
    assert not report.passed
    assert report.witnesses[0]["region"] == "(I,IV)"


def test_jacobian_check_passes():
    report = jacobian_check(120, seed=0)
    assert report.passed, report.witnesses
    assert report.samples > 0


def test_slice_check_passes():
    report = slice_implications_check(300, seed=0)
    assert report.passed, report.witnesses
    assert sum(report.details["implications_seen"].values()) > 0


def test_nondegeneracy_check_passes_and_reports_contrast():
    report = nondegeneracy_check(300, seed=0)
    assert report.passed, report.witnesses
    assert set(report.details["min_lengths"]) == {
        "(I,IV)", "(II,III)", "(I,I,III)", "(I,II,II)", "(I,II,III)", "(II,II,II)",
        "(I,I,I,II)", "(I,I,II,II)", "(I,II,I,II)", "(I,II,II,II)", "(I,I,I,I,I)", "(I,I,I,I,II)",
    }
    assert report.details["contrast"]["collapses_when_sum_at_least_7pi_6"]


def test_catalog_matches_the_predicate(sets):
    report = verify_region_bidirectional(400, seed=0, sets=sets)
    assert report.passed, report.witnesses
    assert report.details["direction1_samples"] > 0
    assert report.details["direction2_labellings"] > 0


def test_planted_five_point_bounds_are_caught(sets):
    report = verify_region_bidirectional(400, seed=0, catalog=planted_tao_wu_catalog(), sets=sets)
    assert not report.passed
    assert any(w.get("region") == "(I,I,I,I,I)" or w.get("signature") == "(I,I,I,I,I)" for w in report.witnesses)


def test_planted_catalog_check_needs_both_directions(sets):
    report = planted_catalog_check(400, seed=0, sets=sets)
    assert report.passed, report.witnesses
    assert report.details["direction1_failures"] > 0
    assert report.details["direction2_failures"] > 0
    assert report.details["counterexamples"]


def test_partition_check_passes(sets):
    report = partition_check(sets=sets)
    assert report.passed, report.witnesses
    assert report.details["classes"]["(I,IV)"]["multiplicity"] == 2


def test_partition_flags_signatures_outside_the_catalog():
    report = partition_report({"(IV,IV)": 3, "(I,IV)": 1})
    assert not report.passed
    assert report.witnesses[0]["signature"] == "(IV,IV)"


def test_partition_requires_full_orbits_when_well_sampled():
    report = partition_report({"(I,II,III)": 150})
    assert not report.passed
    assert report.witnesses[0]["class"] == "(I,II,III)"


def test_figure_configurations():
    report = figure1_probe()
    assert report.passed
    assert report.details["left"]["failing_pairs"] == [(1, 5)]
    assert not report.details["left"]["in_region_x"]
    assert "shoots_origin" in report.details["right"]


def test_figure_configuration_description():
    left = figure1_probe().details["left"]
    assert left["signature"] == "(I,I,I,I,I)"
    assert not left["pairwise_sniping"]
    assert len(left["chord_angles"]) == 4
    for (alpha, beta), theta in zip(left["chord_angles"], left["thetas"]):
        assert alpha + beta + theta == pytest.approx(math.pi)


def test_cartesian_integrand():
    assert float(cartesian_c2_integrand(1.2, 0.1)) == 0.0
    assert float(cartesian_c2_integrand(0.8, 1.0)) == 0.0
    oracle = union_area_oracle(
        [ShootingDisk.of(PlanarPoint(x=1.0, y=0.0)), ShootingDisk.of(PlanarPoint(x=-1.0, y=1.0))]
    )
    assert float(cartesian_c2_integrand(-1.0, 1.0)) == pytest.approx(oracle**-2, rel=1e-12)


def test_cartesian_c2_at_moderate_tolerance():
    estimate = c2_cartesian_check(tolerance=1e-5)
    report = c2_cartesian_report(estimate, agreement=1e-4)
    assert report.passed, report.witnesses


@pytest.mark.slow
def test_cartesian_c2_agrees_with_the_region_sum():
    estimate = c2_cartesian_check(tolerance=1e-6)
    assert estimate.converged
    assert estimate.value == pytest.approx(0.3165850647281, abs=1e-5)


def test_expected_shooter_count():
    report = c1_check(20_000, seed=3)
    assert report.passed, report.details
    assert report.details["analytic"] == pytest.approx(1.0)


def test_termination_certificate():
    report = certificate_check(50, seed=0, extra=50)
    assert report.passed, report.witnesses


def test_audit_of_the_published_tables():
    report = consistency_audit()
    assert report.passed, report.witnesses
    assert report.details["published_composition"]["P"]["agrees"]
    assert report.details["published_composition"]["I(0,0)"]["agrees"]
    assert report.details["published_composition"]["I(1,0,0)"]["composed"] == pytest.approx(0.0057500359472, abs=1e-13)
    tao_wu = report.details["tao_wu_c3"]
    assert tao_wu["inconsistent"]
    assert tao_wu["recomputed"] == pytest.approx(0.031580166, abs=1e-12)
    assert tao_wu["downstream_P"] == pytest.approx(0.285410, abs=5e-7)


def test_audit_accepts_values_equal_to_the_published_ones():
    values = region_values(NUMERICAL)
    report = consistency_audit(values, uncertainties=region_uncertainties(NUMERICAL))
    assert report.passed, report.witnesses
    assert report.details["composition"]["P"] == pytest.approx(0.2841855631295, abs=1e-12)


def test_audit_flags_a_wrong_composition():
    report = consistency_audit(region_values(NUMERICAL), cn={"c2": 0.5})
    assert not report.passed


def test_rotation_counts_support_the_printed_c5(sets):
    counts = partition_check(sets=sets).details["rotation_counts"]
    report = consistency_audit(counts=counts)
    coefficients = report.details["c5_coefficients"]
    assert coefficients["implied"]["(I,I,I,I,II)"] == pytest.approx(5.0)
    assert coefficients["implied"]["(I,I,I,I,I)"] == pytest.approx(1.0)
    assert coefficients["supports"] == "printed"


def test_planted_catalog_only_touches_the_pure_five_point_region():
    planted = planted_tao_wu_catalog()
    assert planted[-2].name == "(I,I,I,I,I)"
    assert planted[-2].t_bounds[0].to_text() == "(c₂, 1/c₂)"
    assert planted[0] == region_by_name("I,IV")
    assert math.isclose(planted[-2].prefactor, region_by_name("I,I,I,I,I").prefactor)
