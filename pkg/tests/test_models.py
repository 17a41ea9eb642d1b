import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from unscathed.models import (
    BoxSliceInterval,
    Configuration,
    PlanarPoint,
    RunConfig,
    ShootingDisk,
    VerificationReport,
)


def test_planar_point_polar_and_argument():
    p = PlanarPoint.polar(2.0, 3 * math.pi / 2)
    assert p.norm == pytest.approx(2.0)
    assert p.argument == pytest.approx(3 * math.pi / 2)
    assert PlanarPoint(x=1.0, y=-0.0).argument == 0.0


def test_configuration_rejects_the_origin_and_too_many_points():
    with pytest.raises(ValidationError):
        Configuration.from_xy([(1.0, 0.0), (0.0, 0.0)])
    with pytest.raises(ValidationError):
        Configuration.from_xy([(1.0, float(k)) for k in range(6)])


def test_rotated_labels():
    config = Configuration.from_xy([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)])
    assert config.rotated_labels(1).points[0] == PlanarPoint(x=0.0, y=1.0)


def test_shooting_disk_passes_through_the_origin():
    disk = ShootingDisk.of(PlanarPoint(x=3.0, y=4.0))
    assert disk.radius == pytest.approx(5.0)


def test_box_slice_shape_is_checked():
    with pytest.raises(ValidationError):
        BoxSliceInterval(a=(0.0, 0.0), b=(1.0,), c=1.0, k=1)
    with pytest.raises(ValidationError):
        BoxSliceInterval(a=(0.0, 0.0), b=(1.0, 1.0), c=1.0, k=2)


def test_failed_report_needs_a_witness():
    with pytest.raises(ValidationError):
        VerificationReport(check="x", passed=False)
    assert VerificationReport(check="x", passed=True).witnesses == []


def test_run_config_defaults_and_limits():
    config = RunConfig(command="simulate")
    assert config.results_path == Path("results.jsonl")
    assert config.c5_assignment == "printed"
    with pytest.raises(ValidationError):
        RunConfig(command="simulate", seed=2**64)
    with pytest.raises(ValidationError):
        RunConfig(command="regions", tolerances={"(I,IV)": 0.0})
    with pytest.raises(ValidationError):
        RunConfig(command="report", format="xml")
