import math

import numpy as np
import pytest

from unscathed.exceptions import InfeasibleIntervalError, ValidationError
from unscathed.models import BoxSliceInterval
from unscathed.reference import NUMERICAL, region_values
from unscathed.regions import (
    assert_nondegenerate,
    catalog_class,
    catalog_document,
    cn_coefficients,
    compose_cn,
    compose_p,
    composite_alias,
    decompose_region,
    dihedral_orbit,
    parse_signature,
    quadrant_of,
    reduced_integrand,
    region_by_name,
    region_catalog,
    region_contains_array,
    slice_implications,
    slice_interval,
    tao_wu_alias,
    w_variant_for,
)


def test_catalog_has_twelve_regions_in_order():
    names = [spec.name for spec in region_catalog()]
    assert len(names) == 12
    assert names[0] == "(I,IV)"
    assert names[-1] == "(I,I,I,I,II)"


def test_multiplicities_per_order():
    totals = {}
    for spec in region_catalog():
        totals[spec.n] = totals.get(spec.n, 0) + spec.multiplicity
    assert totals == {2: 4, 3: 13, 4: 14, 5: 6}


def test_multiplicity_is_orbit_size():
    for spec in region_catalog():
        if spec.n < 5:
            assert spec.multiplicity == len(dihedral_orbit(spec.signature))


def test_dihedral_orbit_sizes():
    assert len(dihedral_orbit(("I", "II", "III"))) == 6
    assert dihedral_orbit(("I", "I", "I", "I", "I")) == (("I", "I", "I", "I", "I"),)
    assert set(dihedral_orbit(("I", "IV"))) == {("I", "IV"), ("IV", "I")}


def test_catalog_class():
    assert catalog_class(("III", "II", "I")) == ("I", "II", "III")
    assert catalog_class(("II", "I", "I", "I")) == ("I", "I", "I", "II")
    assert catalog_class(("IV", "IV")) is None


def test_composition_reproduces_published_constants():
    values = region_values(NUMERICAL)
    c2, c3, c4, c5 = compose_cn(values)
    assert c2 == pytest.approx(0.3165850647281332, abs=1e-13)
    assert c3 == pytest.approx(0.03305636476066, abs=1e-13)
    assert c4 == pytest.approx(6.570669572e-4, abs=1e-12)
    assert c5 == pytest.approx(2.0380085e-7, rel=1e-9)
    assert compose_p(c2, c3, c4, c5) == pytest.approx(0.2841855631295, abs=1e-12)


def test_table_consistent_assignment_gives_the_same_c5():
    printed = compose_cn(region_values(NUMERICAL))[3]
    consistent = compose_cn(region_values(NUMERICAL, "table-consistent"), "table-consistent")[3]
    assert consistent == pytest.approx(printed, rel=1e-12)
    assert cn_coefficients("table-consistent")[5] == {"(I,I,I,I,I)": 5, "(I,I,I,I,II)": 1}
    assert cn_coefficients()[5] == {"(I,I,I,I,I)": 1, "(I,I,I,I,II)": 5}


def test_compose_cn_needs_every_region():
    with pytest.raises(ValidationError):
        compose_cn({"(I,IV)": 0.1})


def test_composite_aliases():
    values = region_values(NUMERICAL)
    assert composite_alias(values, "I(0,0)") == pytest.approx(0.2588220788073332, abs=1e-14)
    assert composite_alias(values, "I(1,0,0)") == pytest.approx(0.0057500359472, abs=1e-13)
    with pytest.raises(ValidationError):
        composite_alias(values, "I(2)")


@pytest.mark.parametrize(
    "signature, alias",
    [
        (("I", "IV"), "I(1,0)"),
        (("II", "III"), "½I(0,0)"),
        (("I", "II", "II"), "part of I(1,0,0)"),
        (("I", "II", "III"), "part of I(1,0,0)"),
        (("I", "I", "I", "I", "II"), "I(1,1,1,1,0)"),
    ],
)
def test_tao_wu_alias(signature, alias):
    assert tao_wu_alias(signature) == alias
    assert region_by_name(",".join(signature)).alias == alias


def test_tao_wu_alias_rejects_non_catalog_signatures():
    with pytest.raises(ValidationError):
        tao_wu_alias(("IV", "IV"))


def test_reduced_integrand_at_a_tangent_pair():
    # two unit disks touching at the origin: W = 2π
    spec = region_by_name("II,III")
    assert reduced_integrand(spec, [math.pi], [1.0]) == pytest.approx(1.0 / (8.0 * math.pi), rel=1e-12)


def test_slice_interval():
    s = BoxSliceInterval(a=(0.0, 0.0), b=(1.0, 1.0), c=1.5, k=1)
    assert slice_interval(s) == pytest.approx((0.5, 1.0))
    implications = slice_implications(s)
    assert implications["lower_is_l"] and implications["upper_is_b"]
    assert not implications["lower_is_a"]


def test_slice_interval_with_fixed_prefix():
    s = BoxSliceInterval(a=(0.0, 0.0, 0.0), b=(1.0, 1.0, 1.0), c=2.0, k=2, y=(0.8,))
    assert slice_interval(s) == pytest.approx((0.2, 1.0))


def test_empty_slice_raises():
    with pytest.raises(InfeasibleIntervalError):
        slice_interval(BoxSliceInterval(a=(0.0, 0.0), b=(1.0, 1.0), c=3.0, k=1))


def test_parse_signature_forms():
    assert parse_signature("i-iv") == ("I", "IV")
    assert parse_signature("(II,II,II)") == ("II", "II", "II")
    assert parse_signature("I(1,0)") == ("I", "IV")
    with pytest.raises(ValidationError):
        parse_signature("V,V")
    with pytest.raises(ValidationError):
        parse_signature("III,III")


def test_two_point_bounds_render():
    spec = region_by_name("I,IV")
    assert spec.theta_bounds[0].to_text() == "(π/3, π/2)"
    assert spec.t_bounds[0].to_text() == "(c₁, 1/c₁)"
    assert spec.w_variant == "two"
    assert spec.prefactor == pytest.approx(math.pi / 2)


def test_w_variants():
    assert w_variant_for(("I", "I", "III")) == "reflex"
    assert w_variant_for(("I", "II", "II")) == "interior"


@pytest.mark.parametrize(
    "theta, quadrant",
    [(0.3, "I"), (math.pi / 2, "I"), (2.0, "II"), (4.0, "III"), (5.0, "IV")],
)
def test_quadrant_of(theta, quadrant):
    assert quadrant_of(theta) == quadrant


def test_region_membership():
    spec = region_by_name("I,IV")
    inside = region_contains_array(spec, np.array([[1.3], [1.3], [1.0]]), np.array([[1.0], [3.0], [1.0]]))
    assert inside.tolist() == [True, False, False]


@pytest.mark.parametrize("name", ["I,IV", "II,III", "II,II,II", "I,II,III", "I,I,I,I,I"])
def test_bounds_are_nondegenerate(name):
    report = assert_nondegenerate(region_by_name(name), 500, seed=3)
    assert report.passed, report.witnesses


def test_decomposition_piece_counts():
    assert len(decompose_region(region_by_name("I,IV"))) == 2
    assert len(decompose_region(region_by_name("I,I,I,II"))) == 8
    assert len(decompose_region(region_by_name("I,II,I,II"))) == 16
    assert len(decompose_region(region_by_name("I,I,I,I,I"))) == 1


def test_catalog_document_renders_every_bound():
    document = catalog_document()
    assert len(document) == 12
    five = document[-2]
    assert five["name"] == "(I,I,I,I,I)"
    assert set(five["rendered"]) == {f"theta{k}" for k in range(1, 5)} | {f"t{k}" for k in range(1, 5)}
