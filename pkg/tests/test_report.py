import csv
import io
import json

import pytest

from unscathed.exceptions import ValidationError
from unscathed.models import ResultRecord
from unscathed.reference import NUMERICAL, published_rows, region_uncertainties, region_values
from unscathed.report import (
    Estimate,
    build_tables,
    compose_weighted,
    format_uncertainty,
    latest_records,
    parse_uncertainty,
    render,
    render_csv,
    render_json,
    render_markdown,
    rich_tables,
)


@pytest.mark.parametrize(
    "value, uncertainty, text",
    [
        (0.28418556313, 9.6e-10, "0.28418556313(96)"),
        (0.28418, 1e-5, "0.28418(1)"),
        (2.038e-7, 4.8e-10, "0.00000020380(48)"),
        (0.3165850647281, 2.0e-12, "0.3165850647281(20)"),
        (1.0, 0.0996, "1.00(10)"),
        (1234.5, 12.0, "1234(12)"),
    ],
)
def test_format_uncertainty(value, uncertainty, text):
    assert format_uncertainty(value, uncertainty) == text


def test_single_digit_only_for_one_exact_unit():
    assert format_uncertainty(0.28418, 1e-5) == "0.28418(1)"
    assert format_uncertainty(0.28418, 1.2e-5) == "0.284180(12)"
    assert format_uncertainty(0.28418, 9e-5) == "0.284180(90)"


def test_zero_uncertainty_prints_full_precision():
    assert format_uncertainty(0.1, 0.0) == "0.1"


@pytest.mark.parametrize("uncertainty", [-1e-3, float("nan"), float("inf")])
def test_format_uncertainty_rejects_bad_uncertainty(uncertainty):
    with pytest.raises(ValidationError):
        format_uncertainty(0.5, uncertainty)


def test_parse_uncertainty():
    assert parse_uncertainty("0.28418(1)") == pytest.approx((0.28418, 1e-5))
    assert parse_uncertainty("0.0000002038025(94)") == pytest.approx((2.038025e-7, 9.4e-12))
    assert parse_uncertainty("0.284051") == (0.284051, None)
    with pytest.raises(ValidationError):
        parse_uncertainty("about 0.28")


def _cubature_records():
    values = region_values(NUMERICAL)
    uncertainties = region_uncertainties(NUMERICAL)
    return [
        ResultRecord(
            quantity=name,
            method="cubature",
            value=value,
            uncertainty=uncertainties[name],
            uncertainty_kind="error-bound",
        )
        for name, value in values.items()
    ]


def test_tables_compose_p_from_region_values():
    tables = build_tables(_cubature_records())
    numerical = "numerical integration"
    assert tables.p[numerical].value == pytest.approx(0.2841855631295, abs=1e-12)
    assert tables.p[numerical].derived
    assert tables.cn[numerical]["c5"].value == pytest.approx(2.0380085e-7, rel=1e-9)
    assert tables.regions[numerical]["I(0,0)"].value == pytest.approx(0.2588220788073332, abs=1e-14)
    assert tables.p[numerical].formatted().startswith("0.28418556313(")


def test_error_bounds_add_linearly_and_standard_errors_in_quadrature():
    bounds = {
        "a": Estimate(value=1.0, uncertainty=0.1, kind="error-bound"),
        "b": Estimate(value=2.0, uncertainty=0.2, kind="error-bound"),
    }
    sigmas = {"a": Estimate(value=1.0, uncertainty=0.3), "b": Estimate(value=2.0, uncertainty=0.4)}
    assert compose_weighted(bounds, {"a": 1, "b": -1}).uncertainty == pytest.approx(0.3)
    assert compose_weighted(sigmas, {"a": 1, "b": -1}).uncertainty == pytest.approx(0.5)
    assert compose_weighted(sigmas, {"c": 1}) is None


def test_latest_record_wins():
    first = ResultRecord(quantity="P", method="mc-simulation", value=0.1, uncertainty=0.01, uncertainty_kind="1σ")
    second = first.model_copy(update={"value": 0.2})
    assert latest_records([first, second])[("mc-simulation", "P")].value == 0.2


def test_inconsistent_estimates_are_flagged():
    records = _cubature_records() + [
        ResultRecord(quantity="P", method="mc-simulation", value=0.2841, uncertainty=1e-5, uncertainty_kind="1σ")
    ]
    tables = build_tables(records)
    flagged = tables.flagged()
    assert any(d.quantity == "P" for d in flagged)
    assert tables.largest_discrepancy.sigmas > 3.0
    assert "Inconsistencies beyond 3σ" in render_markdown(tables)


def test_markdown_lists_published_and_computed_rows():
    tables = build_tables(_cubature_records(), published=published_rows())
    text = render_markdown(tables)
    assert "### Various estimates of P" in text
    assert "| Winther | 0.28418(1) |" in text
    assert "| numerical integration | 0.28418556313(" in text


def test_csv_has_one_row_per_value():
    tables = build_tables(_cubature_records())
    rows = list(csv.reader(io.StringIO(render_csv(tables))))
    assert rows[0] == ["table", "source", "quantity", "value"]
    assert ["P", "numerical integration", "P", tables.p["numerical integration"].formatted()] in rows


def test_json_carries_the_largest_discrepancy():
    document = json.loads(render_json(build_tables(_cubature_records())))
    assert document["c5_assignment"] == "printed"
    assert "largest_discrepancy" in document
    assert render(build_tables([]), "json").startswith("{")


def test_rich_tables_one_per_table():
    assert [t.title for t in rich_tables(build_tables([]))] == [
        "Various estimates of P",
        "Various estimates of c_n",
        "Various estimates of region integrals",
    ]


def test_rich_region_columns_show_aliases():
    regions = rich_tables(build_tables([]))[2]
    headers = [column.header for column in regions.columns]
    assert "(I,IV)\nI(1,0)" in headers
    assert "(II,III)\n½I(0,0)" in headers
    assert "I(0,0)" in headers
