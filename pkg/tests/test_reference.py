import pytest

from unscathed.reference import (
    MC_SIMULATION,
    NUMERICAL,
    TAO_WU,
    WINTHER,
    published,
    published_rows,
    region_values,
    relabel_five_point,
)


def test_published_values_parse():
    values = {v.quantity: v for v in published(NUMERICAL)}
    assert values["P"].value == pytest.approx(0.28418556313)
    assert values["P"].uncertainty == pytest.approx(9.6e-10)
    assert values["c2"].text == "0.3165850647281(20)"
    assert published(WINTHER)[0].quantity == "P"


def test_values_without_uncertainty():
    p = published(TAO_WU)[0]
    assert p.value == pytest.approx(0.284051)
    assert p.uncertainty is None


def test_five_point_labels_trade_places_under_the_printed_assignment():
    printed = region_values(NUMERICAL)
    raw = region_values(NUMERICAL, "table-consistent")
    assert printed["(I,I,I,I,I)"] == raw["(I,I,I,I,II)"]
    assert printed["(I,I,I,I,II)"] == raw["(I,I,I,I,I)"]
    assert printed["(I,IV)"] == raw["(I,IV)"]


def test_relabel_ignores_incomplete_tables():
    assert relabel_five_point({"(I,I,I,I,I)": 1.0}) == {"(I,I,I,I,I)": 1.0}


def test_published_rows_cover_the_literature():
    rows = published_rows()
    assert rows[WINTHER] == {"P": "0.28418(1)"}
    assert rows[TAO_WU]["I(0,0)"] == "0.258572168"
    assert "c3" in rows["Finch"]
    assert MC_SIMULATION not in rows
