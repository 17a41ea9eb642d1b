import math

import pytest

from unscathed.exceptions import EXIT_USAGE, ValidationError
from unscathed.validators import (
    validate_format,
    validate_samples,
    validate_signature,
    validate_signatures,
    validate_threads,
    validate_tolerance,
)


@pytest.mark.parametrize("text", ["I,IV", "(I,IV)", "i-iv", "I(1,0)"])
def test_signature_spellings(text):
    assert validate_signature(text) == ("I", "IV")


def test_composite_alias_resolves():
    assert validate_signature("½I(0,0)") == ("II", "III")


@pytest.mark.parametrize("text", ["", "   ", "I,V", "IV,IV"])
def test_bad_signatures(text):
    with pytest.raises(ValidationError) as excinfo:
        validate_signature(text)
    assert excinfo.value.exit_code == EXIT_USAGE


def test_no_signatures_means_the_whole_catalog():
    assert len(validate_signatures(None)) == 12
    assert validate_signatures(["II,II,II"]) == [("II", "II", "II")]


def test_numeric_validators():
    validate_samples(1)
    validate_threads(4)
    validate_tolerance(1e-12)
    with pytest.raises(ValidationError):
        validate_samples(0)
    with pytest.raises(ValidationError):
        validate_threads(0)
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValidationError):
            validate_tolerance(bad)


def test_format_is_case_insensitive():
    assert validate_format("CSV") == "csv"
    assert validate_format(" markdown ") == "markdown"
    with pytest.raises(ValidationError):
        validate_format("xml")
