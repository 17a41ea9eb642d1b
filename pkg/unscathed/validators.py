"""Input validation utilities for unscathed."""

import math
from typing import List, Optional

from .exceptions import ValidationError
from .models import OutputFormat, Signature
from .regions import parse_signature, region_catalog

_FORMATS = ("json", "csv", "markdown")


def validate_signature(text: str) -> Signature:
    """Resolve a region given as ``I,IV``, ``(I,IV)`` or an alias such as ``I(1,0)``.

    Raises:
        ValidationError: if the text names no catalog region
    """
    if not text or not text.strip():
        raise ValidationError("Region signature cannot be empty")
    return parse_signature(text)


def validate_signatures(texts: Optional[List[str]]) -> List[Signature]:
    """All catalog signatures when ``texts`` is empty, else each one validated."""
    if not texts:
        return [spec.signature for spec in region_catalog()]
    return [validate_signature(text) for text in texts]


def validate_samples(samples: int, name: str = "samples") -> None:
    if samples < 1:
        raise ValidationError(f"{name} must be at least 1, got {samples}")


def validate_tolerance(tolerance: float, name: str = "tolerance") -> None:
    if not (math.isfinite(tolerance) and tolerance > 0.0):
        raise ValidationError(f"{name} must be a positive finite number, got {tolerance}")


def validate_threads(threads: int) -> None:
    if threads < 1:
        raise ValidationError(f"Thread count must be at least 1, got {threads}")


def validate_format(fmt: str) -> OutputFormat:
    lowered = fmt.strip().lower()
    if lowered not in _FORMATS:
        raise ValidationError(f"Unknown output format '{fmt}'. Choose one of: {', '.join(_FORMATS)}")
    return lowered  # type: ignore[return-value]
