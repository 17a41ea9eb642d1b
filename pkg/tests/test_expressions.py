import math
from fractions import Fraction

import numpy as np
import pytest

from unscathed.expressions import INFINITY, ZERO, Bound, linear, maximum, minimum, monomial, pi_times


def test_linear_evaluates_pi_multiple_and_gaps():
    expr = linear(Fraction(3, 2), {"theta1": -1, "theta2": -1})
    assert expr.evaluate({"theta1": 1.0, "theta2": 0.5}) == pytest.approx(1.5 * math.pi - 1.5)
    assert expr.to_text() == "3π/2 - θ₁ - θ₂"


def test_pi_times_text():
    assert pi_times(1, 3).to_text() == "π/3"
    assert pi_times(0).to_text() == "0"


def test_monomial_in_ratio_constants():
    expr = monomial({"c2": 1, "c3": -1})
    assert expr.evaluate({"c2": 2.0, "c3": 4.0}) == pytest.approx(0.5)
    assert expr.to_text() == "c₂/c₃"


def test_extrema_broadcast_over_arrays():
    env = {"theta1": np.array([0.1, 1.0])}
    hi = minimum(pi_times(1, 2), linear(Fraction(1), {"theta1": -1}))
    lo = maximum(ZERO, linear(Fraction(0), {"theta1": 1}))
    assert hi.evaluate(env).tolist() == pytest.approx([math.pi / 2, math.pi - 1.0])
    assert lo.evaluate(env).tolist() == pytest.approx([0.1, 1.0])
    assert hi.to_text() == "min{π/2, π - θ₁}"


def test_bound_survives_json():
    bound = Bound(lower=monomial({"c1": 1}), upper=INFINITY)
    assert Bound.model_validate_json(bound.model_dump_json()) == bound
    assert bound.to_text() == "(c₁, ∞)"
