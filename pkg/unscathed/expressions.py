"""Symbolic bound expressions for the region catalog.

Bounds are small trees: rational multiples of π plus signed angle gaps,
monomials in the magnitude ratios t_i and the constants c_i = 2cos θ_i,
infinity, and max/min over those. Each node evaluates against a mapping
of variable names to scalars or numpy arrays and renders to text.
"""

import math
from fractions import Fraction
from typing import Annotated, Dict, List, Literal, Mapping, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

Env = Mapping[str, Union[float, np.ndarray]]

_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _var_text(name: str) -> str:
    """``theta2`` -> ``θ₂``, ``c3`` -> ``c₃``."""
    if name.startswith("theta"):
        return "θ" + name[5:].translate(_SUBSCRIPT)
    return name[0] + name[1:].translate(_SUBSCRIPT)


def _pi_text(value: Fraction) -> str:
    if value == 0:
        return "0"
    num, den = abs(value.numerator), value.denominator
    text = "π" if num == 1 else f"{num}π"
    if den != 1:
        text += f"/{den}"
    return text if value > 0 else "-" + text


class _Node(BaseModel):
    model_config = ConfigDict(frozen=True)


class Const(_Node):
    """A finite constant, used for 0."""

    kind: Literal["const"] = "const"
    value: float = Field(allow_inf_nan=False)

    def evaluate(self, env: Env) -> Union[float, np.ndarray]:
        return self.value

    def to_text(self) -> str:
        return repr(self.value) if self.value != int(self.value) else str(int(self.value))


class Infinity(_Node):
    kind: Literal["infinity"] = "infinity"

    def evaluate(self, env: Env) -> Union[float, np.ndarray]:
        return math.inf

    def to_text(self) -> str:
        return "∞"


class Linear(_Node):
    """``(pi_num/pi_den)·π + Σ coeffs[v]·v`` over angle-gap variables."""

    kind: Literal["linear"] = "linear"
    pi_num: int = 0
    pi_den: int = Field(default=1, gt=0)
    coeffs: Dict[str, int] = Field(default_factory=dict)

    @property
    def pi_coefficient(self) -> Fraction:
        return Fraction(self.pi_num, self.pi_den)

    def evaluate(self, env: Env) -> Union[float, np.ndarray]:
        total: Union[float, np.ndarray] = math.pi * self.pi_num / self.pi_den
        for name, coeff in self.coeffs.items():
            total = total + coeff * env[name]
        return total

    def to_text(self) -> str:
        text = _pi_text(self.pi_coefficient) if self.pi_num or not self.coeffs else ""
        for name, coeff in self.coeffs.items():
            if coeff == 0:
                continue
            term = _var_text(name) if abs(coeff) == 1 else f"{abs(coeff)}{_var_text(name)}"
            if not text:
                text = term if coeff > 0 else "-" + term
            else:
                text += (" + " if coeff > 0 else " - ") + term
        return text


class Monomial(_Node):
    """``coef · Π v^powers[v]`` over c_i and t_i."""

    kind: Literal["monomial"] = "monomial"
    coef: float = Field(default=1.0, gt=0.0, allow_inf_nan=False)
    powers: Dict[str, int] = Field(default_factory=dict)

    def evaluate(self, env: Env) -> Union[float, np.ndarray]:
        total: Union[float, np.ndarray] = self.coef
        for name, power in self.powers.items():
            if power == 1:
                total = total * env[name]
            elif power == -1:
                total = total / env[name]
            elif power != 0:
                total = total * np.power(env[name], float(power))
        return total

    def to_text(self) -> str:
        def product(names: List[Tuple[str, int]]) -> str:
            return "".join(_var_text(n) + ("" if p == 1 else f"^{p}") for n, p in names)

        top = [(n, p) for n, p in self.powers.items() if p > 0]
        bottom = [(n, -p) for n, p in self.powers.items() if p < 0]
        head = product(top)
        if self.coef != 1.0:
            head = f"{self.coef:g}" + head
        head = head or "1"
        if not bottom:
            return head
        tail = product(bottom)
        return f"{head}/({tail})" if len(bottom) > 1 else f"{head}/{tail}"


class Extremum(_Node):
    """``max`` or ``min`` of its arguments."""

    kind: Literal["max", "min"]
    args: List["Expr"] = Field(min_length=2)

    def evaluate(self, env: Env) -> Union[float, np.ndarray]:
        values = [arg.evaluate(env) for arg in self.args]
        pick = np.maximum if self.kind == "max" else np.minimum
        result = values[0]
        for value in values[1:]:
            result = pick(result, value)
        return result

    def to_text(self) -> str:
        return f"{self.kind}{{" + ", ".join(arg.to_text() for arg in self.args) + "}"


Expr = Annotated[
    Union[Const, Infinity, Linear, Monomial, Extremum],
    Field(discriminator="kind"),
]
Extremum.model_rebuild()


class Bound(_Node):
    """Open interval (lower, upper) for one integration variable."""

    lower: Expr
    upper: Expr

    def to_text(self) -> str:
        return f"({self.lower.to_text()}, {self.upper.to_text()})"


ZERO = Const(value=0.0)
INFINITY = Infinity()


def pi_times(num: int, den: int = 1) -> Linear:
    frac = Fraction(num, den)
    return Linear(pi_num=frac.numerator, pi_den=frac.denominator)


def linear(pi: Fraction, coeffs: Mapping[str, int]) -> Linear:
    return Linear(
        pi_num=pi.numerator,
        pi_den=pi.denominator,
        coeffs={name: c for name, c in coeffs.items() if c != 0},
    )


def monomial(powers: Mapping[str, int]) -> Monomial:
    return Monomial(powers={name: p for name, p in powers.items() if p != 0})


def maximum(*args: Expr) -> Extremum:
    return Extremum(kind="max", args=list(args))


def minimum(*args: Expr) -> Extremum:
    return Extremum(kind="min", args=list(args))
