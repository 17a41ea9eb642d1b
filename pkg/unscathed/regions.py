"""The twelve quadrant-signature regions whose integrals assemble c_2..c_5.

Every θ-bound in the catalog is produced from the quadrant boxes by the
box-and-sum slice rule (:func:`slice_interval`) applied symbolically, and
simplified whenever one of its four dominance tests settles the max or
min. The coupled ratio bounds of (I,I,I,I,I) come from the same rule
applied to log t_i.
"""

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import InfeasibleIntervalError, ValidationError
from .expressions import (
    INFINITY,
    ZERO,
    Bound,
    Const,
    Expr,
    Extremum,
    linear,
    maximum,
    minimum,
    monomial,
    pi_times,
)
from .geometry import TWO_PI, radial_reduce, union_area_w_array
from .models import (
    BoxSliceInterval,
    C5Assignment,
    Quadrant,
    RegionPiece,
    RegionSpec,
    Signature,
    VerificationReport,
    WVariant,
)

SLICE_TOL = 1e-12
ONE = Const(value=1.0)

QUADRANT_BOX: Dict[str, Tuple[Fraction, Fraction]] = {
    "I": (Fraction(1, 3), Fraction(1, 2)),
    "II": (Fraction(1, 2), Fraction(1)),
    "III": (Fraction(1), Fraction(3, 2)),
    "IV": (Fraction(3, 2), Fraction(5, 3)),
}

CATALOG_SIGNATURES: Tuple[Signature, ...] = (
    ("I", "IV"),
    ("II", "III"),
    ("I", "I", "III"),
    ("I", "II", "II"),
    ("I", "II", "III"),
    ("II", "II", "II"),
    ("I", "I", "I", "II"),
    ("I", "I", "II", "II"),
    ("I", "II", "I", "II"),
    ("I", "II", "II", "II"),
    ("I", "I", "I", "I", "I"),
    ("I", "I", "I", "I", "II"),
)

MULTIPLICITIES: Dict[Signature, int] = {
    ("I", "IV"): 2,
    ("II", "III"): 2,
    ("I", "I", "III"): 3,
    ("I", "II", "II"): 3,
    ("I", "II", "III"): 6,
    ("II", "II", "II"): 1,
    ("I", "I", "I", "II"): 4,
    ("I", "I", "II", "II"): 4,
    ("I", "II", "I", "II"): 2,
    ("I", "II", "II", "II"): 4,
    ("I", "I", "I", "I", "I"): 1,
    ("I", "I", "I", "I", "II"): 5,
}

ALIASES: Dict[Signature, str] = {
    ("I", "IV"): "I(1,0)",
    ("II", "III"): "½I(0,0)",
    ("I", "I", "III"): "I(1,1,0)",
    ("I", "II", "II"): "part of I(1,0,0)",
    ("I", "II", "III"): "part of I(1,0,0)",
    ("II", "II", "II"): "I(0,0,0)",
    ("I", "I", "I", "II"): "I(1,1,1,0)",
    ("I", "I", "II", "II"): "I(1,1,0,0)",
    ("I", "II", "I", "II"): "I(1,0,1,0)",
    ("I", "II", "II", "II"): "I(1,0,0,0)",
    ("I", "I", "I", "I", "I"): "I(1,1,1,1,1)",
    ("I", "I", "I", "I", "II"): "I(1,1,1,1,0)",
}

COMPOSITE_ALIASES: Dict[str, Dict[str, int]] = {
    "I(0,0)": {"(II,III)": 2},
    "I(1,0,0)": {"(I,II,II)": 1, "(I,II,III)": 2},
}


def signature_name(signature: Sequence[str]) -> str:
    return "(" + ",".join(signature) + ")"


def parse_signature(text: str) -> Signature:
    """Accept ``(I,IV)``, ``I,IV``, ``I-IV`` or an alias such as ``I(1,0)``."""
    cleaned = text.strip()
    for signature, alias in ALIASES.items():
        if cleaned == alias and not alias.startswith("part"):
            return signature
    labels = tuple(
        part.strip().upper() for part in cleaned.strip("()").replace("-", ",").split(",") if part.strip()
    )
    if labels not in MULTIPLICITIES:
        raise ValidationError(f"Unknown region signature '{text}'")
    return labels  # type: ignore[return-value]


# -- box-and-sum slices -----------------------------------------------------


class _Form:
    """Affine form ``const + Σ coeffs[v]·v`` with exact coefficients.

    For angles the constant is a multiple of π; for log-ratios it is 0
    and symbols stand for log t_i and log c_i.
    """

    __slots__ = ("const", "coeffs")

    def __init__(self, const: Fraction = Fraction(0), coeffs: Optional[Mapping[str, int]] = None):
        self.const = Fraction(const)
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def symbol(cls, name: str) -> "_Form":
        return cls(coeffs={name: 1})

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "_Form") -> "_Form":
        coeffs = dict(self.coeffs)
        for name, value in other.coeffs.items():
            coeffs[name] = coeffs.get(name, 0) + value
        return _Form(self.const + other.const, coeffs)

    def __neg__(self) -> "_Form":
        return _Form(-self.const, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "_Form") -> "_Form":
        return self + (-other)


def _endpoints(a: Sequence[Any], b: Sequence[Any], c: Any, k: int, y: Sequence[Any], zero: Any) -> Tuple[Any, Any]:
    """ℓ_k and u_k for any additive values (floats or affine forms); k is 1-based."""
    fixed = c
    for value in y[: k - 1]:
        fixed = fixed - value
    tail_b, tail_a = zero, zero
    for value in b[k:]:
        tail_b = tail_b + value
    for value in a[k:]:
        tail_a = tail_a + value
    return fixed - tail_b, fixed - tail_a


def _dominance_sums(a: Sequence[Any], b: Sequence[Any], c: Any, k: int, zero: Any) -> Tuple[Any, Any, Any, Any]:
    """Right-hand sides of the four dominance tests for coordinate k."""
    def total(values: Sequence[Any]) -> Any:
        acc = zero
        for value in values:
            acc = acc + value
        return acc

    before_a, before_b = a[: k - 1], b[: k - 1]
    after_a, after_b = a[k:], b[k:]
    return (
        c - total(before_b) - total(after_b),
        c - total(before_a) - total(after_b),
        c - total(before_a) - total(after_a),
        c - total(before_b) - total(after_a),
    )


def slice_interval(s: BoxSliceInterval) -> Tuple[float, float]:
    """Projection of {x : Σx = c, a ≤ x ≤ b, x_{<k} = y} onto coordinate k.

    Raises:
        InfeasibleIntervalError: if the slice is empty.
    """
    lower, upper = _endpoints(s.a, s.b, s.c, s.k, s.y, 0.0)
    lo = max(lower, s.a[s.k - 1])
    hi = min(upper, s.b[s.k - 1])
    if lo > hi + SLICE_TOL:
        raise InfeasibleIntervalError(
            f"slice {s.k} is empty: [{lo!r}, {hi!r}]", witness=s
        )
    return lo, max(lo, hi)


def slice_implications(s: BoxSliceInterval) -> Dict[str, bool]:
    """Which of the four dominance tests hold for coordinate k."""
    a_k, b_k = s.a[s.k - 1], s.b[s.k - 1]
    first, second, third, fourth = _dominance_sums(s.a, s.b, s.c, s.k, 0.0)
    return {
        "lower_is_l": a_k <= first,
        "lower_is_a": a_k >= second,
        "upper_is_u": b_k >= third,
        "upper_is_b": b_k <= fourth,
    }


def _symbolic_slice(
    a: Sequence[_Form],
    b: Sequence[_Form],
    c: _Form,
    k: int,
    y: Sequence[_Form],
    to_expr: Callable[[_Form], Expr],
) -> Bound:
    lower, upper = _endpoints(a, b, c, k, y, _Form())
    first, second, third, fourth = _dominance_sums(a, b, c, k, _Form())
    a_k, b_k = a[k - 1], b[k - 1]

    def holds(lhs: _Form, rhs: _Form) -> bool:
        gap = lhs - rhs
        return gap.is_constant and gap.const >= 0

    if holds(a_k, second):
        lo: Expr = to_expr(a_k)
    elif holds(first, a_k):
        lo = to_expr(lower)
    else:
        lo = maximum(to_expr(a_k), to_expr(lower))

    if holds(fourth, b_k):
        hi: Expr = to_expr(b_k)
    elif holds(b_k, third):
        hi = to_expr(upper)
    else:
        hi = minimum(to_expr(b_k), to_expr(upper))
    return Bound(lower=lo, upper=hi)


def _angle_expr(form: _Form) -> Expr:
    return linear(form.const, form.coeffs)


def _ratio_expr(form: _Form) -> Expr:
    return monomial(form.coeffs)


# -- catalog ----------------------------------------------------------------


def dihedral_orbit(signature: Sequence[str]) -> Tuple[Signature, ...]:
    """All relabelings of a cyclic signature by rotation and reflection."""
    seen: Dict[Signature, None] = {}
    for sequence in (tuple(signature), tuple(reversed(signature))):
        for shift in range(len(sequence)):
            seen[sequence[shift:] + sequence[:shift]] = None  # type: ignore[index]
    return tuple(seen)


@lru_cache(maxsize=None)
def _class_index() -> Dict[Signature, Signature]:
    index: Dict[Signature, Signature] = {}
    for signature in CATALOG_SIGNATURES:
        for member in dihedral_orbit(signature):
            index[member] = signature
    return index


def catalog_class(signature: Sequence[str]) -> Optional[Signature]:
    """The catalog signature whose dihedral class contains ``signature``."""
    return _class_index().get(tuple(signature))  # type: ignore[arg-type]


def w_variant_for(signature: Signature) -> WVariant:
    if len(signature) == 2:
        return "two"
    if len(signature) == 3 and signature[2] == "III":
        return "reflex"
    return "interior"


def _ratios_are_coupled(signature: Signature) -> bool:
    return len(signature) > 2 and all(q in ("I", "IV") for q in signature)


def _build_spec(signature: Signature) -> RegionSpec:
    n = len(signature)
    a = [_Form(QUADRANT_BOX[q][0]) for q in signature]
    b = [_Form(QUADRANT_BOX[q][1]) for q in signature]
    gaps = [_Form.symbol(f"theta{i}") for i in range(1, n)]
    theta_bounds = tuple(
        _symbolic_slice(a, b, _Form(Fraction(2)), k, gaps, _angle_expr) for k in range(1, n)
    )

    if _ratios_are_coupled(signature):
        log_c = [_Form.symbol(f"c{i}") for i in range(1, n + 1)]
        log_t = [_Form.symbol(f"t{i}") for i in range(1, n)]
        t_bounds = tuple(
            _symbolic_slice(log_c, [-v for v in log_c], _Form(), k, log_t, _ratio_expr)
            for k in range(1, n)
        )
    else:
        t_bounds = tuple(
            Bound(lower=monomial({f"c{k}": 1}), upper=monomial({f"c{k}": -1}))
            if signature[k - 1] in ("I", "IV")
            else Bound(lower=ZERO, upper=INFINITY)
            for k in range(1, n)
        )

    return RegionSpec(
        signature=signature,
        multiplicity=MULTIPLICITIES[signature],
        alias=tao_wu_alias(signature),
        theta_bounds=theta_bounds,
        t_bounds=t_bounds,
        weight_exponents=tuple(2 * (n - i) - 1 for i in range(1, n)),
        w_variant=w_variant_for(signature),
        prefactor=math.factorial(n - 1) * math.pi / n,
    )


@lru_cache(maxsize=None)
def region_catalog() -> Tuple[RegionSpec, ...]:
    """The twelve regions in catalog order."""
    return tuple(_build_spec(signature) for signature in CATALOG_SIGNATURES)


def region_by_name(name: str) -> RegionSpec:
    signature = parse_signature(name)
    for spec in region_catalog():
        if spec.signature == signature:
            return spec
    raise ValidationError(f"Unknown region signature '{name}'")  # pragma: no cover


def tao_wu_alias(signature: Sequence[str]) -> str:
    try:
        return ALIASES[tuple(signature)]  # type: ignore[index]
    except KeyError:
        raise ValidationError(f"No alias for non-catalog signature {signature_name(signature)}")


def catalog_document() -> List[Dict[str, object]]:
    """Region specs as plain data, with rendered bounds alongside the trees."""
    document = []
    for spec in region_catalog():
        entry = spec.model_dump(mode="json")
        entry["name"] = spec.name
        entry["rendered"] = {
            **{f"theta{k}": bound.to_text() for k, bound in enumerate(spec.theta_bounds, start=1)},
            **{f"t{k}": bound.to_text() for k, bound in enumerate(spec.t_bounds, start=1)},
        }
        document.append(entry)
    return document


# -- integrands -------------------------------------------------------------


def reduced_integrand_array(
    spec: RegionSpec, thetas: np.ndarray, ts: np.ndarray, *, check_branches: bool = False
) -> np.ndarray:
    """(1/n)·(n-1)!·π·W_n^{-n}·Π t_i^{2(n-i)-1} over rows of (θ_i) and (t_i)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    ts = np.atleast_2d(np.asarray(ts, dtype=float))
    w = union_area_w_array(thetas, ts, spec.w_variant, check_branches=check_branches)
    weight = np.prod(ts ** np.asarray(spec.weight_exponents, dtype=float), axis=1)
    return weight * radial_reduce(spec.n, w) / spec.n


def reduced_integrand(spec: RegionSpec, thetas: Sequence[float], ts: Sequence[float]) -> float:
    return float(reduced_integrand_array(spec, np.array([thetas]), np.array([ts]))[0])


# -- decomposition into unit-box pieces -------------------------------------


def _split_theta_bounds(spec: RegionSpec) -> List[Tuple[str, Tuple[Bound, ...]]]:
    if spec.signature != ("I", "II", "I", "II"):
        return [("", spec.theta_bounds)]
    first = spec.theta_bounds[0]
    below = (
        first,
        Bound(lower=pi_times(1, 2), upper=linear(Fraction(1), {"theta1": -1})),
        Bound(lower=pi_times(1, 3), upper=pi_times(1, 2)),
    )
    above = (
        first,
        Bound(lower=linear(Fraction(1), {"theta1": -1}), upper=linear(Fraction(7, 6), {"theta1": -1})),
        Bound(lower=pi_times(1, 3), upper=linear(Fraction(3, 2), {"theta1": -1, "theta2": -1})),
    )
    return [("[θ₁+θ₂<π]", below), ("[θ₁+θ₂>π]", above)]


def decompose_region(spec: RegionSpec) -> List[RegionPiece]:
    """Split a region into pieces whose ratio intervals are bounded.

    Independent ratio intervals are cut at t = 1 and the upper half is
    rewritten in u = 1/t over (lower, 1). Coupled max/min ratio bounds are
    left whole.
    """
    pieces = []
    coupled = any(isinstance(b.lower, Extremum) or isinstance(b.upper, Extremum) for b in spec.t_bounds)
    for theta_label, theta_bounds in _split_theta_bounds(spec):
        if coupled:
            pieces.append(
                RegionPiece(
                    spec=spec,
                    label=spec.name + theta_label,
                    theta_bounds=theta_bounds,
                    t_bounds=spec.t_bounds,
                    reciprocal=(False,) * (spec.n - 1),
                )
            )
            continue
        halves = [Bound(lower=bound.lower, upper=ONE) for bound in spec.t_bounds]
        for flips in itertools.product((False, True), repeat=spec.n - 1):
            label = " ".join(
                f"t{k}{'>' if flip else '<'}1" for k, flip in enumerate(flips, start=1)
            )
            pieces.append(
                RegionPiece(
                    spec=spec,
                    label=f"{spec.name}{theta_label} {label}",
                    theta_bounds=theta_bounds,
                    t_bounds=tuple(halves),
                    reciprocal=flips,
                )
            )
    return pieces


def map_unit_box(piece: RegionPiece, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Send rows of [0,1]^d into the piece; returns (θ_i, t_i, measure factor)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    m, n = x.shape[0], piece.n
    env: Dict[str, np.ndarray] = {}
    jac = np.ones(m)
    thetas = np.empty((m, n - 1))
    for k, bound in enumerate(piece.theta_bounds):
        lo = np.broadcast_to(bound.lower.evaluate(env), (m,))
        hi = np.broadcast_to(bound.upper.evaluate(env), (m,))
        width = np.maximum(hi - lo, 0.0)
        thetas[:, k] = lo + x[:, k] * width
        jac = jac * width
        env[f"theta{k + 1}"] = thetas[:, k]

    all_thetas = np.concatenate([thetas, TWO_PI - thetas.sum(axis=1, keepdims=True)], axis=1)
    for i in range(n):
        env[f"c{i + 1}"] = 2.0 * np.cos(all_thetas[:, i])

    ts = np.empty((m, n - 1))
    for k, (bound, flip) in enumerate(zip(piece.t_bounds, piece.reciprocal)):
        lo = np.broadcast_to(bound.lower.evaluate(env), (m,))
        hi = np.broadcast_to(bound.upper.evaluate(env), (m,))
        width = np.maximum(hi - lo, 0.0)
        v = lo + x[:, n - 1 + k] * width
        if flip:
            safe = np.where(v > 0.0, v, 1.0)
            ts[:, k] = 1.0 / safe
            jac = jac * np.where(v > 0.0, width / (safe * safe), 0.0)
        else:
            ts[:, k] = np.where(v > 0.0, v, 1.0)
            jac = jac * np.where(v > 0.0, width, 0.0)
        env[f"t{k + 1}"] = ts[:, k]
    return thetas, ts, jac


def piece_integrand(piece: RegionPiece, x: np.ndarray, *, check_branches: bool = False) -> np.ndarray:
    """The reduced integrand pulled back to the unit box, measure factor included."""
    thetas, ts, jac = map_unit_box(piece, x)
    values = np.zeros(jac.shape)
    live = jac > 0.0
    if np.any(live):
        values[live] = reduced_integrand_array(
            piece.spec, thetas[live], ts[live], check_branches=check_branches
        ) * jac[live]
    return values


# -- membership -------------------------------------------------------------


def quadrant_array(theta: np.ndarray) -> np.ndarray:
    """Quadrant labels for angles in (0, 2π): I (0,π/2], II (π/2,π], III (π,3π/2], IV (3π/2,2π)."""
    theta = np.asarray(theta, dtype=float)
    labels = np.array(["I", "II", "III", "IV"])
    index = np.clip(np.ceil(theta / (math.pi / 2)).astype(int) - 1, 0, 3)
    return labels[index]


def quadrant_of(theta: float) -> Quadrant:
    return str(quadrant_array(np.array([theta]))[0])  # type: ignore[return-value]


def region_contains_array(spec: RegionSpec, thetas: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Rows of (θ_i, t_i) lying strictly inside ``spec``'s bounds."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    ts = np.atleast_2d(np.asarray(ts, dtype=float))
    m, n = thetas.shape[0], spec.n
    inside = np.ones(m, dtype=bool)
    env: Dict[str, np.ndarray] = {}
    for k, bound in enumerate(spec.theta_bounds):
        value = thetas[:, k]
        inside &= (bound.lower.evaluate(env) < value) & (value < bound.upper.evaluate(env))
        env[f"theta{k + 1}"] = value
    all_thetas = np.concatenate([thetas, TWO_PI - thetas.sum(axis=1, keepdims=True)], axis=1)
    inside &= quadrant_array(all_thetas[:, -1]) == spec.signature[-1]
    for i in range(n):
        env[f"c{i + 1}"] = 2.0 * np.cos(all_thetas[:, i])
    for k, bound in enumerate(spec.t_bounds):
        value = ts[:, k]
        with np.errstate(divide="ignore", invalid="ignore"):
            inside &= (bound.lower.evaluate(env) < value) & (value < bound.upper.evaluate(env))
        env[f"t{k + 1}"] = value
    return inside


def _sample_bounded(
    rng: np.random.Generator, lo: np.ndarray, hi: np.ndarray
) -> np.ndarray:
    width = np.where(np.isfinite(hi), np.maximum(hi - lo, 0.0), 0.0)
    uniform = lo + rng.random(lo.shape) * width
    open_ended = lo + rng.exponential(1.0, lo.shape)
    return np.where(np.isfinite(hi), uniform, open_ended)


def iter_bound_lengths(
    spec: RegionSpec, samples: int, rng: np.random.Generator
) -> Iterator[Tuple[str, np.ndarray, Dict[str, np.ndarray]]]:
    """Walk the bounds in integration order, yielding each interval's lengths."""
    env: Dict[str, np.ndarray] = {}
    shape = (samples,)
    gaps = []
    for k, bound in enumerate(spec.theta_bounds, start=1):
        lo = np.broadcast_to(bound.lower.evaluate(env), shape).astype(float)
        hi = np.broadcast_to(bound.upper.evaluate(env), shape).astype(float)
        yield f"theta{k}", hi - lo, env
        env[f"theta{k}"] = _sample_bounded(rng, lo, hi)
        gaps.append(env[f"theta{k}"])
    theta_n = TWO_PI - np.sum(gaps, axis=0)
    for i, value in enumerate(gaps + [theta_n], start=1):
        env[f"c{i}"] = 2.0 * np.cos(value)
    for k, bound in enumerate(spec.t_bounds, start=1):
        lo = np.broadcast_to(bound.lower.evaluate(env), shape).astype(float)
        hi = np.broadcast_to(bound.upper.evaluate(env), shape).astype(float)
        yield f"t{k}", hi - lo, env
        env[f"t{k}"] = _sample_bounded(rng, lo, hi)


def assert_nondegenerate(spec: RegionSpec, samples: int, seed: int = 0) -> VerificationReport:
    """Sample sequentially within the bounds and confirm every interval is nonempty."""
    rng = np.random.Generator(np.random.Philox(seed))
    min_lengths: Dict[str, float] = {}
    witnesses: List[Dict[str, object]] = []
    for variable, lengths, env in iter_bound_lengths(spec, samples, rng):
        min_lengths[variable] = float(np.min(lengths))
        bad = np.flatnonzero(~(lengths > 0.0))
        if bad.size and len(witnesses) < 10:
            row = int(bad[0])
            witnesses.append(
                {
                    "region": spec.name,
                    "variable": variable,
                    "length": float(lengths[row]),
                    "point": {name: float(values[row]) for name, values in env.items()},
                    "violations": int(bad.size),
                }
            )
    return VerificationReport(
        check=f"nondegeneracy {spec.name}",
        samples=samples,
        passed=not witnesses,
        witnesses=witnesses,
        details={"min_lengths": min_lengths},
    )


# -- composition ------------------------------------------------------------


def cn_coefficients(c5_assignment: C5Assignment = "printed") -> Dict[int, Dict[str, int]]:
    """Region multiplicities per c_n; the two n=5 coefficients depend on ``c5_assignment``."""
    table: Dict[int, Dict[str, int]] = {n: {} for n in range(2, 6)}
    for spec in region_catalog():
        table[spec.n][spec.name] = spec.multiplicity
    if c5_assignment == "table-consistent":
        table[5] = {"(I,I,I,I,I)": 5, "(I,I,I,I,II)": 1}
    return table


def compose_cn(
    values: Mapping[str, float], c5_assignment: C5Assignment = "printed"
) -> Tuple[float, float, float, float]:
    """(c_2, c_3, c_4, c_5) as multiplicity-weighted sums of region integrals."""
    missing = [spec.name for spec in region_catalog() if spec.name not in values]
    if missing:
        raise ValidationError(f"Missing region values: {', '.join(missing)}")
    coefficients = cn_coefficients(c5_assignment)
    c2, c3, c4, c5 = (
        math.fsum(coeff * values[name] for name, coeff in coefficients[n].items())
        for n in range(2, 6)
    )
    return c2, c3, c4, c5


def compose_p(c2: float, c3: float, c4: float, c5: float) -> float:
    """P = c_2 - c_3 + c_4 - c_5."""
    return math.fsum((c2, -c3, c4, -c5))


def composite_alias(values: Mapping[str, float], alias: str) -> float:
    """I(0,0) and I(1,0,0) from region values."""
    try:
        parts = COMPOSITE_ALIASES[alias]
    except KeyError:
        raise ValidationError(f"Unknown composite alias '{alias}'")
    return math.fsum(coeff * values[name] for name, coeff in parts.items())
