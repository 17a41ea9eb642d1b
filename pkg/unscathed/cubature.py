"""Deterministic adaptive cubature on the unit box and over catalog regions."""

import itertools
import math
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from .exceptions import IntegrationError, ValidationError
from .models import CubatureSettings, IntegralEstimate, RegionSpec
from .regions import decompose_region, piece_integrand

Integrand = Callable[[np.ndarray], np.ndarray]

MAX_DIMENSION = 8
MAX_BATCH = 8192

# Genz–Malik generators on [-1, 1]^d
LAMBDA2 = math.sqrt(9.0 / 70.0)
LAMBDA3 = math.sqrt(9.0 / 10.0)
LAMBDA4 = math.sqrt(9.0 / 10.0)
LAMBDA5 = math.sqrt(9.0 / 19.0)

# 15-point Kronrod nodes (nonnegative half) and weights; odd entries are Gauss nodes
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class EmbeddedRule:
    """A cubature rule with an embedded lower-degree companion.

    Weights are normalised so that the integral over a box is
    ``volume · Σ w_j f(center + halfwidth · node_j)``.
    """

    dimension: int
    degree: int
    nodes: np.ndarray
    high: np.ndarray
    low: np.ndarray
    # indices of the ±λ2 and ±λ3 axis nodes for each dimension, or None
    axis_pairs: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


@lru_cache(maxsize=None)
def genz_malik_rule(d: int) -> EmbeddedRule:
    """Degree-7 rule with embedded degree-5 estimate for d >= 2."""
    if d < 2:
        raise ValidationError("the Genz–Malik rule needs d >= 2")
    eye = np.eye(d)
    nodes: List[np.ndarray] = [np.zeros(d)]
    axis_pairs = np.empty((d, 4), dtype=int)
    for lam, column in ((LAMBDA2, 0), (LAMBDA3, 2)):
        for i in range(d):
            axis_pairs[i, column] = len(nodes)
            nodes.append(lam * eye[i])
            axis_pairs[i, column + 1] = len(nodes)
            nodes.append(-lam * eye[i])
    for i, j in itertools.combinations(range(d), 2):
        for si, sj in itertools.product((1.0, -1.0), repeat=2):
            nodes.append(LAMBDA4 * (si * eye[i] + sj * eye[j]))
    for signs in itertools.product((1.0, -1.0), repeat=d):
        nodes.append(LAMBDA5 * np.asarray(signs))

    n2, n3, n4, n5 = 2 * d, 2 * d, 2 * d * (d - 1), 2**d
    high = np.concatenate(
        [
            [(12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0],
            np.full(n2, 980.0 / 6561.0),
            np.full(n3, (1820.0 - 400.0 * d) / 19683.0),
            np.full(n4, 200.0 / 19683.0),
            np.full(n5, 6859.0 / 19683.0 / 2**d),
        ]
    )
    low = np.concatenate(
        [
            [(729.0 - 950.0 * d + 50.0 * d * d) / 729.0],
            np.full(n2, 245.0 / 486.0),
            np.full(n3, (265.0 - 100.0 * d) / 1458.0),
            np.full(n4, 25.0 / 729.0),
            np.zeros(n5),
        ]
    )
    return EmbeddedRule(d, 7, np.asarray(nodes), high, low, axis_pairs)


@lru_cache(maxsize=None)
def kronrod_rule() -> EmbeddedRule:
    """15-point Gauss–Kronrod with embedded 7-point Gauss, d = 1."""
    nodes = np.array([-x for x in _XGK[:-1]] + [x for x in reversed(_XGK)])
    high = np.array(list(_WGK[:-1]) + list(reversed(_WGK))) / 2.0
    low = np.zeros(15)
    for index, weight in enumerate(_WG):
        node = 2 * index + 1
        low[_node_index(node, left=True)] = weight / 2.0
        if node != 7:
            low[_node_index(node, left=False)] = weight / 2.0
    return EmbeddedRule(1, 23, nodes[:, None], high, low)


def _node_index(half_index: int, *, left: bool) -> int:
    # _XGK[i] sits at position i on the left (as -x) and 14 - i on the right
    return half_index if left else 14 - half_index


def rule_for(d: int) -> EmbeddedRule:
    if not 1 <= d <= MAX_DIMENSION:
        raise ValidationError(f"cubature supports 1 <= d <= {MAX_DIMENSION}, got {d}")
    return kronrod_rule() if d == 1 else genz_malik_rule(d)


def default_budget(d: int) -> int:
    if d <= 2:
        return 10**7
    if d <= 4:
        return 10**8
    return 10**9


def _evaluate(f: Integrand, points: np.ndarray, executor: Optional[Executor], workers: int) -> np.ndarray:
    if executor is None or workers == 1 or points.shape[0] < 2 * workers:
        values = np.asarray(f(points), dtype=float)
    else:
        chunks = np.array_split(points, workers)
        values = np.concatenate([np.asarray(v, dtype=float) for v in executor.map(f, chunks)])
    bad = ~np.isfinite(values)
    if np.any(bad):
        nodes = points[bad][:5].tolist()
        raise IntegrationError(
            f"integrand is not finite at {int(bad.sum())} node(s)", nodes=nodes
        )
    return values


def apply_rule(
    rule: EmbeddedRule,
    f: Integrand,
    centers: np.ndarray,
    halfwidths: np.ndarray,
    *,
    strategy: str = "largest-error",
    executor: Optional[Executor] = None,
    workers: int = 1,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Estimate, error and split dimension for each box (center ± halfwidth)."""
    count, d = centers.shape
    points = centers[:, None, :] + rule.nodes[None, :, :] * halfwidths[:, None, :]
    values = _evaluate(f, points.reshape(-1, d), executor, workers).reshape(count, rule.size)
    volume = np.prod(2.0 * halfwidths, axis=1)
    high = volume * (values @ rule.high)
    low = volume * (values @ rule.low)
    error = np.abs(high - low)

    if d == 1:
        split = np.zeros(count, dtype=int)
    elif strategy == "widest" or rule.axis_pairs is None:
        split = np.argmax(halfwidths, axis=1)
    else:
        pairs = rule.axis_pairs
        centre = values[:, :1]
        inner = values[:, pairs[:, 0]] + values[:, pairs[:, 1]] - 2.0 * centre
        outer = values[:, pairs[:, 2]] + values[:, pairs[:, 3]] - 2.0 * centre
        fourth = np.abs(inner - (LAMBDA2**2 / LAMBDA3**2) * outer)
        peak = fourth.max(axis=1, keepdims=True)
        # near-ties go to the widest side
        near = fourth >= peak * (1.0 - 1e-10)
        split = np.argmax(np.where(near, halfwidths, -1.0), axis=1)
    return high, error, split


def integrate_unit_box(
    f: Integrand,
    d: int,
    settings: Optional[CubatureSettings] = None,
) -> IntegralEstimate:
    """Globally adaptive integration of ``f`` over [0, 1]^d.

    ``f`` maps an (m, d) array of points to m values. Boxes are refined in
    batches, largest error first, until the summed error meets
    max(abs_tol, rel_tol·|value|) or the evaluation budget runs out, in
    which case the estimate is returned with ``converged=False``.
    """
    settings = settings or CubatureSettings()
    rule = rule_for(d)
    budget = settings.max_evaluations or default_budget(d)
    executor = ThreadPoolExecutor(settings.workers) if settings.workers > 1 else None
    try:
        return _adapt(f, d, rule, settings, budget, executor)
    finally:
        if executor is not None:
            executor.shutdown()


def _adapt(
    f: Integrand,
    d: int,
    rule: EmbeddedRule,
    settings: CubatureSettings,
    budget: int,
    executor: Optional[Executor],
) -> IntegralEstimate:
    def run(centers: np.ndarray, halfwidths: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return apply_rule(
            rule,
            f,
            centers,
            halfwidths,
            strategy=settings.split_strategy,
            executor=executor,
            workers=settings.workers,
        )

    centers = np.full((1, d), 0.5)
    halfwidths = np.full((1, d), 0.5)
    values, errors, splits = run(centers, halfwidths)
    evaluations = rule.size
    converged = True

    while True:
        total = math.fsum(values)
        total_error = math.fsum(errors)
        target = max(settings.abs_tol, settings.rel_tol * abs(total))
        if total_error <= target:
            break
        affordable = (budget - evaluations) // (2 * rule.size)
        if affordable < 1:
            converged = False
            break

        order = np.argsort(-errors, kind="stable")
        cumulative = np.cumsum(errors[order])
        wanted = int(np.searchsorted(cumulative, 0.5 * total_error)) + 1
        chosen = order[: max(1, min(wanted, affordable, MAX_BATCH))]

        axis = splits[chosen]
        rows = np.arange(chosen.size)
        child_half = halfwidths[chosen].copy()
        child_half[rows, axis] *= 0.5
        offset = np.zeros_like(child_half)
        offset[rows, axis] = child_half[rows, axis]
        child_centers = np.concatenate([centers[chosen] - offset, centers[chosen] + offset])
        child_half = np.concatenate([child_half, child_half])

        child_values, child_errors, child_splits = run(child_centers, child_half)
        evaluations += child_centers.shape[0] * rule.size

        keep = np.ones(values.size, dtype=bool)
        keep[chosen] = False
        centers = np.concatenate([centers[keep], child_centers])
        halfwidths = np.concatenate([halfwidths[keep], child_half])
        values = np.concatenate([values[keep], child_values])
        errors = np.concatenate([errors[keep], child_errors])
        splits = np.concatenate([splits[keep], child_splits])

    return IntegralEstimate(
        value=math.fsum(values),
        error_bound=math.fsum(errors),
        evaluations=evaluations,
        subregions=int(values.size),
        converged=converged,
    )


def integrate_region(spec: RegionSpec, settings: Optional[CubatureSettings] = None) -> IntegralEstimate:
    """Integrate a catalog region piece by piece and sum the estimates.

    The tolerance and budget are shared evenly between pieces; the total
    error bound is the sum of the piece bounds.
    """
    settings = settings or CubatureSettings()
    pieces = decompose_region(spec)
    budget = settings.max_evaluations or default_budget(spec.dimension)
    per_piece = settings.model_copy(
        update={
            "abs_tol": settings.abs_tol / len(pieces),
            "max_evaluations": max(1, budget // len(pieces)),
            "workers": 1 if len(pieces) > 1 else settings.workers,
        }
    )

    def work(index: int) -> IntegralEstimate:
        piece = pieces[index]
        return integrate_unit_box(
            lambda x: piece_integrand(piece, x, check_branches=settings.check_branches),
            piece.dimension,
            per_piece,
        )

    if settings.workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(settings.workers) as pool:
            estimates = list(pool.map(work, range(len(pieces))))
    else:
        estimates = [work(index) for index in range(len(pieces))]

    return IntegralEstimate(
        value=math.fsum(e.value for e in estimates),
        error_bound=math.fsum(e.error_bound for e in estimates),
        evaluations=sum(e.evaluations for e in estimates),
        subregions=sum(e.subregions for e in estimates),
        converged=all(e.converged for e in estimates),
    )
