"""Polar change of variables for counterclockwise sniper tuples.

A tuple (r_1, ..., r_n) is written as the base argument θ, the
counterclockwise gaps θ_1..θ_{n-1}, the base magnitude r and the
successive magnitude ratios t_1..t_{n-1}. The last gap and ratio are
derived: θ_n = 2π - Σθ_i and t_n = 1/Πt_i.
"""

import math
from typing import Tuple

import numpy as np

from .exceptions import DomainError
from .geometry import BOUNDARY_TOL, TWO_PI
from .models import Configuration, ParamVector, PlanarPoint

LOWER_GAP = math.pi / 3
UPPER_GAP = 5 * math.pi / 3


def forward_map(p: ParamVector) -> Configuration:
    """Build the configuration r_i with argument θ + Σ_{k<i} θ_k and magnitude r·Π_{k<i} t_k."""
    argument, magnitude = p.theta, p.r
    points = [PlanarPoint.polar(magnitude, argument)]
    for gap, ratio in zip(p.thetas, p.ts):
        argument += gap
        magnitude *= ratio
        points.append(PlanarPoint.polar(magnitude, argument))
    return Configuration(points=tuple(points))


def forward_map_array(
    theta: np.ndarray, thetas: np.ndarray, r: np.ndarray, ts: np.ndarray
) -> np.ndarray:
    """Vectorised :func:`forward_map`; returns points shaped (m, n, 2)."""
    theta = np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    ts = np.atleast_2d(np.asarray(ts, dtype=float))
    zeros = np.zeros((thetas.shape[0], 1))
    arguments = theta[:, None] + np.concatenate([zeros, np.cumsum(thetas, axis=1)], axis=1)
    magnitudes = r[:, None] * np.concatenate([np.ones_like(zeros), np.cumprod(ts, axis=1)], axis=1)
    return np.stack([magnitudes * np.cos(arguments), magnitudes * np.sin(arguments)], axis=2)


def inverse_map(config: Configuration) -> ParamVector:
    """Recover (θ, θ_i, r, t_i) from a counterclockwise tuple of distinct-argument points.

    Raises:
        DomainError: if two points share an argument or the tuple winds
            more than once around the origin.
    """
    arguments = [p.argument for p in config.points]
    norms = [p.norm for p in config.points]
    gaps = []
    for i in range(config.n - 1):
        gap = (arguments[i + 1] - arguments[i]) % TWO_PI
        if gap <= BOUNDARY_TOL or TWO_PI - gap <= BOUNDARY_TOL:
            raise DomainError(f"points r_{i + 1} and r_{i + 2} share an argument", witness=config)
        gaps.append(gap)
    if math.fsum(gaps) >= TWO_PI - BOUNDARY_TOL:
        raise DomainError("points are not in counterclockwise order", witness=config)
    ratios = tuple(norms[i + 1] / norms[i] for i in range(config.n - 1))
    return ParamVector(
        n=config.n,
        theta=arguments[0],
        thetas=tuple(gaps),
        r=norms[0],
        ts=ratios,
    )


def inverse_map_array(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised :func:`inverse_map` without the ordering checks.

    Gaps are reduced into [0, 2π); callers decide what to do with rows whose
    gaps do not sum below 2π.
    """
    points = np.asarray(points, dtype=float)
    arguments = np.mod(np.arctan2(points[:, :, 1], points[:, :, 0]), TWO_PI)
    norms = np.hypot(points[:, :, 0], points[:, :, 1])
    thetas = np.mod(np.diff(arguments, axis=1), TWO_PI)
    ts = norms[:, 1:] / norms[:, :-1]
    return arguments[:, 0], thetas, norms[:, 0], ts


def in_region_x(p: ParamVector) -> bool:
    """Membership in the parameter region X of sniping tuples.

    Every gap, θ_n included, lies in (π/3, 5π/3); every gap in
    (π/3, π/2) ∪ (3π/2, 5π/3) has s_i = min(t_i, 1/t_i) above 2cos θ_i.
    Boundaries count as outside.
    """
    if not 0.0 <= p.theta < TWO_PI:
        return False
    if p.n == 1:
        return True
    return bool(
        in_region_x_array(np.array([p.thetas]), np.array([p.ts]))[0]
    )


def in_region_x_array(thetas: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Vectorised gap and ratio conditions of :func:`in_region_x` (base θ and r excluded)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    ts = np.atleast_2d(np.asarray(ts, dtype=float))
    full_theta = np.concatenate([thetas, TWO_PI - thetas.sum(axis=1, keepdims=True)], axis=1)
    full_t = np.concatenate([ts, 1.0 / np.prod(ts, axis=1, keepdims=True)], axis=1)

    gaps_ok = np.all(
        (full_theta > LOWER_GAP + BOUNDARY_TOL) & (full_theta < UPPER_GAP - BOUNDARY_TOL),
        axis=1,
    )
    constrained = np.cos(full_theta) > 0.0
    s = np.minimum(full_t, 1.0 / full_t)
    ratios_ok = np.all(~constrained | (s > 2.0 * np.cos(full_theta) + BOUNDARY_TOL), axis=1)
    positive = np.all(full_t > 0.0, axis=1)
    return gaps_ok & ratios_ok & positive


def jacobian_abs_det(p: ParamVector) -> float:
    """|det DF| = r^{2n-1} · Π_i t_i^{2(n-i)-1}."""
    value = p.r ** (2 * p.n - 1)
    for i, t in enumerate(p.ts, start=1):
        value *= t ** (2 * (p.n - i) - 1)
    return value


def _flatten(p: ParamVector) -> np.ndarray:
    return np.array([p.theta, *p.thetas, p.r, *p.ts], dtype=float)


def _forward_flat(n: int, v: np.ndarray) -> np.ndarray:
    theta, thetas, r, ts = v[0], v[1:n], v[n], v[n + 1 :]
    points = forward_map_array(np.array([theta]), np.array([thetas]), np.array([r]), np.array([ts]))
    return points[0].reshape(-1)


def numeric_jacobian_abs(p: ParamVector, step: float = 1e-6) -> float:
    """|det DF| by central differences."""
    v = _flatten(p)
    size = v.size
    matrix = np.empty((size, size))
    for j in range(size):
        h = step * max(1.0, abs(v[j]))
        up, down = v.copy(), v.copy()
        up[j] += h
        down[j] -= h
        matrix[:, j] = (_forward_flat(p.n, up) - _forward_flat(p.n, down)) / (2.0 * h)
    return float(abs(np.linalg.det(matrix)))
