"""Plane geometry of snipers: shooting predicates and shooting-disk union areas."""

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DomainError
from .models import (
    AngleDecomposition,
    Configuration,
    Disk,
    PlanarPoint,
    WVariant,
)

TWO_PI = 2.0 * math.pi
BOUNDARY_TOL = 1e-12

ArrayLike = Union[float, Sequence[float], np.ndarray]


def shoots_origin(p: PlanarPoint, others: Sequence[PlanarPoint]) -> bool:
    """True iff every other point is strictly farther from ``p`` than the origin is."""
    reach = p.squared_norm
    return all(p.squared_distance(q) > reach for q in others)


def failing_pairs(config: Configuration) -> List[Tuple[int, int]]:
    """1-based pairs (i, j) with |r_i - r_j| <= max(|r_i|, |r_j|)."""
    pairs = []
    points = config.points
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            reach = max(points[i].squared_norm, points[j].squared_norm)
            if points[i].squared_distance(points[j]) <= reach:
                pairs.append((i + 1, j + 1))
    return pairs


def closer_to_origin_than_each_other(config: Configuration) -> bool:
    """True iff all points snipe the origin when no other points exist."""
    return not failing_pairs(config)


def closer_to_origin_array(points: np.ndarray) -> np.ndarray:
    """Vectorised predicate over configurations shaped (m, n, 2)."""
    points = np.asarray(points, dtype=float)
    sq = np.einsum("mnk,mnk->mn", points, points)
    diff = points[:, :, None, :] - points[:, None, :, :]
    dist = np.einsum("mijk,mijk->mij", diff, diff)
    reach = np.maximum(sq[:, :, None], sq[:, None, :])
    n = points.shape[1]
    off_diagonal = ~np.eye(n, dtype=bool)
    return np.all((dist > reach) | ~off_diagonal[None, :, :], axis=(1, 2))


# -- triangle angles --------------------------------------------------------


def chord_angles(
    theta: ArrayLike,
    t: ArrayLike,
    *,
    check_branches: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Angles α (at r_i) and β (at r_{i+1}) of the triangle (0, r_i, r_{i+1}).

    ``theta`` is the counterclockwise gap and ``t = |r_{i+1}|/|r_i|``;
    inputs broadcast against each other.
    """
    theta = np.asarray(theta, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0) or np.any(~np.isfinite(t)):
        raise DomainError("magnitude ratio t must be positive and finite", witness=_first(t, (t <= 0.0) | ~np.isfinite(t)))
    if np.any(theta <= 0.0) or np.any(theta >= TWO_PI):
        bad = (theta <= 0.0) | (theta >= TWO_PI)
        raise DomainError("angle gap must lie in (0, 2π)", witness=_first(theta, bad))

    theta_prime = np.minimum(theta, TWO_PI - theta)
    sine = np.sin(theta_prime)
    half = np.sin(0.5 * theta_prime)
    chord = np.sqrt((1.0 - t) ** 2 + 4.0 * t * half * half)
    sin_alpha = t * sine / chord
    sin_beta = sine / chord

    bad = (sin_alpha > 1.0 + BOUNDARY_TOL) | (sin_beta > 1.0 + BOUNDARY_TOL)
    if np.any(bad):
        raise DomainError("triangle sine exceeds 1", witness=_first(np.broadcast_to(theta, bad.shape), bad))
    if check_branches:
        t2 = t * t
        c2 = chord * chord
        obtuse = (t2 > 1.0 + c2 + BOUNDARY_TOL) | (1.0 > t2 + c2 + BOUNDARY_TOL)
        if np.any(obtuse):
            raise DomainError(
                "obtuse triangle angle; arcsin branch invalid",
                witness=_first(np.broadcast_to(t, obtuse.shape), obtuse),
            )
    return np.arcsin(np.minimum(sin_alpha, 1.0)), np.arcsin(np.minimum(sin_beta, 1.0))


def _first(values: np.ndarray, mask: np.ndarray) -> Optional[float]:
    picked = np.broadcast_to(values, mask.shape)[mask]
    return float(picked.flat[0]) if picked.size else None


def chord_params(theta: float, t: float) -> AngleDecomposition:
    """Scalar form of :func:`chord_angles`."""
    alpha, beta = chord_angles(theta, t)
    return AngleDecomposition(
        theta_prime=min(theta, TWO_PI - theta),
        alpha=float(alpha),
        beta=float(beta),
    )


# -- union area of shooting disks -------------------------------------------


def _tri(angle: np.ndarray) -> np.ndarray:
    return np.cos(angle) * np.sin(angle)


def select_w_variant(n: int, all_thetas: Sequence[float]) -> WVariant:
    """Pick the closed form that applies to the full gap vector (θ_1..θ_n)."""
    if n == 2:
        return "two"
    if n == 3 and all_thetas[2] > math.pi and max(all_thetas[:2]) < math.pi:
        return "reflex"
    if all(0.0 < theta < math.pi for theta in all_thetas):
        return "interior"
    raise DomainError(
        f"no closed form for n={n} with gaps {tuple(round(v, 6) for v in all_thetas)}",
        witness=tuple(all_thetas),
    )


def union_area_w_array(
    thetas: np.ndarray,
    ts: np.ndarray,
    variant: Optional[WVariant] = None,
    *,
    check_branches: bool = False,
) -> np.ndarray:
    """W_n for rows of (θ_1..θ_{n-1}) and (t_1..t_{n-1}); returns shape (m,).

    The area of the union of shooting disks equals W_n·r². With ``variant``
    unset, n=3 rows pick the reflex form whenever θ_3 > π.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    ts = np.atleast_2d(np.asarray(ts, dtype=float))
    if thetas.shape != ts.shape:
        raise DomainError("angle gaps and magnitude ratios must have the same shape")
    n = thetas.shape[1] + 1
    if n < 2 or n > 5:
        raise DomainError(f"W_n is defined for n in 2..5, got {n}")

    theta_n = TWO_PI - thetas.sum(axis=1)
    if np.any(theta_n <= 0.0):
        raise DomainError("angle gaps must sum to less than 2π", witness=_first(theta_n, theta_n <= 0.0))
    full_theta = np.concatenate([thetas, theta_n[:, None]], axis=1)
    full_t = np.concatenate([ts, 1.0 / np.prod(ts, axis=1, keepdims=True)], axis=1)
    alpha, beta = chord_angles(full_theta, full_t, check_branches=check_branches)

    if n == 2:
        if variant not in (None, "two"):
            raise DomainError(f"variant {variant!r} does not apply to n=2")
        t1 = ts[:, 0]
        a1, b1 = alpha[:, 0], beta[:, 0]
        return (math.pi - a1) + (math.pi - b1) * t1 * t1 + _tri(a1) + t1 * t1 * _tri(b1)

    scale = np.ones_like(full_t)
    scale[:, 1:] = np.cumprod(ts, axis=1) ** 2

    if n == 3:
        reflex_rows = full_theta[:, 2] > math.pi
        if np.any(full_theta[:, :2] >= math.pi):
            bad = np.any(full_theta[:, :2] >= math.pi, axis=1)
            raise DomainError("n=3 closed forms need θ_1, θ_2 < π", witness=_first(full_theta[:, 0], bad))
        if variant == "interior" and np.any(reflex_rows):
            raise DomainError("interior form needs θ_3 < π", witness=_first(theta_n, reflex_rows))
        if variant == "reflex" and not np.all(reflex_rows):
            raise DomainError("reflex form needs θ_3 > π", witness=_first(theta_n, ~reflex_rows))
        if variant == "reflex" or (variant is None and np.all(reflex_rows)):
            return _w_reflex(alpha, beta, scale)
        interior = _w_interior(alpha, beta, scale)
        if variant is None and np.any(reflex_rows):
            return np.where(reflex_rows, _w_reflex(alpha, beta, scale), interior)
        return interior

    if variant not in (None, "interior"):
        raise DomainError(f"variant {variant!r} does not apply to n={n}")
    if np.any(full_theta >= math.pi):
        bad = np.any(full_theta >= math.pi, axis=1)
        raise DomainError(f"n={n} closed form needs every gap below π", witness=_first(theta_n, bad))
    return _w_interior(alpha, beta, scale)


def _w_interior(alpha: np.ndarray, beta: np.ndarray, scale: np.ndarray) -> np.ndarray:
    # disk i meets triangle i at α_i and triangle i-1 at β_{i-1}, cyclically
    beta_prev = np.roll(beta, 1, axis=1)
    per_disk = math.pi - alpha - beta_prev + _tri(alpha) + _tri(beta_prev)
    return np.sum(per_disk * scale, axis=1)


def _w_reflex(alpha: np.ndarray, beta: np.ndarray, scale: np.ndarray) -> np.ndarray:
    a1, a2 = alpha[:, 0], alpha[:, 1]
    b1, b2 = beta[:, 0], beta[:, 1]
    return (
        (math.pi - a1 + _tri(a1))
        + (math.pi - a2 - b1 + _tri(a2) + _tri(b1)) * scale[:, 1]
        + (math.pi - b2 + _tri(b2)) * scale[:, 2]
    )


def union_area_w(n: int, thetas: Sequence[float], ts: Sequence[float]) -> float:
    """W_n(θ_1..θ_{n-1}, t_1..t_{n-1}) for a single configuration."""
    if len(thetas) != n - 1 or len(ts) != n - 1:
        raise DomainError(f"n={n} needs {n - 1} angle gaps and magnitude ratios")
    all_thetas = list(thetas) + [TWO_PI - math.fsum(thetas)]
    variant = select_w_variant(n, all_thetas)
    return float(union_area_w_array(np.array([thetas]), np.array([ts]), variant)[0])


def radial_reduce(n: int, w: ArrayLike) -> ArrayLike:
    """Integral of r^{2n-1}·e^{-W r²} over r > 0 and θ ∈ [0, 2π): (n-1)!·π·W^{-n}."""
    return math.factorial(n - 1) * math.pi * np.power(w, -float(n))


# -- independent union-area oracle ------------------------------------------


def union_area_oracle(disks: Sequence[Disk]) -> float:
    """Area of a union of disks by Green's theorem over the uncovered boundary arcs."""
    if not disks:
        return 0.0
    # shared by the duplicate and containment tests: mutual containment within
    # tol implies a duplicate
    tol = BOUNDARY_TOL * max(1.0, max(disk.radius for disk in disks))
    circles: List[Tuple[float, float, float]] = []
    for disk in disks:
        cx, cy, r = disk.center.x, disk.center.y, disk.radius
        if any(math.hypot(cx - ox, cy - oy) <= tol and abs(r - orad) <= tol for ox, oy, orad in circles):
            continue
        circles.append((cx, cy, r))

    # drop circles inside another; their boundary is entirely covered
    kept = []
    for i, (cx, cy, r) in enumerate(circles):
        inside = False
        for j, (ox, oy, orad) in enumerate(circles):
            if i != j and math.hypot(cx - ox, cy - oy) + r <= orad + tol:
                inside = True
                break
        if not inside:
            kept.append((cx, cy, r))

    terms: List[float] = []
    for i, (cx, cy, r) in enumerate(kept):
        cuts: List[float] = []
        for j, (ox, oy, orad) in enumerate(kept):
            if i == j:
                continue
            d = math.hypot(ox - cx, oy - cy)
            if d >= r + orad - tol or d <= abs(r - orad) + tol:
                continue
            towards = math.atan2(oy - cy, ox - cx)
            spread = math.acos(max(-1.0, min(1.0, (r * r - orad * orad + d * d) / (2.0 * d * r))))
            cuts.append((towards - spread) % TWO_PI)
            cuts.append((towards + spread) % TWO_PI)

        if not cuts:
            arcs = [(0.0, TWO_PI)]
        else:
            cuts.sort()
            arcs = list(zip(cuts, cuts[1:] + [cuts[0] + TWO_PI]))

        for start, end in arcs:
            if end - start <= 0.0:
                continue
            mid = 0.5 * (start + end)
            mx, my = cx + r * math.cos(mid), cy + r * math.sin(mid)
            covered = any(
                (mx - ox) ** 2 + (my - oy) ** 2 < orad * orad
                for j, (ox, oy, orad) in enumerate(kept)
                if j != i
            )
            if covered:
                continue
            terms.append(
                0.5
                * (
                    r * r * (end - start)
                    + cx * r * (math.sin(end) - math.sin(start))
                    - cy * r * (math.cos(end) - math.cos(start))
                )
            )
    return math.fsum(terms)


def union_area_two_disks_array(
    c1: Tuple[ArrayLike, ArrayLike],
    r1: ArrayLike,
    c2: Tuple[ArrayLike, ArrayLike],
    r2: ArrayLike,
) -> np.ndarray:
    """Vectorised union area of two disks from the circular-lens formula."""
    x1, y1 = (np.asarray(v, dtype=float) for v in c1)
    x2, y2 = (np.asarray(v, dtype=float) for v in c2)
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    d = np.hypot(x2 - x1, y2 - y1)
    total = math.pi * (r1 * r1 + r2 * r2)

    overlapping = (d < r1 + r2) & (d > np.abs(r1 - r2))
    safe_d = np.where(overlapping, d, 1.0)
    arg1 = np.clip((safe_d**2 + r1**2 - r2**2) / (2.0 * safe_d * r1), -1.0, 1.0)
    arg2 = np.clip((safe_d**2 + r2**2 - r1**2) / (2.0 * safe_d * r2), -1.0, 1.0)
    kite = (-safe_d + r1 + r2) * (safe_d + r1 - r2) * (safe_d - r1 + r2) * (safe_d + r1 + r2)
    lens = r1**2 * np.arccos(arg1) + r2**2 * np.arccos(arg2) - 0.5 * np.sqrt(np.maximum(kite, 0.0))

    nested = d <= np.abs(r1 - r2)
    return np.where(
        overlapping,
        total - lens,
        np.where(nested, math.pi * np.maximum(r1, r2) ** 2, total),
    )
