"""Simulation of the unit-rate Poisson process around the origin and Monte Carlo integration.

Every random draw comes from a counter-based Philox stream keyed by the
master seed and a block index, so results do not depend on how blocks are
scheduled across threads. Blocks are simulated in bulk with numpy; any
sample the bulk pass cannot certify is finished by the scalar stepper on
the same stream.
"""

import bisect
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .exceptions import SimulationError, ValidationError
from .models import (
    McEstimate,
    PlanarPoint,
    RegionPiece,
    RegionSpec,
    SimOutcome,
    SimulationTally,
)
from .regions import (
    catalog_class,
    decompose_region,
    piece_integrand,
    quadrant_array,
    region_catalog,
    signature_name,
)

TWO_PI = 2.0 * math.pi
MAX_GAP = TWO_PI / 3.0

BLOCK_SIZE = 1024
BATCH_POINTS = 48
EARLY_BATCH_POINTS = 32
POINT_CAP = 10_000
INTEGRATION_BLOCK = 1 << 16

DOMAIN_SIMULATION = 0
DOMAIN_EARLY_CUTOFF = 1
DOMAIN_INTEGRATION = 2
DOMAIN_VERIFY = 3

T = TypeVar("T")


class SeededStream:
    """A reproducible random stream identified by (master_seed, stream_index)."""

    def __init__(self, master_seed: int, stream_index: int):
        if not 0 <= master_seed < 2**64:
            raise ValidationError("master seed must fit in 64 bits")
        if not 0 <= stream_index < 2**64:
            raise ValidationError("stream index must fit in 64 bits")
        self.master_seed = master_seed
        self.stream_index = stream_index
        self.rng = np.random.Generator(np.random.Philox(key=master_seed | (stream_index << 64)))

    @classmethod
    def for_block(cls, master_seed: int, domain: int, block: int) -> "SeededStream":
        return cls(master_seed, (domain << 48) | block)

    def uniform(self) -> float:
        return float(self.rng.random())

    def exponential(self) -> float:
        """Exp(1) by inverse CDF."""
        return -math.log1p(-self.rng.random())


class PoissonStepper:
    """Emits Poisson points in order of increasing distance from the origin.

    Tracks which emitted points are still viable shooters of the origin:
    no other emitted point lies strictly closer to them than the origin.
    """

    def __init__(self) -> None:
        self.squared_radius = 0.0
        self.xs: List[float] = []
        self.ys: List[float] = []
        self.radii2: List[float] = []
        self.viable: List[int] = []
        self._angles: List[float] = []

    @classmethod
    def from_points(cls, xs: Iterable[float], ys: Iterable[float]) -> "PoissonStepper":
        stepper = cls()
        for x, y in zip(xs, ys):
            stepper.add(float(x), float(y))
        return stepper

    @property
    def count(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> Tuple[PlanarPoint, ...]:
        return tuple(PlanarPoint(x=x, y=y) for x, y in zip(self.xs, self.ys))

    def add(self, x: float, y: float) -> None:
        s = x * x + y * y
        self.viable = [
            i for i in self.viable if (self.xs[i] - x) ** 2 + (self.ys[i] - y) ** 2 > self.radii2[i]
        ]
        if all((px - x) ** 2 + (py - y) ** 2 > s for px, py in zip(self.xs, self.ys)):
            self.viable.append(len(self.xs))
        self.xs.append(x)
        self.ys.append(y)
        self.radii2.append(s)
        self.squared_radius = max(self.squared_radius, s)
        bisect.insort(self._angles, math.atan2(y, x) % TWO_PI)

    def max_gap(self) -> float:
        if len(self._angles) < 2:
            return TWO_PI
        gaps = [b - a for a, b in zip(self._angles, self._angles[1:])]
        gaps.append(TWO_PI - self._angles[-1] + self._angles[0])
        return max(gaps)

    def certified(self) -> List[int]:
        """Viable points no future point can reach: current radius at least twice theirs."""
        return [i for i in self.viable if self.squared_radius >= 4.0 * self.radii2[i]]


def next_point(stepper: PoissonStepper, stream: SeededStream) -> PlanarPoint:
    """Advance the stepper by one point; the squared radius grows by Exp(1)/π."""
    stepper.squared_radius += stream.exponential() / math.pi
    radius = math.sqrt(stepper.squared_radius)
    angle = TWO_PI * stream.uniform()
    point = PlanarPoint.polar(radius, angle)
    stepper.add(point.x, point.y)
    return point


def run_stepper(
    stepper: PoissonStepper, stream: SeededStream, *, early: bool, cap: int
) -> SimOutcome:
    """Draw points until the termination certificate (or, with ``early``, a certified shooter) holds."""
    while True:
        certified = stepper.certified()
        if early and certified:
            return SimOutcome(
                shooters=len(certified),
                points_used=stepper.count,
                cutoff_reason="early-shot-known",
                shooter_points=tuple(PlanarPoint(x=stepper.xs[i], y=stepper.ys[i]) for i in certified),
            )
        if len(certified) == len(stepper.viable) and stepper.max_gap() < MAX_GAP:
            return SimOutcome(
                shooters=len(stepper.viable),
                points_used=stepper.count,
                cutoff_reason="resolved-all",
                shooter_points=tuple(PlanarPoint(x=stepper.xs[i], y=stepper.ys[i]) for i in stepper.viable),
            )
        if stepper.count >= cap:
            raise SimulationError(f"configuration unresolved after {cap} points")
        next_point(stepper, stream)


def simulate_shooters(stream: SeededStream, *, cap: int = POINT_CAP) -> SimOutcome:
    """Exact number of points that have the origin as their nearest neighbour."""
    return run_stepper(PoissonStepper(), stream, early=False, cap=cap)


# -- bulk simulation --------------------------------------------------------


def _bulk_points(rng: np.random.Generator, size: int, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    radii2 = np.cumsum(-np.log1p(-rng.random((size, k))) / math.pi, axis=1)
    angles = TWO_PI * rng.random((size, k))
    radii = np.sqrt(radii2)
    return radii * np.cos(angles), radii * np.sin(angles), radii2


def _bulk_status(
    xs: np.ndarray, ys: np.ndarray, radii2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Viable-shooter mask, certified mask and angular-gap flag per row."""
    dx = xs[:, :, None] - xs[:, None, :]
    dy = ys[:, :, None] - ys[:, None, :]
    d2 = dx * dx + dy * dy
    k = xs.shape[1]
    d2[:, np.arange(k), np.arange(k)] = np.inf
    viable = np.all(d2 > radii2[:, :, None], axis=2)
    certified = viable & (radii2[:, -1:] >= 4.0 * radii2)
    angles = np.sort(np.mod(np.arctan2(ys, xs), TWO_PI), axis=1)
    gaps = np.diff(angles, axis=1)
    wrap = TWO_PI - angles[:, -1] + angles[:, 0]
    gap_ok = np.maximum(gaps.max(axis=1), wrap) < MAX_GAP
    return viable, certified, gap_ok


def _rotation_signatures(points: np.ndarray) -> List[Tuple[str, ...]]:
    """Quadrant signature of every counterclockwise labelling of a point set."""
    angles = np.sort(np.mod(np.arctan2(points[:, 1], points[:, 0]), TWO_PI))
    gaps = np.diff(angles, append=angles[0] + TWO_PI)
    labels = [str(q) for q in quadrant_array(gaps)]
    n = len(labels)
    return [tuple(labels[(start + i) % n] for i in range(n)) for start in range(n)]


def _account_shooters(tally: SimulationTally, shooters: np.ndarray, collect_sets: int) -> None:
    k = shooters.shape[0]
    tally.histogram[k] += 1
    if k == 0:
        tally.unscathed += 1
    if k < 2:
        return
    if collect_sets and len(tally.sniping_sets) < collect_sets:
        tally.sniping_sets.append([(float(x), float(y)) for x, y in shooters])
    per_sample: Dict[str, int] = {}
    for n in range(2, k + 1):
        for subset in itertools.combinations(range(k), n):
            for signature in _rotation_signatures(shooters[list(subset)]):
                name = signature_name(signature)
                tally.signature_counts[name] = tally.signature_counts.get(name, 0) + 1
                if catalog_class(signature) == signature:
                    per_sample[name] = per_sample.get(name, 0) + 1
    for name, count in per_sample.items():
        tally.region_counts[name] = tally.region_counts.get(name, 0) + count
        tally.region_squares[name] = tally.region_squares.get(name, 0) + count * count


def simulate_block(
    master_seed: int,
    block: int,
    size: int,
    *,
    early: bool = False,
    classify: bool = False,
    collect_sets: int = 0,
) -> SimulationTally:
    """Simulate ``size`` independent configurations on one block stream."""
    domain = DOMAIN_EARLY_CUTOFF if early else DOMAIN_SIMULATION
    stream = SeededStream.for_block(master_seed, domain, block)
    k = EARLY_BATCH_POINTS if early else BATCH_POINTS
    xs, ys, radii2 = _bulk_points(stream.rng, size, k)
    viable, certified, gap_ok = _bulk_status(xs, ys, radii2)

    tally = SimulationTally(samples=size)
    if early:
        shot = np.any(certified, axis=1)
        clear = ~np.any(viable, axis=1) & gap_ok
        done = shot | clear
        tally.early_cutoffs += int(shot.sum())
        tally.unscathed += int(clear.sum())
    else:
        done = np.all(viable == certified, axis=1) & gap_ok
    tally.points_used += int(done.sum()) * k

    for row in range(size):
        if done[row]:
            if not early:
                mask = viable[row]
                points = np.stack([xs[row, mask], ys[row, mask]], axis=1)
                if classify or collect_sets:
                    _account_shooters(tally, points, collect_sets)
                else:
                    tally.histogram[int(mask.sum())] += 1
                    tally.unscathed += int(not mask.any())
            continue
        tally.fallbacks += 1
        stepper = PoissonStepper.from_points(xs[row], ys[row])
        outcome = run_stepper(stepper, stream, early=early, cap=POINT_CAP)
        tally.points_used += outcome.points_used
        if early:
            if outcome.cutoff_reason == "early-shot-known":
                tally.early_cutoffs += 1
            else:
                tally.unscathed += int(outcome.shooters == 0)
            continue
        points = np.array([[p.x, p.y] for p in outcome.shooter_points]).reshape(-1, 2)
        if classify or collect_sets:
            _account_shooters(tally, points, collect_sets)
        else:
            tally.histogram[outcome.shooters] += 1
            tally.unscathed += int(outcome.shooters == 0)
    return tally


def _blocks(samples: int, block_size: int) -> List[Tuple[int, int]]:
    full, rest = divmod(samples, block_size)
    blocks = [(index, block_size) for index in range(full)]
    if rest:
        blocks.append((full, rest))
    return blocks


def _map_ordered(work: Callable[[Tuple[int, int]], T], items: Sequence[Tuple[int, int]], threads: int) -> List[T]:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(work, items))
    return [work(item) for item in items]


def run_simulation(
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    early: bool = False,
    classify: bool = False,
    collect_sets: int = 0,
) -> SimulationTally:
    """Simulate ``samples`` configurations and merge the block tallies in block order."""
    if samples < 1:
        raise ValidationError("samples must be positive")
    parts = _map_ordered(
        lambda item: simulate_block(
            seed, item[0], item[1], early=early, classify=classify, collect_sets=collect_sets
        ),
        _blocks(samples, BLOCK_SIZE),
        threads,
    )
    tally = SimulationTally()
    for part in parts:
        tally.merge(part)
    if collect_sets:
        del tally.sniping_sets[collect_sets:]
    return tally


# -- estimators -------------------------------------------------------------


def _estimate_from_sums(total: float, squares: float, samples: int) -> McEstimate:
    mean = total / samples
    if samples < 2:
        return McEstimate(mean=mean, stderr=0.0, samples=samples)
    variance = max(squares / samples - mean * mean, 0.0) * samples / (samples - 1)
    return McEstimate(mean=mean, stderr=math.sqrt(variance / samples), samples=samples)


def cn_from_tally(tally: SimulationTally) -> Dict[int, McEstimate]:
    """c_1..c_5 as expected numbers of n-subsets of shooters."""
    estimates = {}
    for n in range(1, 6):
        total = sum(count * math.comb(k, n) for k, count in enumerate(tally.histogram))
        squares = sum(count * math.comb(k, n) ** 2 for k, count in enumerate(tally.histogram))
        estimates[n] = _estimate_from_sums(float(total), float(squares), tally.samples)
    return estimates


def p_from_tally(tally: SimulationTally) -> McEstimate:
    return _estimate_from_sums(float(tally.unscathed), float(tally.unscathed), tally.samples)


def regions_from_tally(tally: SimulationTally) -> Dict[str, McEstimate]:
    """Region integrals as mean per-sample tuple counts divided by n."""
    estimates = {}
    for name, total in sorted(tally.region_counts.items()):
        n = name.count(",") + 1
        raw = _estimate_from_sums(float(total), float(tally.region_squares[name]), tally.samples)
        estimates[name] = McEstimate(mean=raw.mean / n, stderr=raw.stderr / n, samples=raw.samples)
    return estimates


def estimate_cn_sim(samples: int, seed: int, *, threads: int = 1) -> Dict[int, McEstimate]:
    return cn_from_tally(run_simulation(samples, seed, threads=threads))


def estimate_p_sim(samples: int, seed: int, *, threads: int = 1) -> McEstimate:
    """Fraction of configurations in which no point snipes the origin, with early cutoff."""
    return p_from_tally(run_simulation(samples, seed, threads=threads, early=True))


def estimate_regions_sim(samples: int, seed: int, *, threads: int = 1) -> Dict[str, McEstimate]:
    return regions_from_tally(run_simulation(samples, seed, threads=threads, classify=True))


# -- Monte Carlo integration ------------------------------------------------


def _moments(values: np.ndarray) -> Tuple[int, float, float]:
    count = values.size
    mean = float(np.mean(values)) if count else 0.0
    m2 = float(np.sum((values - mean) ** 2)) if count else 0.0
    return count, mean, m2


def _merge_moments(parts: Sequence[Tuple[int, float, float]]) -> Tuple[int, float, float]:
    count, mean, m2 = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in parts:
        if n_b == 0:
            continue
        total = count + n_b
        delta = mean_b - mean
        mean += delta * n_b / total
        m2 += m2_b + delta * delta * count * n_b / total
        count = total
    return count, mean, m2


def mc_integrate_piece(
    piece: RegionPiece,
    samples: int,
    seed: int,
    *,
    piece_index: int = 0,
    threads: int = 1,
) -> McEstimate:
    """Plain Monte Carlo over the unit box of one region piece."""
    if samples < 1:
        raise ValidationError("samples must be positive")
    d = piece.dimension

    def work(item: Tuple[int, int]) -> Tuple[int, float, float]:
        block, size = item
        stream = SeededStream.for_block(seed, DOMAIN_INTEGRATION, (piece_index << 32) | block)
        x = 1.0 - stream.rng.random((size, d))
        return _moments(piece_integrand(piece, x))

    count, mean, m2 = _merge_moments(_map_ordered(work, _blocks(samples, INTEGRATION_BLOCK), threads))
    stderr = math.sqrt(m2 / (count - 1) / count) if count > 1 else 0.0
    return McEstimate(mean=mean, stderr=stderr, samples=count)


def mc_integrate_region(spec: RegionSpec, samples: int, seed: int, *, threads: int = 1) -> McEstimate:
    """Monte Carlo integral of a region, samples shared evenly between its pieces.

    Each region and piece draws from its own substream, so estimates of
    different regions are independent.
    """
    pieces = decompose_region(spec)
    names = [s.name for s in region_catalog()]
    region_index = names.index(spec.name) + 1 if spec.name in names else 0
    per_piece = max(2, -(-samples // len(pieces)))
    return combine_independent(
        [
            mc_integrate_piece(piece, per_piece, seed, piece_index=(region_index << 8) | index, threads=threads)
            for index, piece in enumerate(pieces)
        ]
    )


def combine_independent(
    estimates: Sequence[McEstimate], weights: Optional[Sequence[float]] = None
) -> McEstimate:
    """Weighted sum of independent estimates; errors add in quadrature."""
    weights = list(weights) if weights is not None else [1.0] * len(estimates)
    if len(weights) != len(estimates):
        raise ValidationError("one weight per estimate is required")
    return McEstimate(
        mean=math.fsum(w * e.mean for w, e in zip(weights, estimates)),
        stderr=math.sqrt(math.fsum((w * e.stderr) ** 2 for w, e in zip(weights, estimates))),
        samples=sum(e.samples for e in estimates),
    )
