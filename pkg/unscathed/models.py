"""Data models for unscathed."""

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .expressions import Bound

TWO_PI = 2.0 * math.pi

Quadrant = Literal["I", "II", "III", "IV"]
Signature = Tuple[Quadrant, ...]
WVariant = Literal["two", "interior", "reflex"]
Method = Literal["cubature", "mc-integration", "mc-simulation", "cartesian-check"]
UncertaintyKind = Literal["error-bound", "1σ"]
OutputFormat = Literal["json", "csv", "markdown"]
C5Assignment = Literal["printed", "table-consistent"]
Command = Literal["regions", "mc-integrate", "simulate", "verify", "report", "audit", "catalog"]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# -- geometry ---------------------------------------------------------------


class PlanarPoint(_Frozen):
    """A point of the plane."""

    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)

    @classmethod
    def polar(cls, radius: float, angle: float) -> "PlanarPoint":
        return cls(x=radius * math.cos(angle), y=radius * math.sin(angle))

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def squared_norm(self) -> float:
        return self.x * self.x + self.y * self.y

    @property
    def argument(self) -> float:
        """Argument in [0, 2π)."""
        angle = math.atan2(self.y, self.x)
        if angle < 0.0:
            angle += TWO_PI
        return angle if angle < TWO_PI else 0.0

    def squared_distance(self, other: "PlanarPoint") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return dx * dx + dy * dy


class Configuration(_Frozen):
    """An ordered tuple of one to five nonzero snipers near the origin."""

    points: Tuple[PlanarPoint, ...] = Field(min_length=1, max_length=5)

    @field_validator("points")
    @classmethod
    def _nonzero(cls, points: Tuple[PlanarPoint, ...]) -> Tuple[PlanarPoint, ...]:
        for index, point in enumerate(points, start=1):
            if point.squared_norm == 0.0:
                raise ValueError(f"point r_{index} is the origin")
        return points

    @classmethod
    def from_xy(cls, coords: List[Tuple[float, float]]) -> "Configuration":
        return cls(points=tuple(PlanarPoint(x=x, y=y) for x, y in coords))

    @property
    def n(self) -> int:
        return len(self.points)

    def rotated_labels(self, start: int) -> "Configuration":
        """Relabel counterclockwise starting from ``points[start]``."""
        return Configuration(points=self.points[start:] + self.points[:start])


class Disk(_Frozen):
    """A closed disk in the plane."""

    center: PlanarPoint
    radius: float = Field(gt=0.0, allow_inf_nan=False)


class ShootingDisk(Disk):
    """The disk of a sniper; it passes through the origin."""

    @model_validator(mode="after")
    def _through_origin(self) -> "ShootingDisk":
        if not math.isclose(self.radius, self.center.norm, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("shooting disk radius must equal |center|")
        return self

    @classmethod
    def of(cls, point: PlanarPoint) -> "ShootingDisk":
        return cls(center=point, radius=point.norm)


class AngleDecomposition(_Frozen):
    """Angles of the triangle (origin, r_i, r_{i+1}) with |r_i| = 1."""

    theta_prime: float = Field(gt=0.0, le=math.pi)
    alpha: float = Field(ge=0.0, le=math.pi / 2)
    beta: float = Field(ge=0.0, le=math.pi / 2)


# -- parametrization --------------------------------------------------------


class ParamVector(_Frozen):
    """Coordinates (θ, θ_1..θ_{n-1}, r, t_1..t_{n-1}) of a counterclockwise tuple."""

    n: int = Field(ge=1, le=5)
    theta: float = Field(allow_inf_nan=False)
    thetas: Tuple[float, ...] = ()
    r: float = Field(gt=0.0, allow_inf_nan=False)
    ts: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _shape(self) -> "ParamVector":
        if len(self.thetas) != self.n - 1 or len(self.ts) != self.n - 1:
            raise ValueError(f"n={self.n} needs {self.n - 1} angle gaps and magnitude ratios")
        if any(not math.isfinite(v) for v in self.thetas):
            raise ValueError("angle gaps must be finite")
        if any(not (t > 0.0 and math.isfinite(t)) for t in self.ts):
            raise ValueError("magnitude ratios must be positive and finite")
        return self

    @property
    def theta_n(self) -> float:
        return TWO_PI - math.fsum(self.thetas)

    @property
    def t_n(self) -> float:
        return 1.0 / math.prod(self.ts)

    @property
    def all_thetas(self) -> Tuple[float, ...]:
        return self.thetas + (self.theta_n,) if self.n > 1 else ()

    @property
    def all_ts(self) -> Tuple[float, ...]:
        return self.ts + (self.t_n,) if self.n > 1 else ()


# -- regions ----------------------------------------------------------------


class RegionSpec(_Frozen):
    """One quadrant-signature integration region of the c_n decomposition."""

    signature: Signature
    multiplicity: int = Field(gt=0)
    alias: str
    theta_bounds: Tuple[Bound, ...]
    t_bounds: Tuple[Bound, ...]
    weight_exponents: Tuple[int, ...]
    w_variant: WVariant
    prefactor: float

    @property
    def n(self) -> int:
        return len(self.signature)

    @property
    def name(self) -> str:
        return "(" + ",".join(self.signature) + ")"

    @property
    def dimension(self) -> int:
        return 2 * (self.n - 1)


class RegionPiece(_Frozen):
    """A subregion of a RegionSpec with simple bounds ready for the unit box."""

    spec: RegionSpec
    label: str
    theta_bounds: Tuple[Bound, ...]
    t_bounds: Tuple[Bound, ...]
    reciprocal: Tuple[bool, ...]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def dimension(self) -> int:
        return 2 * (self.n - 1)


class BoxSliceInterval(_Frozen):
    """A coordinate slice of {x : Σx = c, x_k ∈ [a_k, b_k]} with a fixed prefix."""

    a: Tuple[float, ...]
    b: Tuple[float, ...]
    c: float
    k: int = Field(ge=1)
    y: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _shape(self) -> "BoxSliceInterval":
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        if any(lo > hi for lo, hi in zip(self.a, self.b)):
            raise ValueError("every box must satisfy a_k <= b_k")
        if self.k > len(self.a):
            raise ValueError("k exceeds the number of coordinates")
        if len(self.y) != self.k - 1:
            raise ValueError("the prefix y must fix exactly k-1 coordinates")
        return self


# -- cubature ---------------------------------------------------------------


class CubatureSettings(_Frozen):
    """Tolerances and budget of the adaptive cubature engine."""

    abs_tol: float = Field(default=1e-10, gt=0.0)
    rel_tol: float = Field(default=0.0, ge=0.0)
    max_evaluations: Optional[int] = Field(default=None, gt=0)
    split_strategy: Literal["widest", "largest-error"] = "largest-error"
    workers: int = Field(default=1, ge=1)
    check_branches: bool = False


class IntegralEstimate(_Frozen):
    """Result of a deterministic cubature."""

    value: float
    error_bound: float = Field(ge=0.0)
    evaluations: int = Field(ge=1)
    subregions: int = Field(ge=1)
    converged: bool = True


# -- montecarlo -------------------------------------------------------------


class McEstimate(_Frozen):
    """A Monte Carlo mean with its 1σ standard error."""

    mean: float
    stderr: float = Field(ge=0.0)
    samples: int = Field(ge=0)


class SimOutcome(_Frozen):
    """What one simulated configuration says about the origin."""

    shooters: int = Field(ge=0, le=5)
    points_used: int = Field(ge=0)
    cutoff_reason: Literal["resolved-all", "early-shot-known"]
    shooter_points: Tuple[PlanarPoint, ...] = ()


class SimulationTally(BaseModel):
    """Order-independent accumulation of simulated configurations."""

    samples: int = 0
    histogram: List[int] = Field(default_factory=lambda: [0] * 6)
    unscathed: int = 0
    early_cutoffs: int = 0
    points_used: int = 0
    fallbacks: int = 0
    region_counts: Dict[str, int] = Field(default_factory=dict)
    region_squares: Dict[str, int] = Field(default_factory=dict)
    signature_counts: Dict[str, int] = Field(default_factory=dict)
    sniping_sets: List[List[Tuple[float, float]]] = Field(default_factory=list)

    def merge(self, other: "SimulationTally") -> None:
        self.samples += other.samples
        self.histogram = [a + b for a, b in zip(self.histogram, other.histogram)]
        self.unscathed += other.unscathed
        self.early_cutoffs += other.early_cutoffs
        self.points_used += other.points_used
        self.fallbacks += other.fallbacks
        for mine, theirs in (
            (self.region_counts, other.region_counts),
            (self.region_squares, other.region_squares),
            (self.signature_counts, other.signature_counts),
        ):
            for key, count in theirs.items():
                mine[key] = mine.get(key, 0) + count
        self.sniping_sets.extend(other.sniping_sets)


# -- verify -----------------------------------------------------------------


class VerificationReport(BaseModel):
    """Outcome of one verification check."""

    check: str
    samples: Optional[int] = None
    tolerance: Optional[float] = None
    passed: bool
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _failure_has_witness(self) -> "VerificationReport":
        if not self.passed and not self.witnesses:
            raise ValueError("a failed check must record at least one witness")
        return self


# -- cli-report -------------------------------------------------------------


class RecordMetadata(BaseModel):
    seed: Optional[int] = None
    evaluations: Optional[int] = None
    samples: Optional[int] = None
    wall_time: Optional[float] = None
    converged: Optional[bool] = None


class ResultRecord(BaseModel):
    """One computed quantity, as stored in the results file."""

    quantity: str
    method: Method
    value: float
    uncertainty: float = Field(ge=0.0)
    uncertainty_kind: UncertaintyKind
    metadata: RecordMetadata = Field(default_factory=RecordMetadata)


class RunConfig(BaseModel):
    """Everything a command needs; loadable from a JSON document."""

    command: Command
    seed: int = Field(default=0, ge=0, lt=2**64)
    signatures: Optional[List[str]] = None
    abs_tol: Optional[float] = Field(default=None, gt=0.0)
    rel_tol: float = Field(default=0.0, ge=0.0)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    max_evaluations: Optional[int] = Field(default=None, gt=0)
    samples: Optional[int] = Field(default=None, ge=1)
    early: bool = False
    threads: int = Field(default=1, ge=1)
    results_path: Path = Path("results.jsonl")
    output_path: Optional[Path] = None
    format: OutputFormat = "markdown"
    c5_assignment: C5Assignment = "printed"

    @field_validator("tolerances")
    @classmethod
    def _positive(cls, tolerances: Dict[str, float]) -> Dict[str, float]:
        for name, tol in tolerances.items():
            if not tol > 0.0:
                raise ValueError(f"tolerance for {name} must be positive")
        return tolerances
