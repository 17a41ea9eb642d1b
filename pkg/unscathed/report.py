"""Tables of estimates of P, c_n and region integrals, and uncertainty formatting."""

import csv
import io
import json
import math
import re
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, Field
from rich.table import Table

from .exceptions import ValidationError
from .models import C5Assignment, Method, OutputFormat, ResultRecord
from .regions import COMPOSITE_ALIASES, cn_coefficients, region_catalog

_ISO = re.compile(r"^\s*([+-]?\d+)(?:\.(\d*))?(?:\((\d+)\))?\s*$")

METHOD_LABELS: Dict[str, str] = {
    "mc-integration": "Monte Carlo integration",
    "mc-simulation": "Monte Carlo simulation",
    "cartesian-check": "Cartesian c₂ check",
    "cubature": "numerical integration",
}
METHOD_ORDER: Tuple[Method, ...] = ("mc-integration", "mc-simulation", "cartesian-check", "cubature")
CN_NAMES = ("c2", "c3", "c4", "c5")
P_COEFFICIENTS = {"c2": 1, "c3": -1, "c4": 1, "c5": -1}


def format_uncertainty(value: float, uncertainty: float) -> str:
    """Render ``value`` with its uncertainty on the final digits, e.g. ``0.28418556313(96)``.

    Two digits go in the parentheses unless the uncertainty is exactly one
    unit of its leading decade, which prints as ``(1)``. A rule keyed on the
    leading digit alone (two digits when it is 1, one otherwise) would print
    the published ``(96)``, ``(48)`` and ``(20)`` as ``(1)``, ``(5)`` and ``(2)``;
    this one reproduces all of them along with ``0.28418(1)``, and
    ``1.2e-5`` still prints as ``(12)``. A zero uncertainty prints the value
    alone at full precision.
    """
    if not uncertainty >= 0.0 or not math.isfinite(uncertainty):
        raise ValidationError(f"uncertainty must be a finite nonnegative number, got {uncertainty}")
    if uncertainty == 0.0:
        return repr(float(value))

    exponent = math.floor(math.log10(uncertainty))
    mantissa = uncertainty / 10.0**exponent
    if mantissa >= 10.0:
        exponent, mantissa = exponent + 1, mantissa / 10.0
    elif mantissa < 1.0:
        exponent, mantissa = exponent - 1, mantissa * 10.0

    digits = 1 if math.isclose(mantissa, 1.0, rel_tol=1e-9) else 2
    last = exponent - digits + 1
    scaled = round(uncertainty / 10.0**last)
    if scaled >= 10**digits:
        last += 1
        scaled = round(uncertainty / 10.0**last)

    decimals = max(-last, 0)
    if last > 0:
        rounded = round(value / 10.0**last) * 10**last
        return f"{rounded:.0f}({scaled * 10**last})"
    return f"{value:.{decimals}f}({scaled})"


def parse_uncertainty(text: str) -> Tuple[float, Optional[float]]:
    """Read ``0.28418(1)`` back as (0.28418, 1e-5); no parentheses means no uncertainty."""
    match = _ISO.match(text)
    if not match:
        raise ValidationError(f"Cannot read '{text}' as a value with uncertainty")
    whole, fraction, digits = match.groups()
    fraction = fraction or ""
    value = float(f"{whole}.{fraction}" if fraction else whole)
    if digits is None:
        return value, None
    return value, float(f"{digits}e-{len(fraction)}")


# -- assembling tables ------------------------------------------------------


class Estimate(BaseModel):
    """A value with its uncertainty and where it came from."""

    value: float
    uncertainty: float = Field(ge=0.0)
    kind: str = "1σ"
    derived: bool = False

    def formatted(self) -> str:
        return format_uncertainty(self.value, self.uncertainty)


class Discrepancy(BaseModel):
    quantity: str
    methods: Tuple[str, str]
    difference: float
    sigmas: float


class ReportTables(BaseModel):
    """Rows keyed by source, columns keyed by quantity."""

    p: Dict[str, Estimate] = Field(default_factory=dict)
    cn: Dict[str, Dict[str, Estimate]] = Field(default_factory=dict)
    regions: Dict[str, Dict[str, Estimate]] = Field(default_factory=dict)
    published: Dict[str, Dict[str, str]] = Field(default_factory=dict)
    discrepancies: List[Discrepancy] = Field(default_factory=list)
    c5_assignment: C5Assignment = "printed"

    @property
    def largest_discrepancy(self) -> Optional[Discrepancy]:
        return max(self.discrepancies, key=lambda d: d.sigmas, default=None)

    def flagged(self, threshold: float = 3.0) -> List[Discrepancy]:
        return [d for d in self.discrepancies if d.sigmas > threshold]


def latest_records(records: Iterable[ResultRecord]) -> Dict[Tuple[str, str], ResultRecord]:
    """The last stored record of each (method, quantity)."""
    latest: Dict[Tuple[str, str], ResultRecord] = {}
    for record in records:
        latest[(record.method, record.quantity)] = record
    return latest


def compose_weighted(
    terms: Mapping[str, Estimate], coefficients: Mapping[str, float]
) -> Optional[Estimate]:
    """Σ coefficient·term; error bounds add linearly, standard errors in quadrature."""
    if any(name not in terms for name in coefficients):
        return None
    parts = [(coeff, terms[name]) for name, coeff in coefficients.items()]
    bounds = all(term.kind == "error-bound" for _, term in parts)
    value = math.fsum(coeff * term.value for coeff, term in parts)
    if bounds:
        uncertainty = math.fsum(abs(coeff) * term.uncertainty for coeff, term in parts)
    else:
        uncertainty = math.sqrt(math.fsum((coeff * term.uncertainty) ** 2 for coeff, term in parts))
    return Estimate(value=value, uncertainty=uncertainty, kind=parts[0][1].kind, derived=True)


def _estimate(record: ResultRecord) -> Estimate:
    return Estimate(value=record.value, uncertainty=record.uncertainty, kind=record.uncertainty_kind)


def build_tables(
    records: Iterable[ResultRecord],
    c5_assignment: C5Assignment = "printed",
    published: Optional[Mapping[str, Mapping[str, str]]] = None,
) -> ReportTables:
    """Group stored records by method and fill in what composes from them.

    Region values compose into c_n and P; stored c_n and P take precedence
    over composed ones, and every disagreement between two sources of the
    same quantity is measured in combined standard deviations.
    """
    latest = latest_records(records)
    region_names = [spec.name for spec in region_catalog()]
    coefficients = cn_coefficients(c5_assignment)
    tables = ReportTables(c5_assignment=c5_assignment, published=dict(published or {}))
    internal: List[Discrepancy] = []

    for method in METHOD_ORDER:
        label = METHOD_LABELS[method]
        regions = {
            name: _estimate(latest[(method, name)]) for name in region_names if (method, name) in latest
        }
        for alias, parts in COMPOSITE_ALIASES.items():
            composite = compose_weighted(regions, parts)
            if composite is not None:
                regions[alias] = composite

        cn: Dict[str, Estimate] = {}
        for n, name in zip(range(2, 6), CN_NAMES):
            composed = compose_weighted(regions, coefficients[n])
            if (method, name) in latest:
                cn[name] = _estimate(latest[(method, name)])
                if composed is not None:
                    internal.append(_compare(name, (label, label + " (composed)"), cn[name], composed))
            elif composed is not None:
                cn[name] = composed
        composed_p = compose_weighted(cn, P_COEFFICIENTS)
        if (method, "P") in latest:
            tables.p[label] = _estimate(latest[(method, "P")])
            if composed_p is not None:
                internal.append(_compare("P", (label, label + " (composed)"), tables.p[label], composed_p))
        elif composed_p is not None:
            tables.p[label] = composed_p

        if regions:
            tables.regions[label] = regions
        if cn:
            tables.cn[label] = cn

    tables.discrepancies = internal + _discrepancies(tables)
    return tables


def _compare(quantity: str, sources: Tuple[str, str], a: Estimate, b: Estimate) -> Discrepancy:
    difference = abs(a.value - b.value)
    combined = math.hypot(a.uncertainty, b.uncertainty)
    if combined > 0.0:
        sigmas = difference / combined
    else:
        sigmas = 0.0 if difference == 0.0 else math.inf
    return Discrepancy(quantity=quantity, methods=sources, difference=difference, sigmas=sigmas)


def _discrepancies(tables: ReportTables) -> List[Discrepancy]:
    columns: Dict[str, Dict[str, Estimate]] = {}
    for source, estimate in tables.p.items():
        columns.setdefault("P", {})[source] = estimate
    for table in (tables.cn, tables.regions):
        for source, row in table.items():
            for quantity, estimate in row.items():
                columns.setdefault(quantity, {})[source] = estimate

    found = []
    for quantity, by_source in columns.items():
        sources = list(by_source)
        for i, first in enumerate(sources):
            for second in sources[i + 1 :]:
                found.append(_compare(quantity, (first, second), by_source[first], by_source[second]))
    return found


# -- rendering --------------------------------------------------------------


def _table_columns() -> List[Tuple[str, List[str]]]:
    region_columns = [spec.name for spec in region_catalog()] + list(COMPOSITE_ALIASES)
    return [("P", ["P"]), ("c_n", list(CN_NAMES)), ("regions", region_columns)]


def _rows(
    table: str, columns: Sequence[str], tables: ReportTables
) -> List[Tuple[str, List[str]]]:
    rows: List[Tuple[str, List[str]]] = []
    for source, values in tables.published.items():
        row = [values.get(column, "") for column in columns]
        if any(row):
            rows.append((source, row))
    if table == "P":
        computed: Dict[str, Dict[str, Estimate]] = {s: {"P": e} for s, e in tables.p.items()}
    elif table == "c_n":
        computed = tables.cn
    else:
        computed = tables.regions
    for source, estimates in computed.items():
        rows.append(
            (source, [estimates[column].formatted() if column in estimates else "" for column in columns])
        )
    return rows


TABLE_TITLES = {
    "P": "Various estimates of P",
    "c_n": "Various estimates of c_n",
    "regions": "Various estimates of region integrals",
}


def table_rows(tables: ReportTables) -> Dict[str, Tuple[List[str], List[Tuple[str, List[str]]]]]:
    return {name: (columns, _rows(name, columns, tables)) for name, columns in _table_columns()}


def render_markdown(tables: ReportTables) -> str:
    out: List[str] = []
    for name, (columns, rows) in table_rows(tables).items():
        out.append(f"### {TABLE_TITLES[name]}")
        out.append("")
        out.append("| source | " + " | ".join(columns) + " |")
        out.append("|---" * (len(columns) + 1) + "|")
        for source, values in rows:
            out.append(f"| {source} | " + " | ".join(v or "–" for v in values) + " |")
        out.append("")
    flagged = tables.flagged()
    if flagged:
        out.append("Inconsistencies beyond 3σ:")
        for d in flagged:
            out.append(f"- {d.quantity}: {d.methods[0]} vs {d.methods[1]}, {d.sigmas:.2f}σ")
        out.append("")
    return "\n".join(out)


def render_csv(tables: ReportTables) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["table", "source", "quantity", "value"])
    for name, (columns, rows) in table_rows(tables).items():
        for source, values in rows:
            for column, value in zip(columns, values):
                if value:
                    writer.writerow([name, source, column, value])
    return buffer.getvalue()


def render_json(tables: ReportTables) -> str:
    document = tables.model_dump(mode="json")
    largest = tables.largest_discrepancy
    document["largest_discrepancy"] = largest.model_dump(mode="json") if largest else None
    return json.dumps(document, indent=2, sort_keys=True)


def render(tables: ReportTables, fmt: OutputFormat) -> str:
    if fmt == "markdown":
        return render_markdown(tables)
    if fmt == "csv":
        return render_csv(tables)
    return render_json(tables)


def _header(column: str) -> str:
    """Region columns carry their literature alias on a second line."""
    aliases = {spec.name: spec.alias for spec in region_catalog()}
    return f"{column}\n{aliases[column]}" if column in aliases else column


def rich_tables(tables: ReportTables) -> List[Table]:
    rendered = []
    for name, (columns, rows) in table_rows(tables).items():
        table = Table(title=TABLE_TITLES[name])
        table.add_column("source", style="bold")
        for column in columns:
            table.add_column(_header(column), justify="right")
        for source, values in rows:
            table.add_row(source, *(v or "–" for v in values))
        rendered.append(table)
    return rendered
