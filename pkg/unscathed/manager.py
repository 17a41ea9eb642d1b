"""High-level run orchestration: compute, store, verify and report."""

import json
import math
import time
from pathlib import Path
from typing import Dict, List, Optional

from rich.table import Table

from . import verify
from .console import console
from .cubature import integrate_region
from .exceptions import (
    EXIT_OK,
    NonConvergenceError,
    StorageError,
    UnscathedError,
    VerificationFailure,
)
from .geometry import radial_reduce
from .models import (
    CubatureSettings,
    McEstimate,
    Method,
    RecordMetadata,
    RegionSpec,
    ResultRecord,
    RunConfig,
    VerificationReport,
)
from .montecarlo import (
    cn_from_tally,
    estimate_p_sim,
    mc_integrate_region,
    p_from_tally,
    regions_from_tally,
    run_simulation,
)
from .reference import published_rows
from .regions import catalog_document, region_by_name, region_catalog, signature_name
from .report import ReportTables, build_tables, format_uncertainty, render, rich_tables
from .storage import ResultStore, export_catalog
from .validators import (
    validate_format,
    validate_samples,
    validate_signatures,
    validate_threads,
    validate_tolerance,
)

DEFAULT_ABS_TOL = {2: 1e-11, 3: 1e-9, 4: 1e-8, 5: 1e-11}
DEFAULT_SAMPLES = {
    "mc-integrate": 1_000_000,
    "simulate": 1_000_000,
    "verify": 1_000,
    "audit": 10_000,
}


class RunManager:
    """Runs one command of a :class:`RunConfig` against a result store."""

    def __init__(self, store: Optional[ResultStore] = None):
        self.store = store

    def _store(self, config: RunConfig) -> ResultStore:
        if self.store is None:
            self.store = ResultStore(config.results_path)
        return self.store

    def _samples(self, config: RunConfig) -> int:
        samples = config.samples or DEFAULT_SAMPLES[config.command]
        validate_samples(samples)
        return samples

    def _specs(self, config: RunConfig, *, default_max_n: int = 5) -> List[RegionSpec]:
        if not config.signatures:
            return [spec for spec in region_catalog() if spec.n <= default_max_n]
        return [region_by_name(signature_name(s)) for s in validate_signatures(config.signatures)]

    def _tolerance(self, config: RunConfig, spec: RegionSpec) -> float:
        for key in (spec.name, spec.alias):
            if key in config.tolerances:
                return config.tolerances[key]
        tolerance = config.abs_tol if config.abs_tol is not None else DEFAULT_ABS_TOL[spec.n]
        validate_tolerance(tolerance, "abs_tol")
        return tolerance

    def _save(self, config: RunConfig, records: List[ResultRecord]) -> None:
        written = self._store(config).append(records)
        console.print(f"[green]✓[/green] Stored {written} result(s) in {config.results_path}")

    @staticmethod
    def _mc_record(
        quantity: str, method: Method, estimate: McEstimate, seed: int, started: float
    ) -> ResultRecord:
        return ResultRecord(
            quantity=quantity,
            method=method,
            value=estimate.mean,
            uncertainty=estimate.stderr,
            uncertainty_kind="1σ",
            metadata=RecordMetadata(seed=seed, samples=estimate.samples, wall_time=time.perf_counter() - started),
        )

    def _print_records(self, title: str, records: List[ResultRecord]) -> None:
        table = Table(title=title)
        table.add_column("quantity", style="bold")
        table.add_column("value", justify="right")
        table.add_column("kind")
        for record in records:
            table.add_row(
                record.quantity,
                format_uncertainty(record.value, record.uncertainty),
                record.uncertainty_kind,
            )
        console.print(table)

    # -- commands ------------------------------------------------------------

    def run_regions(self, config: RunConfig) -> List[ResultRecord]:
        """Deterministic cubature per region; five-point regions only when named."""
        validate_threads(config.threads)
        records = []
        unconverged = []
        for spec in self._specs(config, default_max_n=4):
            settings = CubatureSettings(
                abs_tol=self._tolerance(config, spec),
                rel_tol=config.rel_tol,
                max_evaluations=config.max_evaluations,
                workers=config.threads,
            )
            started = time.perf_counter()
            with console.status(f"Integrating [bold]{spec.name}[/bold] to {settings.abs_tol:g}..."):
                estimate = integrate_region(spec, settings)
            records.append(
                ResultRecord(
                    quantity=spec.name,
                    method="cubature",
                    value=estimate.value,
                    uncertainty=estimate.error_bound,
                    uncertainty_kind="error-bound",
                    metadata=RecordMetadata(
                        evaluations=estimate.evaluations,
                        wall_time=time.perf_counter() - started,
                        converged=estimate.converged,
                    ),
                )
            )
            if not estimate.converged:
                unconverged.append(spec.name)
        self._save(config, records)
        self._print_records("Cubature", records)
        if unconverged:
            raise NonConvergenceError(f"Evaluation budget exhausted for {', '.join(unconverged)}")
        return records

    def run_mc_integrate(self, config: RunConfig) -> List[ResultRecord]:
        validate_threads(config.threads)
        samples = self._samples(config)
        records = []
        for spec in self._specs(config):
            started = time.perf_counter()
            with console.status(f"Sampling [bold]{spec.name}[/bold] ({samples:,} points)..."):
                estimate = mc_integrate_region(spec, samples, config.seed, threads=config.threads)
            records.append(self._mc_record(spec.name, "mc-integration", estimate, config.seed, started))
        self._save(config, records)
        self._print_records("Monte Carlo integration", records)
        return records

    def run_simulate(self, config: RunConfig) -> List[ResultRecord]:
        """P, c_2..c_5 and region values from simulated configurations."""
        validate_threads(config.threads)
        samples = self._samples(config)
        started = time.perf_counter()
        with console.status(f"Simulating {samples:,} configurations..."):
            tally = run_simulation(samples, config.seed, threads=config.threads, classify=True)
            p = estimate_p_sim(samples, config.seed, threads=config.threads) if config.early else p_from_tally(tally)
        cn = cn_from_tally(tally)
        records = [self._mc_record("P", "mc-simulation", p, config.seed, started)]
        records += [self._mc_record(f"c{n}", "mc-simulation", cn[n], config.seed, started) for n in range(2, 6)]
        records += [
            self._mc_record(name, "mc-simulation", estimate, config.seed, started)
            for name, estimate in regions_from_tally(tally).items()
        ]
        if tally.fallbacks:
            console.print(f"[dim]{tally.fallbacks} configuration(s) finished by the scalar stepper[/dim]")
        self._save(config, records)
        self._print_records("Monte Carlo simulation", records)
        return records

    def run_verify(self, config: RunConfig) -> List[VerificationReport]:
        """Every cross-check; raises :class:`VerificationFailure` if any fails."""
        validate_threads(config.threads)
        samples = self._samples(config)
        seed = config.seed
        reports: List[VerificationReport] = []
        checks = [
            ("disk-union oracle", lambda: verify.verify_w_oracle(samples, seed)),
            ("Jacobian", lambda: verify.jacobian_check(samples, seed)),
            ("slice implications", lambda: verify.slice_implications_check(samples, seed)),
            ("nondegeneracy", lambda: verify.nondegeneracy_check(samples, seed)),
            ("certificate", lambda: verify.certificate_check(samples, seed)),
            ("c_1", lambda: verify.c1_check(samples, seed, threads=config.threads)),
            ("figure configurations", verify.figure1_probe),
        ]
        for label, check in checks:
            with console.status(f"Checking {label}..."):
                reports.append(check())

        with console.status("Sampling sniping sets..."):
            sets = verify.direction_two_sets(samples, seed, threads=config.threads)
        with console.status("Checking region bounds in both directions..."):
            reports.append(verify.verify_region_bidirectional(samples, seed, sets=sets))
            reports.append(verify.planted_catalog_check(samples, seed, sets=sets))
            reports.append(verify.partition_check(sets=sets))

        started = time.perf_counter()
        tolerance = config.abs_tol or 1e-7
        with console.status("Integrating c_2 in Cartesian coordinates..."):
            c2 = verify.c2_cartesian_check(tolerance)
        reports.append(verify.c2_cartesian_report(c2))
        self._save(
            config,
            [
                ResultRecord(
                    quantity="c2",
                    method="cartesian-check",
                    value=c2.value,
                    uncertainty=c2.error_bound,
                    uncertainty_kind="error-bound",
                    metadata=RecordMetadata(
                        evaluations=c2.evaluations,
                        wall_time=time.perf_counter() - started,
                        converged=c2.converged,
                    ),
                )
            ],
        )

        self._print_reports(reports)
        self._write_reports(config, reports)
        failed = [report for report in reports if not report.passed]
        if failed:
            raise VerificationFailure(f"{len(failed)} of {len(reports)} checks failed", reports=failed)
        return reports

    def run_report(self, config: RunConfig) -> ReportTables:
        fmt = validate_format(config.format)
        records = self._store(config).load()
        tables = build_tables(records, config.c5_assignment, published_rows(config.c5_assignment))
        if config.output_path is not None or fmt != "markdown":
            text = render(tables, fmt)
            if config.output_path is not None:
                self._write_text(config.output_path, text)
                console.print(f"[green]✓[/green] Wrote {fmt} report to {config.output_path}")
            else:
                console.print(text, markup=False, highlight=False, soft_wrap=True)
        else:
            for table in rich_tables(tables):
                console.print(table)
        for discrepancy in tables.flagged():
            console.print(
                f"[yellow]{discrepancy.quantity}: {discrepancy.methods[0]} and "
                f"{discrepancy.methods[1]} differ by {discrepancy.sigmas:.2f}σ[/yellow]"
            )
        return tables

    def run_audit(self, config: RunConfig) -> List[VerificationReport]:
        """Consistency audit of stored results, c_5 rotation evidence and the figure configurations."""
        samples = self._samples(config)
        records = self._store(config).load()
        tables = build_tables(records, config.c5_assignment)
        values: Dict[str, float] = {}
        uncertainties: Dict[str, float] = {}
        cn: Dict[str, float] = {}
        for record in records:
            if record.method != "cubature":
                continue
            if record.quantity.startswith("("):
                values[record.quantity] = record.value
                uncertainties[record.quantity] = record.uncertainty
            elif record.quantity in ("c2", "c3", "c4", "c5"):
                cn[record.quantity] = record.value
        complete = all(spec.name in values for spec in region_catalog())

        with console.status("Counting signature rotations..."):
            partition = verify.partition_check(samples, config.seed, threads=config.threads)
        audit = verify.consistency_audit(
            values if complete else None,
            uncertainties=uncertainties if complete else None,
            cn=cn or None,
            counts=partition.details["rotation_counts"],
            tables=tables,
            c5_assignment=config.c5_assignment,
        )
        if not complete:
            console.print("[dim]Cubature values missing for some regions; skipping computed compositions[/dim]")
        reports = [audit, partition, verify.figure1_probe()]
        self._print_reports(reports)
        self._print_audit(audit, reports[2])
        self._write_reports(config, reports)
        failed = [report for report in reports if not report.passed]
        if failed:
            raise VerificationFailure("Consistency audit failed", reports=failed)
        return reports

    def run_catalog(self, config: RunConfig) -> None:
        if config.output_path is not None:
            export_catalog(config.output_path)
            console.print(f"[green]✓[/green] Wrote region catalog to {config.output_path}")
            return
        if validate_format(config.format) == "json":
            console.print(json.dumps(catalog_document(), indent=2, sort_keys=True), markup=False, highlight=False)
            return
        table = Table(title="Integration regions")
        table.add_column("signature", style="bold")
        table.add_column("×", justify="right")
        table.add_column("alias")
        table.add_column("angle bounds")
        table.add_column("ratio bounds")
        for spec in region_catalog():
            table.add_row(
                spec.name,
                str(spec.multiplicity),
                spec.alias,
                "\n".join(bound.to_text() for bound in spec.theta_bounds),
                "\n".join(bound.to_text() for bound in spec.t_bounds),
            )
        console.print(table)
        console.print(f"[dim]c_1 = radial_reduce(1, π) = {float(radial_reduce(1, math.pi)):.15g}[/dim]")

    def run(self, config: RunConfig) -> int:
        """Run the configured command and map failures to exit codes."""
        commands = {
            "regions": self.run_regions,
            "mc-integrate": self.run_mc_integrate,
            "simulate": self.run_simulate,
            "verify": self.run_verify,
            "report": self.run_report,
            "audit": self.run_audit,
            "catalog": self.run_catalog,
        }
        try:
            commands[config.command](config)
        except VerificationFailure as e:
            e.print()
            return e.exit_code
        except UnscathedError as e:
            console.print(f"[red]Error:[/red] {e.message}")
            return e.exit_code
        return EXIT_OK

    # -- output --------------------------------------------------------------

    def _print_reports(self, reports: List[VerificationReport]) -> None:
        table = Table(title="Verification")
        table.add_column("check", style="bold")
        table.add_column("samples", justify="right")
        table.add_column("result")
        for report in reports:
            table.add_row(
                report.check,
                "" if report.samples is None else f"{report.samples:,}",
                "[green]pass[/green]" if report.passed else "[red]FAIL[/red]",
            )
        console.print(table)

    def _print_audit(self, audit: VerificationReport, figures: VerificationReport) -> None:
        tao_wu = audit.details["tao_wu_c3"]
        console.print(
            f"Literature c_3 recomputed from its printed terms: {tao_wu['recomputed']:.9f} "
            f"(printed {tao_wu['printed']}), downstream P ≈ {tao_wu['downstream_P']:.6f}"
        )
        coefficients = audit.details.get("c5_coefficients")
        if coefficients:
            console.print(f"c_5 rotation counts support the '{coefficients['supports']}' coefficient assignment")
        right = figures.details["right"]
        console.print(
            f"Right figure configuration {right['signature']}: shoots origin {right['shoots_origin']}, "
            f"failing pairs {right['failing_pairs']}, in X: {right['in_region_x']}"
        )
        largest = audit.details.get("largest_discrepancy")
        if largest:
            console.print(
                f"Largest cross-method discrepancy: {largest['quantity']} at {largest['sigmas']:.2f}σ"
            )

    def _write_reports(self, config: RunConfig, reports: List[VerificationReport]) -> None:
        if config.output_path is None:
            return
        document = [report.model_dump(mode="json") for report in reports]
        self._write_text(config.output_path, json.dumps(document, indent=2, sort_keys=True))

    @staticmethod
    def _write_text(path: Path, text: str) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")
        except OSError as e:
            raise StorageError(f"Failed to write {path}: {e}")
