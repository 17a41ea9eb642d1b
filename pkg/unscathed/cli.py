"""CLI interface for unscathed."""

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer

try:  # newer typer vendors its own click; catch the exceptions it raises
    from typer import _click as click
except ImportError:
    import click
from pydantic import ValidationError as PydanticValidationError
from rich.traceback import install

from . import console as console_module
from .console import console
from .exceptions import EXIT_USAGE, UnscathedError, ValidationError
from .manager import RunManager
from .models import Command, RunConfig
from .validators import validate_format, validate_samples, validate_threads

# Install rich traceback handler
install(show_locals=False)

app = typer.Typer(
    name="unscathed",
    help="Compute the probability that a random sniper in the plane is left unscathed.",
    add_completion=True,
)

CONFIG_OPTION = typer.Option(None, "--config", help="JSON run configuration; flags override its values")
SEED_OPTION = typer.Option(None, "--seed", help="64-bit master seed")
SAMPLES_OPTION = typer.Option(None, "-n", "--samples", help="Number of samples")
THREADS_OPTION = typer.Option(None, "-j", "--threads", envvar="UNSCATHED_THREADS", help="Worker threads")
RESULTS_OPTION = typer.Option(None, "--results", help="JSON-lines results file")
OUTPUT_OPTION = typer.Option(None, "-o", "--output", help="Write the output to this file")
C5_OPTION = typer.Option(None, "--c5", help="Five-point coefficient assignment: printed or table-consistent")


def complete_signature(incomplete: str) -> List[str]:
    """Completion function for region signatures."""
    from .regions import region_catalog

    names = [",".join(spec.signature) for spec in region_catalog()]
    return [name for name in names if name.startswith(incomplete)]


SIGNATURE_OPTION = typer.Option(
    None,
    "-s",
    "--signature",
    help="Region signature such as I,IV or an alias; repeatable",
    autocompletion=complete_signature,
)


def load_config(command: Command, path: Optional[Path], **overrides: Any) -> RunConfig:
    """Merge a JSON config file with the flags that were given on the command line."""
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"Cannot read config file {path}: {e}")
        if not isinstance(data, dict):
            raise ValidationError(f"Config file {path} must hold a JSON object")
    data.update({key: value for key, value in overrides.items() if value not in (None, [])})
    data["command"] = command
    try:
        config = RunConfig.model_validate(data)
    except PydanticValidationError as e:
        raise ValidationError(f"Invalid configuration: {e}")
    if config.samples is not None:
        validate_samples(config.samples)
    validate_threads(config.threads)
    validate_format(config.format)
    return config


def _execute(command: Command, path: Optional[Path], **overrides: Any) -> None:
    try:
        config = load_config(command, path, **overrides)
    except UnscathedError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        raise typer.Exit(e.exit_code)
    raise typer.Exit(RunManager().run(config))


def version_callback(value: bool) -> None:
    """Show version information."""
    if value:
        from . import __version__

        console.print(f"unscathed version {__version__}")
        raise typer.Exit()


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
    quiet_flag: bool = typer.Option(
        False,
        "-q",
        "--quiet",
        help="Minimal output",
    ),
    verbose_flag: bool = typer.Option(
        False,
        "-v",
        "--verbose",
        help="Show tracebacks with local variables",
    ),
) -> None:
    """unscathed: the probability that a random sniper is left unscathed."""
    console_module.quiet = quiet_flag
    console_module.verbose = verbose_flag

    if quiet_flag:
        console.quiet = True
    if verbose_flag:
        install(show_locals=True)

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


@app.command()
def regions(
    signature: Optional[List[str]] = SIGNATURE_OPTION,
    abs_tol: Optional[float] = typer.Option(None, "--abs-tol", help="Absolute error bound per region"),
    rel_tol: Optional[float] = typer.Option(None, "--rel-tol", help="Relative error bound per region"),
    max_evaluations: Optional[int] = typer.Option(None, "--max-evaluations", help="Evaluation budget per region"),
    threads: Optional[int] = THREADS_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Integrate regions by adaptive cubature (all two- to four-point regions by default)."""
    _execute(
        "regions",
        config,
        signatures=signature,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        max_evaluations=max_evaluations,
        threads=threads,
        results_path=results,
    )


@app.command("mc-integrate")
def mc_integrate(
    signature: Optional[List[str]] = SIGNATURE_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Integrate regions by plain Monte Carlo (all twelve by default)."""
    _execute(
        "mc-integrate",
        config,
        signatures=signature,
        samples=samples,
        seed=seed,
        threads=threads,
        results_path=results,
    )


@app.command()
def simulate(
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    early: bool = typer.Option(False, "--early", help="Estimate P with early cutoff"),
    threads: Optional[int] = THREADS_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Estimate P, c_2..c_5 and region values by simulating the Poisson process."""
    _execute(
        "simulate",
        config,
        samples=samples,
        seed=seed,
        early=early or None,
        threads=threads,
        results_path=results,
    )


@app.command()
def verify(
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    abs_tol: Optional[float] = typer.Option(None, "--abs-tol", help="Tolerance of the Cartesian c_2 integral"),
    threads: Optional[int] = THREADS_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Run every cross-check of the regions, areas and estimators."""
    _execute(
        "verify",
        config,
        samples=samples,
        seed=seed,
        abs_tol=abs_tol,
        threads=threads,
        results_path=results,
        output_path=output,
    )


@app.command()
def report(
    fmt: Optional[str] = typer.Option(None, "-f", "--format", help="markdown, csv or json"),
    c5: Optional[str] = C5_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Assemble tables of P, c_n and region values from stored results."""
    _execute(
        "report",
        config,
        format=fmt.lower() if fmt is not None else None,
        c5_assignment=c5,
        results_path=results,
        output_path=output,
    )


@app.command()
def audit(
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    c5: Optional[str] = C5_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    results: Optional[Path] = RESULTS_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Check the stored tables for internal consistency."""
    _execute(
        "audit",
        config,
        samples=samples,
        seed=seed,
        c5_assignment=c5,
        threads=threads,
        results_path=results,
        output_path=output,
    )


@app.command()
def catalog(
    fmt: Optional[str] = typer.Option(None, "-f", "--format", help="markdown (table) or json"),
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Show the integration regions with their bounds."""
    _execute("catalog", None, format=fmt.lower() if fmt is not None else None, output_path=output)


def main() -> None:
    """Console entry point; usage errors exit with 64."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        console.print("[red]Aborted.[/red]")
        sys.exit(130)
    except UnscathedError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        sys.exit(e.exit_code)
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
