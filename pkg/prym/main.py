"""Main CLI entry point for prym"""

import json
from pathlib import Path
from typing import Any, Callable, Optional, Tuple

import typer
from rich.align import Align
from rich.console import Console
from rich.panel import Panel
from rich.text import Text

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # dotenv is optional

from prym import __version__
from prym import config
from prym import pipeline
from prym.errors import PrymError
from prym.report import Report, batch_document, render_summary, write_report

app = typer.Typer(
    name="prym",
    help="Exact certificates that six-nodal quartic surfaces dominate the moduli of genus 5 curves",
    add_completion=False,
    invoke_without_command=True,
)

console = Console()


def _render_logo() -> None:
    console.print(
        Panel(
            Align.center(Text(f"prym {__version__}  ·  nodal quartics → M_5", style="bold cyan")),
            border_style="cyan",
        )
    )


def _settings(command: str, **overrides) -> pipeline.RunConfig:
    """Config file values, overridden by whatever was passed on the command line."""
    run = config.get_run_config()
    values = {
        "prime": run["prime"],
        "seed": run["seed"],
        "max_tries": run["max_tries"],
        "convention": run["convention"],
        "debug": run["debug"],
        "trials": run["trials"],
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return pipeline.RunConfig(command=command, **values)


def _emit(report: Report, code: int, output: Optional[Path], summary: Optional[Path], quiet: bool) -> None:
    out_cfg = config.get_output_config()
    if not quiet:
        pipeline.print_checks(report)
    if output:
        write_report(report, output, out_cfg["indent"])
        if not quiet:
            console.print(f"[green][OK][/green] Report written to {output}")
    elif not quiet:
        console.print_json(report.to_json(out_cfg["indent"]))
    if summary:
        template = out_cfg["summary_template"]
        Path(summary).write_text(render_summary(report, Path(template) if template else None))
        if not quiet:
            console.print(f"[green][OK][/green] Summary written to {summary}")
    raise typer.Exit(code)


def _checked(run: Callable[[], Any]) -> Any:
    """Run a command body; errors become an [ERROR] line and their exit code."""
    try:
        return run()
    except PrymError as exc:
        console.print(f"[red][ERROR][/red] {type(exc).__name__}: {exc}")
        raise typer.Exit(exc.exit_code)
    except typer.Exit:
        raise
    except Exception as exc:  # internal error: report it without a traceback
        console.print(f"[red][ERROR][/red] internal error: {type(exc).__name__}: {exc}")
        raise typer.Exit(2)


def _guarded(run: Callable[[], Tuple[Report, int]], output, summary, quiet) -> None:
    report, code = _checked(run)
    _emit(report, code, output, summary, quiet)


OutputOpt = typer.Option(None, "--output", "-o", help="Write the JSON report to this file")
SummaryOpt = typer.Option(None, "--summary", help="Write a Markdown summary to this file")
ConventionOpt = typer.Option(None, "--convention", help="Reading of the printed u3: auto, u3=half or u3=full")
QuietOpt = typer.Option(False, "--quiet", "-q", help="Only print errors")
DebugOpt = typer.Option(None, "--debug/--no-debug", help="Check every first-order result against the base computation")


@app.command("verify-paper")
def verify_paper(
    prime: Optional[int] = typer.Option(None, "--prime", help="Prime of the fixture (must be 101)"),
    convention: Optional[str] = ConventionOpt,
    output: Optional[Path] = OutputOpt,
    summary: Optional[Path] = SummaryOpt,
    debug: Optional[bool] = DebugOpt,
    quiet: bool = QuietOpt,
):
    """Certify the embedded F_101 test point: geometry, canonical model and rank(M_F) = 45."""
    _guarded(lambda: pipeline.cmd_verify_paper(_settings("verify-paper", prime=prime, convention=convention,
                                                          debug=debug, quiet=quiet)),
             output, summary, quiet)


@app.command()
def certify(
    input: Path = typer.Option(..., "--input", "-i", help="Model JSON: prime, nodes, u2, u3, u4"),
    convention: Optional[str] = ConventionOpt,
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for randomized reducedness checks"),
    output: Optional[Path] = OutputOpt,
    summary: Optional[Path] = SummaryOpt,
    debug: Optional[bool] = DebugOpt,
    quiet: bool = QuietOpt,
):
    """Run the full pipeline on a model file."""
    _guarded(lambda: pipeline.cmd_certify(_settings("certify", input_path=str(input), convention=convention,
                                                    seed=seed, debug=debug, quiet=quiet)),
             output, summary, quiet)


@app.command()
def random(
    prime: Optional[int] = typer.Option(None, "--prime", help="Field characteristic"),
    seed: Optional[int] = typer.Option(None, "--seed", help="First seed"),
    max_tries: Optional[int] = typer.Option(None, "--max-tries", help="Quartics to draw before giving up"),
    runs: int = typer.Option(1, "--runs", help="Certify this many consecutive seeds"),
    output: Optional[Path] = OutputOpt,
    summary: Optional[Path] = SummaryOpt,
    debug: Optional[bool] = DebugOpt,
    quiet: bool = QuietOpt,
):
    """Draw a random quartic singular at the six nodes and certify it."""
    settings = lambda: _settings("random", prime=prime, seed=seed, max_tries=max_tries, runs=runs,
                                 debug=debug, quiet=quiet)
    if runs <= 1:
        _guarded(lambda: pipeline.cmd_random(settings()), output, summary, quiet)
        return
    reports, code = _checked(lambda: pipeline.cmd_random_batch(settings()))
    if output:
        indent = config.get_output_config()["indent"]
        Path(output).write_text(json.dumps(batch_document(reports), indent=indent, sort_keys=True, default=str) + "\n")
    raise typer.Exit(code)


@app.command()
def stage(
    name: str = typer.Argument(..., help="discriminant, canonical, ks-rank or dimensions"),
    input: Optional[Path] = typer.Option(None, "--input", "-i", help="Model JSON (defaults to the F_101 test point)"),
    convention: Optional[str] = ConventionOpt,
    output: Optional[Path] = OutputOpt,
    debug: Optional[bool] = DebugOpt,
    quiet: bool = QuietOpt,
):
    """Run a single pipeline stage for inspection."""
    _guarded(lambda: pipeline.cmd_stage(_settings("stage", input_path=str(input) if input else None,
                                                  convention=convention, debug=debug, quiet=quiet), name),
             output, None, quiet)


def config_command(
    init: bool = typer.Option(False, "--init", help="Create a new prym.yaml file"),
    set_: Tuple[str, str] = typer.Option((None, None), "--set", help="KEY VALUE using dot notation, e.g. --set run.seed 3"),
):
    """View or manage your prym.yaml configuration."""
    key, value = set_
    if init:
        config.init_config()
    elif key is not None:
        config.set_config(key, value)
    else:
        config.view_config()


app.command("config")(config_command)


@app.callback()
def main(ctx: typer.Context):
    """prym: certify that six-nodal quartics dominate genus-5 moduli"""
    if ctx.invoked_subcommand is None:
        _render_logo()
        console.print(ctx.get_help())


def cli():
    """Entry point for setuptools."""
    app()


if __name__ == "__main__":
    cli()
