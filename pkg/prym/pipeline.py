"""Certification pipeline behind the CLI commands"""

import time
import traceback
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from .canonical import canonical_curve, certify_smooth_ci
from .errors import InputError, MathematicalFailure, PrymError, exit_code_for
from .fixtures import load_model, paper_model
from .geometry import CertReport, QuarticModel, Status, certify_model, certify_sextic_nodes, dimension_ladder, random_quartic
from .kodaira import MAX_RANK, KSCertificate, KSOptions, assemble_and_rank, tangent_space_B0
from .polys import format_poly
from .report import Report
from .scalars import Prime, RNG_NAME, make_rng

console = Console()

STAGES = ("discriminant", "canonical", "ks-rank", "dimensions")


@dataclass
class RunConfig:
    command: str
    prime: int = 101
    seed: int = 0
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    convention: str = "auto"
    max_tries: int = 50
    runs: int = 1
    trials: int = 8
    debug: bool = False
    quiet: bool = False

    def __post_init__(self):
        Prime(self.prime)

    def echo(self) -> Dict:
        data = asdict(self)
        data.pop("quiet")
        data.pop("output_path")
        data["rng"] = RNG_NAME
        return data


class _Printer:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def __call__(self, message: str):
        if not self.quiet:
            console.print(message)


@contextmanager
def _stage(report: Report, name: str, say: _Printer):
    say(f"[bold][>] {name}[/bold]")
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    report.timings[name] = elapsed
    stage = report.stages.get(name)
    if stage is None:
        say(f"[green][OK][/green] {name} [dim]({elapsed:.2f}s)[/dim]")
    elif stage.passed:
        say(f"[green][OK][/green] {name}: {len(stage.checks)} checks passed [dim]({elapsed:.2f}s)[/dim]")
    else:
        names = ", ".join(c.name for c in stage.failed())
        say(f"[red][FAIL][/red] {name}: {names} [dim]({elapsed:.2f}s)[/dim]")


def _record_failure(report: Report, exc: BaseException):
    report.error = {"type": type(exc).__name__, "message": str(exc), "exit_code": exit_code_for(exc)}
    if not isinstance(exc, PrymError):
        report.error["traceback"] = traceback.format_exc(limit=5)


def run_full(model: QuarticModel, report: Report, config: RunConfig,
             cert: Optional[KSCertificate] = None) -> Report:
    """Every certificate and the rank computation for one model.

    A certificate already computed for this model with the same options is
    reported as is.
    """
    say = _Printer(config.quiet)
    rng = make_rng(config.seed)
    report.model = model.to_dict()
    try:
        with _stage(report, "geometry", say):
            report.add_stage("geometry", certify_model(model, rng, config.trials))
        with _stage(report, "canonical", say):
            curve = canonical_curve(model)
            report.canonical = curve.to_dict()
            report.add_stage("canonical", certify_smooth_ci(curve))
        with _stage(report, "dimensions", say):
            tangent = tangent_space_B0(model)
            report.dimensions = _dimensions(model, len(tangent))
            report.add_stage("dimensions", _dimension_checks(report.dimensions))
        with _stage(report, "ks-rank", say):
            if cert is None:
                cert = assemble_and_rank(model, KSOptions(seed=config.seed, debug=config.debug), curve, tangent)
            report.ks = cert.to_dict()
            say(f"[dim]M_F is {cert.matrix.shape[0]}x{cert.matrix.shape[1]}, rank {cert.rank}[/dim]")
    except MathematicalFailure as exc:
        say(f"[red][FAIL][/red] {type(exc).__name__}: {exc}")
        _record_failure(report, exc)
    return report


def _dimensions(model: QuarticModel, tangent_dim: int) -> Dict[str, int]:
    ladder = dimension_ladder(model.nodes)
    ladder["tangent_dimension"] = tangent_dim
    return ladder


def _dimension_checks(ladder: Dict[str, int]) -> CertReport:
    report = CertReport()
    expected = {
        "quartics_singular_at_five_nodes": 15,
        "quartics_singular_at_six_nodes": 11,
        "conditions_from_p0": 4,
        "family_dimension": 13,
        "tangent_dimension": 13,
    }
    for key, value in expected.items():
        report.add(f"dimensions.{key}", ladder[key] == value, f"{ladder[key]} (expected {value})")
    return report


def _new_report(config: RunConfig) -> Report:
    return Report(command=config.command, config=config.echo())


def _build_model(report: Report, build: Callable[[], QuarticModel], say: _Printer) -> Optional[QuarticModel]:
    """Run `build`; a quartic that is not a six-nodal model becomes a failed `model` check."""
    try:
        return build()
    except MathematicalFailure as exc:
        stage = CertReport()
        stage.add("model.construction", False, f"{type(exc).__name__}: {exc}")
        report.add_stage("model", stage)
        say(f"[red][FAIL][/red] model: {type(exc).__name__}: {exc}")
        _record_failure(report, exc)
        return None


def cmd_verify_paper(config: RunConfig) -> Tuple[Report, int]:
    """Certify the embedded F_101 test point."""
    say = _Printer(config.quiet)
    report = _new_report(config)
    model = _build_model(report, lambda: paper_model(config.prime, config.convention), say)
    if model is not None:
        say(f"[dim]u3 reading resolved to '{model.convention}'[/dim]")
        run_full(model, report, config)
    return report, report_exit_code(report)


def cmd_certify(config: RunConfig) -> Tuple[Report, int]:
    if not config.input_path:
        raise InputError("certify needs --input model.json")
    report = _new_report(config)
    model = _build_model(report, lambda: load_model(Path(config.input_path), config.convention),
                         _Printer(config.quiet))
    if model is not None:
        run_full(model, report, config)
    return report, report_exit_code(report)


def full_rank_acceptance(options: KSOptions, accepted: Dict[int, KSCertificate]) -> Callable[[QuarticModel], Optional[str]]:
    """Keep a sampled model only if its KS matrix has full rank; the certificate lands in `accepted`."""

    def accept(model: QuarticModel) -> Optional[str]:
        cert = assemble_and_rank(model, options)
        if cert.verdict != Status.PASS.value:
            return f"KS rank {cert.rank} of {MAX_RANK}"
        accepted[model.provenance["tries"]] = cert
        return None

    return accept


def cmd_random(config: RunConfig) -> Tuple[Report, int]:
    report = _new_report(config)
    say = _Printer(config.quiet)
    accepted: Dict[int, KSCertificate] = {}
    accept = full_rank_acceptance(KSOptions(seed=config.seed, debug=config.debug), accepted)
    try:
        with _stage(report, "sample", say):
            model, _ = random_quartic(Prime(config.prime), config.seed, config.max_tries,
                                      trials=config.trials, accept=accept)
        rejected = model.provenance.get("rejected", [])
        say(f"[dim]seed {config.seed}: accepted after {model.provenance['tries']} tries "
            f"({len(rejected)} rejected)[/dim]")
    except MathematicalFailure as exc:
        say(f"[red][FAIL][/red] {exc}")
        _record_failure(report, exc)
        return report, 1
    run_full(model, report, config, cert=accepted.get(model.provenance["tries"]))
    return report, report_exit_code(report)


def cmd_random_batch(config: RunConfig) -> Tuple[List[Report], int]:
    """Certify `runs` consecutive seeds starting at config.seed."""
    reports = []
    for offset in range(config.runs):
        run_config = RunConfig(**{**asdict(config), "seed": config.seed + offset, "runs": 1})
        report, _ = cmd_random(run_config)
        reports.append(report)
    if not config.quiet:
        table = Table(title="random runs")
        table.add_column("seed", justify="right")
        table.add_column("tries", justify="right")
        table.add_column("rank", justify="right")
        table.add_column("verdict")
        for r in reports:
            tries = (r.model or {}).get("provenance", {}).get("tries", "-")
            rank = (r.ks or {}).get("rank", "-")
            style = "green" if r.verdict == Status.PASS.value else "red"
            table.add_row(str(r.config["seed"]), str(tries), str(rank), f"[{style}]{r.verdict}[/{style}]")
        console.print(table)
    code = 0 if all(r.verdict == Status.PASS.value for r in reports) else 1
    return reports, code


def _stage_model(config: RunConfig) -> QuarticModel:
    if config.input_path:
        return load_model(Path(config.input_path), config.convention)
    return paper_model(config.prime, config.convention)


def cmd_stage(config: RunConfig, stage: str) -> Tuple[Report, int]:
    """Run one stage on a model file (or the embedded test point)."""
    if stage not in STAGES:
        raise InputError(f"unknown stage {stage!r}; choose from {', '.join(STAGES)}")
    say = _Printer(config.quiet)
    report = _new_report(config)
    report.extra["stage"] = stage
    model = _stage_model(config)
    report.model = model.to_dict()
    try:
        with _stage(report, stage, say):
            if stage == "discriminant":
                report.add_stage(stage, certify_sextic_nodes(model.f, model.sextic_nodes, (model.u2, model.u3, model.u4),
                                                             make_rng(config.seed), config.trials))
                say(f"f = {format_poly(model.f)}")
                say("nodes: " + " ".join(str(q) for q in model.sextic_nodes))
            elif stage == "canonical":
                curve = canonical_curve(model)
                report.canonical = curve.to_dict()
                report.add_stage(stage, certify_smooth_ci(curve))
                for i, h in enumerate(curve.quadrics, start=1):
                    say(f"H{i} = {format_poly(h)}")
            elif stage == "ks-rank":
                cert = assemble_and_rank(model, KSOptions(seed=config.seed, debug=config.debug))
                report.ks = {"rank": cert.rank, "max_rank": cert.to_dict()["max_rank"],
                             "n_family": cert.n_family, "verdict": cert.verdict}
                say(f"rank {cert.rank}")
            else:
                report.dimensions = _dimensions(model, len(tangent_space_B0(model)))
                report.add_stage(stage, _dimension_checks(report.dimensions))
    except MathematicalFailure as exc:
        _record_failure(report, exc)
    return report, report_exit_code(report)


def report_exit_code(report: Report) -> int:
    if report.error is not None:
        return report.error["exit_code"]
    return report.exit_code


def print_checks(report: Report) -> None:
    """Final verdict table."""
    table = Table(title=f"prym {report.command}")
    table.add_column("Stage", style="bold cyan")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Detail", style="dim")
    colors = {Status.PASS: "green", Status.FAIL: "red", Status.INCONCLUSIVE: "yellow"}
    for stage, cert in report.stages.items():
        for check in cert.checks:
            color = colors[check.status]
            table.add_row(stage, check.name, f"[{color}]{check.status.value}[/{color}]", check.detail)
    console.print(table)
    if report.ks:
        console.print(f"[bold]rank(M_F)[/bold] = {report.ks['rank']} / {report.ks['max_rank']}")
    if report.error:
        console.print(f"[red][ERROR][/red] {report.error['type']}: {report.error['message']}")
    style = "green" if report.verdict == Status.PASS.value else "red"
    console.print(f"[bold {style}]verdict: {report.verdict}[/bold {style}]")
