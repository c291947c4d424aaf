"""Run reports: JSON document and Markdown summary"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from jinja2 import Template

from . import __version__
from .geometry import CertReport, Status

SUMMARY_TEMPLATE = """\
# prym {{ report.command }}

- prime: {{ report.config.prime }}
- verdict: **{{ report.verdict }}**
{%- if report.model %}
- u3 reading: {{ report.model.convention }}
{%- endif %}
{%- if report.error %}
- error: {{ report.error.type }}: {{ report.error.message }}
{%- endif %}

| stage | check | status | detail |
|---|---|---|---|
{%- for stage, checks in report.stages.items() %}
{%- for check in checks %}
| {{ stage }} | {{ check.name }} | {{ check.status }} | {{ check.detail }} |
{%- endfor %}
{%- endfor %}
{% if report.ks %}
## Kodaira-Spencer matrix

{{ report.ks.shape[0] }} rows ({{ report.ks.n_family }} from the family), rank {{ report.ks.rank }} of {{ report.ks.max_rank }}.
Trivial rows alone: gl(3) rank {{ report.ks.trivial_ranks.gl3 }}, sl(5) rank {{ report.ks.trivial_ranks.sl5 }}, together {{ report.ks.trivial_ranks.joint }}.
{% if report.ks.verdict == "pass" %}
The rank is maximal over F_{{ report.config.prime }}. The matrix comes from integral data, so its rank over Q is at
least its rank mod p; maximal rank in characteristic 0 follows, and the Kodaira-Spencer map is surjective at
the test point. Hence the family dominates the moduli space of genus 5 curves.
{% endif %}
{%- endif %}
"""


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    model: Optional[Dict[str, Any]] = None
    stages: Dict[str, CertReport] = field(default_factory=dict)
    canonical: Optional[Dict[str, Any]] = None
    dimensions: Optional[Dict[str, int]] = None
    ks: Optional[Dict[str, Any]] = None
    timings: Dict[str, float] = field(default_factory=dict)
    error: Optional[Dict[str, str]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def add_stage(self, name: str, report: CertReport) -> None:
        self.stages[name] = report

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return Status.FAIL.value
        statuses = [r.verdict for r in self.stages.values()]
        if self.ks is not None and self.ks.get("verdict") != "pass":
            return Status.FAIL.value
        if any(s == Status.FAIL for s in statuses):
            return Status.FAIL.value
        if any(s == Status.INCONCLUSIVE for s in statuses):
            return Status.INCONCLUSIVE.value
        return Status.PASS.value

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == Status.PASS.value else 1

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        data = {
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "model": self.model,
            "stages": {name: r.to_dict() for name, r in self.stages.items()},
            "canonical": self.canonical,
            "dimensions": self.dimensions,
            "ks": self.ks,
            "error": self.error,
            "verdict": self.verdict,
        }
        data.update(self.extra)
        if timings:
            data["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return data

    def to_json(self, indent: int = 2, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=indent, sort_keys=True, default=str)


def write_report(report: Report, path: Path, indent: int = 2) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json(indent) + "\n")
    return path


def render_summary(report: Report, template_path: Optional[Path] = None) -> str:
    """Markdown summary of a report; a custom jinja2 template may be supplied."""
    source = Path(template_path).read_text() if template_path else SUMMARY_TEMPLATE
    data = report.to_dict()
    data["stages"] = {name: [c.to_dict() for c in r.checks] for name, r in report.stages.items()}
    return Template(source).render(report=data)


def batch_document(reports: List[Report]) -> Dict[str, Any]:
    """Combined document for several random runs."""
    runs = [r.to_dict() for r in reports]
    passed = sum(1 for r in reports if r.verdict == Status.PASS.value)
    return {"runs": runs, "passed": passed, "total": len(reports),
            "verdict": Status.PASS.value if reports and passed == len(reports) else Status.FAIL.value}
