"""The F_101 test point and the JSON model format"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .errors import FixtureMismatch, InputError, ModelFormatError
from .geometry import ProjPoint, QuarticModel, model_from_forms, p2_ring, resolve_convention, transform_point
from .polys import parse_poly
from .scalars import Prime, PrimeField

DATA_DIR = Path(__file__).parent / "data"
PAPER_POINT = DATA_DIR / "paper_point.yaml"


def load_paper_data() -> Dict[str, Any]:
    with open(PAPER_POINT, "r") as f:
        return yaml.safe_load(f)


def paper_nodes(field_: PrimeField) -> List[ProjPoint]:
    return [ProjPoint.of(c, field_) for c in load_paper_data()["nodes"]]


def paper_sextic_nodes(field_: PrimeField) -> List[ProjPoint]:
    return [ProjPoint.of(c, field_) for c in load_paper_data()["sextic_nodes"]]


def _convention(value: str) -> str:
    value = (value or "auto").strip().lower()
    if value.startswith("u3="):
        value = value[3:]
    if value not in ("auto", "half", "full"):
        raise ModelFormatError(f"unknown u3 convention {value!r} (use auto, half or full)")
    return value


def model_from_data(data: Dict[str, Any], convention: str = "auto",
                    expected_sextic_nodes: Optional[List[List[int]]] = None) -> QuarticModel:
    """Build a model from {"prime", "nodes", "u2", "u3", "u4"}."""
    missing = [k for k in ("prime", "nodes", "u2", "u3", "u4") if k not in data]
    if missing:
        raise ModelFormatError(f"model is missing {', '.join(missing)}")
    prime = Prime(data["prime"])
    field_ = PrimeField(prime)
    nodes = data["nodes"]
    if not isinstance(nodes, list) or len(nodes) != 6 or any(not isinstance(n, list) or len(n) != 4 for n in nodes):
        raise ModelFormatError("nodes must be six lists of four integers")
    bad = [c for n in nodes for c in n if isinstance(c, bool) or not isinstance(c, int)]
    if bad:
        raise ModelFormatError(f"node coordinates must be integers, got {bad[0]!r}")
    try:
        points = [ProjPoint.of(n, field_) for n in nodes]
    except (TypeError, ValueError, InputError) as exc:
        raise ModelFormatError(f"bad node coordinates: {exc}") from exc
    ring = p2_ring(field_)
    u2, u3, u4 = (parse_poly(data[k], ring) for k in ("u2", "u3", "u4"))
    convention = _convention(convention)
    provenance = {"source": data.get("source", "input")}
    if convention == "auto":
        if expected_sextic_nodes is None:
            expected = [ProjPoint.of(pt.coords[:3], field_) for pt in points[1:]]
        else:
            expected = [ProjPoint.of(c, field_) for c in expected_sextic_nodes]
        model = resolve_convention(u2, u3, u4, points, prime, expected)
        model.provenance.update(provenance, convention_resolved=True)
        return model
    return model_from_forms(u2, u3, u4, points, prime, convention, provenance)


def paper_model(prime: int = 101, convention: str = "auto") -> QuarticModel:
    data = load_paper_data()
    if int(prime) != data["prime"]:
        raise FixtureMismatch(f"the test point is defined over F_{data['prime']}, not F_{prime}")
    model = model_from_data(dict(data, source="paper_point"), convention, data["sextic_nodes"])
    if [list(q.coords) for q in model.sextic_nodes] != [list(q.coords) for q in paper_sextic_nodes(model.field)]:
        raise FixtureMismatch("projected nodes differ from the listed sextic nodes")
    model.provenance["elided_nodes"] = "P1 = (0:0:1:0), P2 = (0:1:0:0)"
    return model


def load_model(path: Path, convention: str = "auto") -> QuarticModel:
    """Read a model JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ModelFormatError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelFormatError("model JSON must be an object")
    return model_from_data(data, convention)


def model_to_data(model: QuarticModel) -> Dict[str, Any]:
    """Inverse of model_from_data, with u3 always in the half convention."""
    data = model.to_dict()
    data["nodes"] = [list(transform_point(model.transform, n).coords) for n in model.nodes]
    return {k: data[k] for k in ("prime", "nodes", "u2", "u3", "u4")}
