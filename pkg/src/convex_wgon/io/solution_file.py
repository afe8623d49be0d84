"""
SolutionFile: the JSON artifact written by ``wgon solve`` and ``wgon oracle``.

Twice-area stays an exact integer (``value_twice_area``); the decimal
``area`` next to it is for display only.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from convex_wgon import __version__
from convex_wgon.core.geom import PointSet
from convex_wgon.core.weights import OBJECTIVES as POLYGON_OBJECTIVES, WeightId
from convex_wgon.errors import ParameterError
from convex_wgon.solvers.results import MinchResult, Solution

SCHEMA = "convex-wgon-solution/1"

OBJECTIVES = tuple(POLYGON_OBJECTIVES) + ("minch", "budget")


def build_solution_file(
    objective: str,
    result: Union[Solution, MinchResult],
    P: PointSet,
    *,
    weight: str,
    w: Optional[int] = None,
    budget: Optional[float] = None,
    instance_checksum: Optional[str] = None,
    perturbation: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    if objective not in OBJECTIVES:
        raise ParameterError(f"Unknown objective {objective!r}; expected one of {list(OBJECTIVES)}")
    weight_id, _, rest = weight.partition("/")
    direction, _, mode = rest.partition("/")
    doc: Dict[str, Any] = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "objective": objective,
        "weight": weight_id,
        "direction": direction or None,
        "empty": mode == "EMPTY",
        "w": w,
        "budget": budget,
        "algorithm": result.algorithm,
        "polygon": list(result.polygon),
        "polygon_points": [list(P[k].as_tuple()) for k in result.polygon],
        "stats": copy.deepcopy(result.stats),
        "instance_checksum": instance_checksum,
        "perturbation": perturbation,
    }

    if isinstance(result, MinchResult):
        doc.update(
            {
                "value": result.hull_size if objective == "minch" else result.value,
                "hull_size": result.hull_size,
                "coverage": result.coverage,
                "outliers": list(result.outliers),
                "feasible": result.feasible,
                "valid": result.feasible,
            }
        )
        budget_value = result.value
    else:
        doc.update(
            {
                "value": result.value,
                "hull_size": result.size,
                "coverage": result.coverage,
                "outliers": list(result.outliers) if result.outliers is not None else None,
                "feasible": True,
                "valid": result.valid,
            }
        )
        budget_value = result.value

    if weight_id == WeightId.AREA2.value and budget_value is not None:
        doc["value_twice_area"] = int(budget_value)
        doc["area"] = int(budget_value) / 2
    return doc


def to_json_text(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def write_solution_file(doc: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json_text(doc), encoding="utf-8")
    return path


def read_solution_file(path: Union[str, Path]) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def strip_timings(doc: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of ``doc`` without wall-clock fields, for determinism comparisons."""
    out = copy.deepcopy(doc)
    stats = out.get("stats") or {}
    out["stats"] = {k: v for k, v in stats.items() if not k.endswith("_s")}
    return out
