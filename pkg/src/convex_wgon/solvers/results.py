from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from convex_wgon.core.weights import WeightValue


# ==========================
# Data classes
# ==========================

@dataclass
class Solution:
    """
    One optimal (or candidate) convex polygon.

    ``polygon`` is a CCW tuple of point indices starting at its bottommost
    vertex; ``valid`` records whether post-checks passed.
    """
    polygon: Tuple[int, ...]
    value: WeightValue
    weight: str
    algorithm: str
    valid: bool = True
    stats: Dict[str, Any] = field(default_factory=dict)
    outliers: Optional[Tuple[int, ...]] = None
    coverage: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.polygon)


@dataclass
class MinchResult:
    """
    Hull after discarding outliers.

    For MinCH ``hull_size`` is the objective; for the budget variant ``value``
    holds the polygon weight that met the budget.
    """
    hull_size: int
    polygon: Tuple[int, ...]
    coverage: int
    outliers: Tuple[int, ...]
    feasible: bool
    algorithm: str = "baseline"
    value: Optional[WeightValue] = None
    stats: Dict[str, Any] = field(default_factory=dict)
