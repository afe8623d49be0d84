"""
Data-parallel execution over independent work items (bottom vertices, subset prefixes).

Results always come back in input order, so callers reduce them with the same
ordered fold as the sequential path.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Sequence, TypeVar

from joblib import Parallel, delayed

from convex_wgon.utils.get_paths import get_default_threads

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_jobs(n_jobs: Optional[int]) -> int:
    if n_jobs is None:
        return get_default_threads()
    return max(1, int(n_jobs))


def ordered_map(
    fn: Callable[..., R],
    items: Sequence[T],
    *args,
    n_jobs: Optional[int] = 1,
) -> List[R]:
    """
    fn(item, *args) for every item, in item order.

    n_jobs == 1 runs inline; larger values use joblib's process pool.
    """
    jobs = resolve_jobs(n_jobs)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item, *args) for item in items]
    logger.debug("Dispatching %d items over %d workers", len(items), jobs)
    return list(Parallel(n_jobs=jobs)(delayed(fn)(item, *args) for item in items))
