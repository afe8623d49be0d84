"""
Instance files, the seeded generator and deterministic perturbation.

Two formats are supported:

* CSV: an optional ``x,y`` header then one ``x,y`` integer pair per line;
  blank lines and ``#`` comments are ignored. Only the points are stored.
* JSON envelope: ``{"format", "version", "name", "points", "seed",
  "generator", "perturbation"}`` written with sorted keys and two-space
  indentation, so parsing then serializing a canonical file is the identity.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from convex_wgon.core.geom import COORD_BOUND, Point, PointSet, validate_general_position
from convex_wgon.errors import GeneralPositionError, GenerationError, InstanceFormatError, ParameterError

logger = logging.getLogger(__name__)

FORMAT_ID = "convex-wgon-instance"
FORMAT_VERSION = 1
SHAPES = ("uniform", "annulus", "clustered")

_INT_RE = re.compile(r"^[+-]?\d+$")


# ==========================
# Data classes
# ==========================

@dataclass
class InstanceFile:
    name: str
    points: List[Tuple[int, int]]
    seed: Optional[int] = None
    generator: Dict[str, Any] = field(default_factory=dict)
    perturbation: Optional[Dict[str, Any]] = None

    @property
    def n(self) -> int:
        return len(self.points)

    def to_point_set(self, validate: bool = True) -> PointSet:
        return PointSet.from_coords(self.points, validate=validate)

    def checksum(self) -> str:
        """sha256 over the canonical CSV rendering of the points."""
        return "sha256:" + hashlib.sha256(to_csv_text(self).encode("utf-8")).hexdigest()

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT_ID,
            "version": FORMAT_VERSION,
            "name": self.name,
            "points": [[x, y] for x, y in self.points],
            "seed": self.seed,
            "generator": dict(self.generator),
            "perturbation": self.perturbation,
        }


# ==========================
# Parsing
# ==========================

def _parse_int(raw: Any, where: str) -> int:
    text = str(raw).strip()
    if not _INT_RE.match(text):
        raise InstanceFormatError(f"{where}: expected an integer coordinate, got {text!r}")
    value = int(text)
    if abs(value) > COORD_BOUND:
        raise InstanceFormatError(f"{where}: coordinate {value} exceeds |c| <= {COORD_BOUND}")
    return value


def _check_points(points: List[Tuple[int, int]], source: str) -> None:
    if len(points) < 3:
        raise InstanceFormatError(f"{source}: an instance needs at least 3 points, got {len(points)}")


def parse_csv_text(text: str, name: str = "instance") -> InstanceFile:
    try:
        df = pd.read_csv(
            io.StringIO(text),
            header=None,
            dtype=str,
            comment="#",
            skip_blank_lines=True,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise InstanceFormatError(f"{name}: no points found") from None
    except pd.errors.ParserError as exc:
        raise InstanceFormatError(f"{name}: malformed CSV ({exc})") from exc

    if df.shape[1] != 2:
        raise InstanceFormatError(f"{name}: expected 2 columns x,y, got {df.shape[1]}")
    rows = df.fillna("").values.tolist()
    if rows and [str(c).strip().lower() for c in rows[0]] == ["x", "y"]:
        rows = rows[1:]

    points = [
        (_parse_int(x, f"{name} row {k + 1} x"), _parse_int(y, f"{name} row {k + 1} y"))
        for k, (x, y) in enumerate(rows)
    ]
    _check_points(points, name)
    return InstanceFile(name=name, points=points)


def parse_json_text(text: str, name: str = "instance") -> InstanceFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{name}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("points"), list):
        raise InstanceFormatError(f"{name}: JSON envelope must be an object with a 'points' list")
    if raw.get("format", FORMAT_ID) != FORMAT_ID:
        raise InstanceFormatError(f"{name}: unknown format {raw.get('format')!r}")

    points: List[Tuple[int, int]] = []
    for k, pair in enumerate(raw["points"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InstanceFormatError(f"{name} point {k}: expected [x, y], got {pair!r}")
        if any(isinstance(c, bool) or not isinstance(c, int) for c in pair):
            raise InstanceFormatError(f"{name} point {k}: coordinates must be JSON integers, got {pair!r}")
        points.append((_parse_int(pair[0], f"{name} point {k} x"), _parse_int(pair[1], f"{name} point {k} y")))
    _check_points(points, name)

    seed = raw.get("seed")
    return InstanceFile(
        name=str(raw.get("name") or name),
        points=points,
        seed=int(seed) if seed is not None else None,
        generator=dict(raw.get("generator") or {}),
        perturbation=raw.get("perturbation"),
    )


def read_instance(path: Union[str, Path]) -> InstanceFile:
    """Read a .json envelope or a CSV instance (any other suffix)."""
    path = Path(path)
    if not path.exists():
        raise InstanceFormatError(f"Instance file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return parse_json_text(text, name=path.stem)
    return parse_csv_text(text, name=path.stem)


# ==========================
# Serialization
# ==========================

def to_csv_text(inst: InstanceFile) -> str:
    df = pd.DataFrame(inst.points, columns=["x", "y"])
    return df.to_csv(index=False, lineterminator="\n")


def to_json_text(inst: InstanceFile) -> str:
    return json.dumps(inst.to_json_dict(), indent=2, sort_keys=True) + "\n"


def write_instance(inst: InstanceFile, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = to_json_text(inst) if path.suffix.lower() == ".json" else to_csv_text(inst)
    path.write_text(text, encoding="utf-8")
    return path


# ==========================
# Generator
# ==========================

def _direction_keys(accepted: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Reduced directions from cand to every accepted point, sign-normalised."""
    d = accepted - cand
    g = np.gcd(d[:, 0], d[:, 1])
    g[g == 0] = 1
    d = d // g[:, None]
    flip = (d[:, 0] < 0) | ((d[:, 0] == 0) & (d[:, 1] < 0))
    d[flip] *= -1
    return d


def _keeps_general_position(accepted: np.ndarray, cand: np.ndarray) -> bool:
    if len(accepted) == 0:
        return True
    if np.any(np.all(accepted == cand, axis=1)):
        return False
    if len(accepted) == 1:
        return True
    # cand is collinear with two accepted points iff both lie on one line through cand
    keys = _direction_keys(accepted, cand)
    return len(np.unique(keys, axis=0)) == len(keys)


class _Sampler:
    def __init__(self, rng: np.random.Generator, coord_range: int, shape: str, n: int):
        self.rng = rng
        self.coord_range = coord_range
        self.shape = shape
        if shape == "clustered":
            k = max(2, int(math.ceil(n / 10)))
            self.centers = rng.integers(0, coord_range, size=(k, 2))
            self.sigma = max(1.0, coord_range / 20)

    def draw(self) -> np.ndarray:
        r = self.coord_range
        if self.shape == "uniform":
            return self.rng.integers(0, r, size=2)
        if self.shape == "annulus":
            theta = self.rng.uniform(0.0, 2 * math.pi)
            radius = self.rng.uniform(0.35, 0.5) * (r - 1)
            c = (r - 1) / 2
            xy = np.array([c + radius * math.cos(theta), c + radius * math.sin(theta)])
        else:
            center = self.centers[self.rng.integers(0, len(self.centers))]
            xy = center + self.rng.normal(0.0, self.sigma, size=2)
        return np.clip(np.rint(xy), 0, r - 1).astype(np.int64)


def gen(
    n: int,
    seed: int,
    coord_range: int = 100,
    shape: str = "uniform",
    max_rejections: int = 100_000,
) -> InstanceFile:
    """
    n points with coordinates in [0, coord_range), in general position.

    Points are drawn one at a time and rejected when they duplicate an earlier
    point or close a collinear triple. Deterministic from ``seed``.
    """
    if not isinstance(n, int) or n < 3:
        raise ParameterError(f"gen needs n >= 3, got {n!r}")
    if not isinstance(coord_range, int) or coord_range < 1 or coord_range > COORD_BOUND:
        raise ParameterError(f"coord_range must lie in [1, {COORD_BOUND}], got {coord_range!r}")
    if shape not in SHAPES:
        raise ParameterError(f"Unknown shape {shape!r}; expected one of {SHAPES}")
    if coord_range * coord_range < n:
        raise GenerationError(f"[0, {coord_range})^2 holds fewer than n={n} lattice points")

    rng = np.random.default_rng(seed)
    sampler = _Sampler(rng, coord_range, shape, n)
    accepted = np.empty((0, 2), dtype=np.int64)
    rejections = 0
    while len(accepted) < n:
        cand = sampler.draw()
        if _keeps_general_position(accepted, cand):
            accepted = np.vstack([accepted, cand])
            continue
        rejections += 1
        if rejections > max_rejections:
            raise GenerationError(
                f"Could not place {n} points in general position in [0, {coord_range})^2 "
                f"({shape}) after {max_rejections} rejections; {len(accepted)} placed"
            )

    points = [(int(x), int(y)) for x, y in accepted]
    logger.debug("gen n=%d seed=%s shape=%s rejections=%d", n, seed, shape, rejections)
    return InstanceFile(
        name=f"{shape}_n{n}_s{seed}",
        points=points,
        seed=seed,
        generator={
            "coord_range": coord_range,
            "n": n,
            "rejections": rejections,
            "shape": shape,
        },
    )


# ==========================
# Perturbation
# ==========================

def _hash_offset(seed: int, round_: int, x: int, y: int, copy: int = 0) -> Tuple[int, int]:
    """Offsets keyed on the coordinate pair; ``copy`` separates repeated points."""
    key = f"{seed}:{round_}:{x}:{y}:{copy}".encode("ascii")
    digest = hashlib.blake2b(key, digest_size=2).digest()
    return digest[0] % 3 - 1, digest[1] % 3 - 1


def perturb_points(
    points: Sequence[Tuple[int, int]],
    seed: int = 0,
    scale: int = 8,
    max_rounds: int = 16,
) -> Tuple[List[Tuple[int, int]], Dict[str, Any]]:
    """
    Scale coordinates by ``scale`` and add hash-derived offsets in {-1, 0, 1}.

    Offsets hash each coordinate pair, so reordering the input reorders the
    output the same way. Rounds are retried with fresh offsets until the
    result is in general position. Returns the new points and their
    provenance record.
    """
    if scale < 2:
        raise ParameterError(f"Perturbation scale must be >= 2, got {scale}")
    seen: Dict[Tuple[int, int], int] = {}
    keyed = []
    for x, y in points:
        copy = seen.get((x, y), 0)
        seen[(x, y)] = copy + 1
        keyed.append((x, y, copy))

    last_violations: list = []
    for round_ in range(max_rounds):
        moved = []
        for x, y, copy in keyed:
            dx, dy = _hash_offset(seed, round_, x, y, copy)
            moved.append((x * scale + dx, y * scale + dy))
        if any(abs(c) > COORD_BOUND for p in moved for c in p):
            raise ParameterError(f"Scaling by {scale} pushes coordinates beyond |c| <= {COORD_BOUND}")
        last_violations = validate_general_position([Point(x, y) for x, y in moved])
        if not last_violations:
            provenance = {
                "method": "blake2b-offsets",
                "scale": scale,
                "seed": seed,
                "rounds": round_ + 1,
                "magnitude": 1,
            }
            logger.warning("Perturbed %d points (scale=%d, rounds=%d)", len(points), scale, round_ + 1)
            return moved, provenance
    raise GeneralPositionError(
        f"Perturbation did not reach general position within {max_rounds} rounds",
        last_violations,
    )


def perturb_instance(inst: InstanceFile, seed: int = 0, scale: int = 8, max_rounds: int = 16) -> InstanceFile:
    points, provenance = perturb_points(inst.points, seed=seed, scale=scale, max_rounds=max_rounds)
    provenance["source_checksum"] = inst.checksum()
    return InstanceFile(
        name=inst.name,
        points=points,
        seed=inst.seed,
        generator=dict(inst.generator),
        perturbation=provenance,
    )
