"""
Minimal SVG canvas for solution figures.

Kept points are drawn as circles, outliers as squares and the witness
polygon as a single closed path. The y axis is flipped so the figure reads
in the usual mathematical orientation.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

from convex_wgon.core.geom import PointSet

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width).3f" height="%(height).3f" viewBox="%(min_x).3f %(min_y).3f %(width).3f %(height).3f">
<rect x="%(min_x).3f" y="%(min_y).3f" width="%(width).3f" height="%(height).3f" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""


class SvgCanvas:
    def __init__(self, unit: float = 1.0):
        self.unit = unit
        self.min_x: Optional[float] = None
        self.max_x: Optional[float] = None
        self.min_y: Optional[float] = None
        self.max_y: Optional[float] = None
        self.commands: List[str] = []

    def _xy(self, x: float, y: float) -> Tuple[float, float]:
        return x * self.unit, 0.0 - y * self.unit

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def circle(self, x: float, y: float, radius: float, fill: str = "#1f4e79", css: str = "pt kept") -> None:
        cx, cy = self._xy(x, y)
        self.require(cx - radius, cy - radius)
        self.require(cx + radius, cy + radius)
        self.commands.append(
            f'<circle class="{css}" cx="{cx:.3f}" cy="{cy:.3f}" r="{radius:.3f}" style="fill:{fill};stroke:none"/>'
        )

    def square(self, x: float, y: float, size: float, stroke: str = "#c0392b", css: str = "pt outlier") -> None:
        cx, cy = self._xy(x, y)
        half = size / 2
        self.require(cx - half, cy - half)
        self.require(cx + half, cy + half)
        self.commands.append(
            f'<rect class="{css}" x="{cx - half:.3f}" y="{cy - half:.3f}" width="{size:.3f}" height="{size:.3f}" '
            f'style="fill:none;stroke:{stroke};stroke-width:{size / 4:.3f}"/>'
        )

    def path(self, points: Sequence[Tuple[float, float]], stroke: str = "#27ae60", width: float = 0.5, css: str = "witness") -> None:
        mapped = [self._xy(x, y) for x, y in points]
        for x, y in mapped:
            self.require(x, y)
        d = " ".join(
            f"{'M' if k == 0 else 'L'} {x:.3f} {y:.3f}" for k, (x, y) in enumerate(mapped)
        )
        if len(mapped) >= 3:
            d += " Z"
        self.commands.append(
            f'<path class="{css}" d="{d}" style="fill:{stroke};fill-opacity:0.12;stroke:{stroke};stroke-width:{width:.3f}"/>'
        )

    def text(self, x: float, y: float, text: str, size: float = 3.0, color: str = "#666666") -> None:
        tx, ty = self._xy(x, y)
        self.require(tx, ty - size)
        self.require(tx + len(text) * size * 0.6, ty)
        self.commands.append(
            f'<text x="{tx:.3f}" y="{ty:.3f}" fill="{color}" font-size="{size:.3f}" font-family="monospace">{escape(text)}</text>'
        )

    def to_string(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1.0) * 0.05
        min_x = self.min_x - pad
        min_y = self.min_y - pad
        width = self.max_x - self.min_x + 2 * pad
        height = self.max_y - self.min_y + 2 * pad
        return PREAMBLE % locals() + "".join(c + "\n" for c in self.commands) + POSTAMBLE

    def save(self, filename: Union[str, Path]) -> Path:
        path = Path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_string(), encoding="utf-8")
        return path


def render_solution(
    P: PointSet,
    polygon: Sequence[int],
    outliers: Iterable[int] = (),
    title: Optional[str] = None,
) -> SvgCanvas:
    """One glyph per input point plus the witness polygon as a single path."""
    xs = [p.x for p in P]
    ys = [p.y for p in P]
    extent = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    glyph = extent / 60

    canvas = SvgCanvas()
    canvas.path([P[k].as_tuple() for k in polygon], width=glyph / 2)
    removed = set(outliers)
    for k, p in enumerate(P):
        if k in removed:
            canvas.square(p.x, p.y, glyph * 2)
        else:
            canvas.circle(p.x, p.y, glyph)
    if title:
        canvas.text(min(xs), max(ys) + extent * 0.05, title, size=glyph * 3)
    return canvas
