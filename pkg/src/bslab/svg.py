"""
SVG export of tilings.

World coordinates go through a single affine map ``X = sx*x + tx``,
``Y = sy*y + ty`` that is written into a header comment, so tests can map
the exact tile corners forward and compare coordinates instead of pixels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import GroupParams
from .nullity import tile_corners_compressed, tile_corners_std

__all__ = ["SvgScene", "tiling_scene", "parse_transform"]

_HEADER = "world-to-viewport: X = sx*x + tx; Y = sy*y + ty; sx={sx} tx={tx} sy={sy} ty={ty}"


def _f(v: float) -> str:
    return f"{float(v):.17g}"


@dataclass
class SvgScene:
    width: float = 800.0
    height: float = 600.0
    margin: float = 20.0
    polygons: list = field(default_factory=list)  # (world points, attrs)
    labels: list = field(default_factory=list)  # (world point, text)
    transform: tuple = (1.0, 0.0, -1.0, 0.0)

    def fit(self) -> None:
        """Choose the affine map so every polygon fits the viewport, y pointing up."""
        pts = [pt for poly, _ in self.polygons for pt in poly]
        if not pts:
            self.transform = (1.0, 0.0, -1.0, self.height)
            return
        xs = [float(x) for x, _ in pts]
        ys = [float(y) for _, y in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        sx = (self.width - 2 * self.margin) / ((x1 - x0) or 1.0)
        sy = (self.height - 2 * self.margin) / ((y1 - y0) or 1.0)
        self.transform = (sx, self.margin - sx * x0, -sy, self.height - self.margin + sy * y0)

    def to_view(self, pt) -> tuple[float, float]:
        sx, tx, sy, ty = self.transform
        return sx * float(pt[0]) + tx, sy * float(pt[1]) + ty

    def render(self) -> str:
        sx, tx, sy, ty = self.transform
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f"<!-- {_HEADER.format(sx=_f(sx), tx=_f(tx), sy=_f(sy), ty=_f(ty))} -->",
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(self.width)}" height="{_f(self.height)}" '
            f'viewBox="0 0 {_f(self.width)} {_f(self.height)}">',
        ]
        for poly, attrs in self.polygons:
            pts = " ".join(f"{_f(X)},{_f(Y)}" for X, Y in map(self.to_view, poly))
            extra = "".join(f' {k}="{v}"' for k, v in attrs.items())
            out.append(f'  <polygon points="{pts}" fill="none" stroke="black" stroke-width="0.5"{extra}/>')
        for pt, text in self.labels:
            X, Y = self.to_view(pt)
            out.append(f'  <text x="{_f(X)}" y="{_f(Y)}" font-size="8">{text}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def tiling_scene(P: GroupParams, kind: str, a_range: tuple[int, int], b_range: tuple[int, int], labels: bool = False) -> SvgScene:
    """Tiles ``(a, b)`` over inclusive ranges of the preferred positive sheet."""
    if kind not in ("std", "compressed"):
        raise ValueError("kind must be 'std' or 'compressed'")
    corners = tile_corners_std if kind == "std" else tile_corners_compressed
    scene = SvgScene()
    for b in range(b_range[0], b_range[1] + 1):
        for a in range(a_range[0], a_range[1] + 1):
            ll, lr, ul, ur = corners(a, b, P)
            scene.polygons.append(((ll, lr, ur, ul), {"data-a": a, "data-b": b, "data-kind": kind}))
            if labels:
                scene.labels.append((ll, f"{a},{b}"))
    scene.fit()
    return scene


_TRANSFORM = re.compile(r"sx=(\S+) tx=(\S+) sy=(\S+) ty=(\S+) -->")
_POLY = re.compile(r'<polygon points="([^"]*)"[^>]*data-a="(-?\d+)" data-b="(-?\d+)"')


def parse_transform(svg: str) -> tuple[float, float, float, float]:
    m = _TRANSFORM.search(svg)
    if m is None:
        raise ValueError("no recorded world-to-viewport map")
    return tuple(float(v) for v in m.groups())


def parse_polygons(svg: str) -> dict[tuple[int, int], list[tuple[float, float]]]:
    out = {}
    for pts, a, b in _POLY.findall(svg):
        out[(int(a), int(b))] = [tuple(float(c) for c in p.split(",")) for p in pts.split()]
    return out
