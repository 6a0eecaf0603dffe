"""
The model space R x T(|m|, n) with the l2 product metric.

BS(m, n) acts diagonally: on the tree through the Bass-Serre action and on
the R-factor through the affine maps ``alpha(s): x -> x + 1/n`` and
``alpha(t): x -> (n/m) x``.  That standard action is exact over the rationals.
The compressed action conjugates the R-coordinate by the log-log compression
and is the only floating-point layer.

A tree point is a vertex, or a point at ``offset`` in (0, 1) along the edge to
the child reached by ``step``.  Every point therefore sits on a geodesic from
v0 and has a depth ``d``.  Within any sheet containing that geodesic its local
coordinates are ``(x, d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import numerics
from .core import GroupParams, NormalForm
from .numerics import compress, decompress
from .tree import TreeEnd, TreeVertex, act_vertex, base_vertex, neighbor, _backtracks, _lcp

__all__ = [
    "AffineMap",
    "TreePoint",
    "SpacePoint",
    "SheetCoords",
    "alpha",
    "act_std",
    "act_compressed",
    "stable_conj",
    "compress",
    "decompress",
    "distance",
    "polar",
    "PolarCoords",
    "UndefinedAngle",
    "ray_point",
    "in_basic_nbhd",
    "projection_distance",
]

Real = Union[Fraction, float, int]


class UndefinedAngle(ValueError):
    """The angle at v0 is undefined for the base point itself."""


@dataclass(frozen=True)
class AffineMap:
    """``x -> lam * x + c`` with exact rational coefficients."""

    lam: Fraction
    c: Fraction

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("affine map must be invertible")

    def __call__(self, x):
        return self.lam * x + self.c

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        """Composition ``self o other``."""
        return AffineMap(self.lam * other.lam, self.lam * other.c + self.c)

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.lam, -self.c / self.lam)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0))


def alpha(g: NormalForm) -> AffineMap:
    """The R-coordinate action of ``g`` under the standard action."""
    P = g.params
    ratio = Fraction(P.n, P.m)
    shift = Fraction(1, P.n)
    # left to right: s^a0 o t^e1 o s^a1 o ...
    lam = Fraction(1)
    c = Fraction(0)
    for k, a in enumerate(g.exponents):
        c += lam * a * shift
        if k < len(g.syllables):
            lam *= ratio if g.syllables[k][0] > 0 else 1 / ratio
    return AffineMap(lam, c)


@dataclass(frozen=True)
class TreePoint:
    vertex: TreeVertex
    step: tuple[int, int] | None = None
    offset: Real = 0

    def __post_init__(self):
        if self.step is None:
            if self.offset != 0:
                raise ValueError("offset needs an edge step")
            return
        if not 0 <= self.offset < 1:
            raise ValueError("offset must lie in [0, 1)")
        if self.vertex.steps and _backtracks(self.vertex.steps[-1], self.step):
            raise ValueError("edge step must lead away from v0")

    @classmethod
    def on_edge(cls, u: TreeVertex, w: TreeVertex, offset: Real) -> "TreePoint":
        """Point at ``offset`` from ``u`` along the edge ``u -- w``."""
        if offset == 0:
            return cls(u)
        if offset == 1:
            return cls(w)
        if len(w.steps) == len(u.steps) + 1 and w.steps[:-1] == u.steps:
            return cls(u, w.steps[-1], offset)
        if len(u.steps) == len(w.steps) + 1 and u.steps[:-1] == w.steps:
            return cls(w, u.steps[-1], 1 - offset)
        raise ValueError("vertices are not adjacent")

    @property
    def depth(self) -> Real:
        return len(self.vertex.steps) + self.offset

    @property
    def path(self) -> tuple:
        """Steps of the shortest vertex path from v0 passing through this point."""
        if self.step is None or self.offset == 0:
            return self.vertex.steps
        return self.vertex.steps + (self.step,)

    def far_vertex(self) -> TreeVertex:
        return TreeVertex(self.vertex.params, self.path)

    def to_json(self):
        edge = None if self.step is None else [self.step[0], self.step[1], _fmt(self.offset)]
        return {"vertex": self.vertex.to_json(), "edge": edge}


def tree_gap(path_a, depth_a, path_b, depth_b) -> float:
    """Distance between the points at the given depths along two geodesics from v0."""
    k = _lcp(path_a, path_b)
    return depth_a + depth_b - 2 * min(k, depth_a, depth_b)


def act_tree_point(g: NormalForm, y: TreePoint) -> TreePoint:
    u = act_vertex(g, y.vertex)
    if y.step is None or y.offset == 0:
        return TreePoint(u)
    w = act_vertex(g, neighbor(y.vertex, y.step))
    return TreePoint.on_edge(u, w, y.offset)


@dataclass(frozen=True)
class SpacePoint:
    x: Real
    y: TreePoint

    @classmethod
    def base(cls, params: GroupParams) -> "SpacePoint":
        return cls(Fraction(0), TreePoint(base_vertex(params)))

    @property
    def params(self) -> GroupParams:
        return self.y.vertex.params

    @property
    def depth(self) -> Real:
        return self.y.depth

    def to_json(self):
        out = {"x": _fmt(self.x)}
        out.update(self.y.to_json())
        return out


def _fmt(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, int):
        return str(v)
    return f"{v:.17g}"


@dataclass(frozen=True)
class SheetCoords:
    """Local coordinates ``(x, d)`` in the sheet R x ``end``."""

    end: TreeEnd
    x: float
    d: float

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("distance along the ray must be non-negative")

    def point(self) -> SpacePoint:
        return ray_point(self.end, self.x, self.d)


def ray_point(end: TreeEnd, x: Real, d: Real) -> SpacePoint:
    """The point with local coordinates ``(x, d)`` in the sheet R x ``end``."""
    whole = int(math.floor(d))
    frac = d - whole
    steps = end.prefix_steps(whole + 1)
    v = TreeVertex(end.params, steps[:whole])
    if frac == 0:
        return SpacePoint(x, TreePoint(v))
    return SpacePoint(x, TreePoint(v, steps[whole], frac))


def act_std(g: NormalForm, p: SpacePoint) -> SpacePoint:
    return SpacePoint(alpha(g)(p.x), act_tree_point(g, p.y))


def stable_conj(A: AffineMap, x: float) -> float:
    """``compress(A(decompress(x)))`` without overflow."""
    return numerics.stable_conj(A.lam, A.c, x)


def act_compressed(g: NormalForm, p: SpacePoint) -> SpacePoint:
    return SpacePoint(stable_conj(alpha(g), float(p.x)), act_tree_point(g, p.y))


def distance(p: SpacePoint, q: SpacePoint) -> float:
    dx = float(p.x) - float(q.x)
    dt = float(tree_gap(p.y.path, p.depth, q.y.path, q.depth))
    return math.hypot(dx, dt)


@dataclass(frozen=True)
class PolarCoords:
    r: float
    theta: float
    path: tuple


def polar(p: SpacePoint) -> PolarCoords:
    x = float(p.x)
    d = float(p.depth)
    if x == 0 and d == 0:
        raise UndefinedAngle("polar angle of the base point")
    return PolarCoords(math.hypot(x, d), math.atan2(d, x), p.y.path)


def _point_at_radius(obj, r: float, need: int):
    """(x, depth, path) of the radius-``r`` point on the geodesic from v0 toward ``obj``."""
    from .boundary import BoundaryPoint

    if isinstance(obj, BoundaryPoint):
        depth = r * math.sin(obj.theta)
        path = () if obj.is_pole else obj.end.prefix_steps(need)
        return r * math.cos(obj.theta), depth, path
    pc = polar(obj)
    scale = r / pc.r
    return float(obj.x) * scale, float(obj.depth) * scale, pc.path


def projection_distance(a, b, r: float) -> float:
    """Distance between the projections of ``a`` and ``b`` to the sphere of radius ``r``.

    Same-sheet pairs reduce to the chord ``sqrt(2 r^2 (1 - cos dphi))``; pairs
    whose tree geodesics split below the sphere are measured through the
    branch vertex.
    """
    need = int(math.ceil(r)) + 1
    xa, da, pa = _point_at_radius(a, r, need)
    xb, db, pb = _point_at_radius(b, r, need)
    return math.hypot(xa - xb, tree_gap(pa, da, pb, db))


def _radius(obj) -> float:
    from .boundary import BoundaryPoint

    if isinstance(obj, BoundaryPoint):
        return math.inf
    return math.hypot(float(obj.x), float(obj.depth))


def in_basic_nbhd(p, z, r: float, eps: float) -> bool:
    """Membership of ``p`` (interior or boundary) in the basic neighbourhood U(z, r, eps)."""
    if not (r > 0 and eps > 0):
        raise ValueError("need r > 0 and eps > 0")
    if _radius(p) <= r:
        return False
    return projection_distance(p, z, r) < eps
