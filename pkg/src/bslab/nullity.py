"""
Tiles of R x T(|m|, n), their visual size from v0, and finite nullity sweeps.

Grid tiles live in the preferred positive sheet R x tau+.  The standard tile
``(a, b)`` is ``[a w, (a+1) w] x [b, b+1]`` with ``w = (n/|m|)^b``.  Its
compressed image has corners ``(p, b), (q, b), (p, b+1), (q, b+1)`` where
``p = loglog(a w + e)`` and ``q = loglog((a+1) w + e)``.  The angle it
subtends at v0 is bounded by

    theta(a, b) = atan((b+1)/p) - atan(b/q)
                = atan2(b (q - p) + q, p q + b^2 + b),

and the second form is what is evaluated, with ``q - p`` taken from
``log1p`` of a ratio so that it keeps full precision when ``a`` is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import GroupParams, NormalForm, iter_ball
from .numerics import E, compress, compress_fraction
from .space import UndefinedAngle, alpha, projection_distance
from .tree import TreeEnd, act_vertex, vertex_height, vertex_of, TreeVertex

__all__ = [
    "Tile",
    "AngleReport",
    "FindNResult",
    "NullityReport",
    "BasicNeighborhood",
    "OpenBall",
    "CoverViolation",
    "CoverDelta",
    "tile_corners_std",
    "tile_corners_compressed",
    "pq",
    "theta_ab",
    "key_quantity",
    "angle_report",
    "regime_schedules",
    "find_N",
    "tile_of",
    "angular_diameter",
    "fits_in_U",
    "eta_for_delta",
    "nullity_sweep",
    "cover_delta",
    "boundary_samples",
]


def _ratio(P: GroupParams) -> Fraction:
    return Fraction(P.n, abs(P.m))


# -- grid tiles -------------------------------------------------------------


def tile_corners_std(a: int, b: int, P: GroupParams):
    """Corners (lower-left, lower-right, upper-left, upper-right) as exact rationals."""
    w = _ratio(P) ** b
    x0, x1 = a * w, (a + 1) * w
    return ((x0, Fraction(b)), (x1, Fraction(b)), (x0, Fraction(b + 1)), (x1, Fraction(b + 1)))


def tile_corners_compressed(a: int, b: int, P: GroupParams):
    """Compressed corners; tiles with ``a < 0`` are mirrored through the vertical axis."""
    w = _ratio(P) ** b
    p = compress_fraction(a * w)
    q = compress_fraction((a + 1) * w)
    return ((p, float(b)), (q, float(b)), (p, float(b + 1)), (q, float(b + 1)))


def pq(a: int, b: int, P: GroupParams) -> tuple[float, float, float]:
    """``(p, q, q - p)`` for the grid tile ``(a, b)``, ``a, b >= 0``."""
    if a < 0 or b < 0:
        raise ValueError("the angle formula is stated for a, b >= 0")
    w = _ratio(P) ** b
    aw = a * w
    if aw < 10**300:
        awf = float(aw)
        log_a = 1.0 + math.log1p(awf / E)  # log(a w + e)
    else:
        log_a = math.log(aw.numerator) - math.log(aw.denominator)
        log_a += math.log1p(E / float(aw)) if aw < 10**300 else 0.0
    # (a+1) w + e = (a w + e)(1 + u)
    u = 1.0 / (a + E * float(1 / w)) if w < 10**300 else 1.0 / a
    gap = math.log1p(math.log1p(u) / log_a)
    p = math.log(log_a)
    return p, p + gap, gap


def theta_ab(a: int, b: int, P: GroupParams) -> float:
    p, q, gap = pq(a, b, P)
    return math.atan2(b * gap + q, p * q + b * b + b)


def key_quantity(a: int, b: int, P: GroupParams) -> float:
    """The term ``b (q - p) / (p q + b^2 + b)`` whose decay drives the angle bound."""
    if b == 0:
        return 0.0
    p, q, gap = pq(a, b, P)
    return b * gap / (p * q + b * b + b)


@dataclass(frozen=True)
class AngleReport:
    a: int
    b: int
    p: float
    q: float
    theta: float
    key_quantity: float
    r_min: float

    def row(self):
        return (self.a, self.b, self.p, self.q, self.theta, self.key_quantity, self.r_min)


def angle_report(a: int, b: int, P: GroupParams) -> AngleReport:
    p, q, gap = pq(a, b, P)
    theta = math.atan2(b * gap + q, p * q + b * b + b)
    key = b * gap / (p * q + b * b + b) if b else 0.0
    return AngleReport(a, b, p, q, theta, key, math.hypot(p, b))


def regime_schedules() -> dict[str, list[tuple[int, int]]]:
    """Sample schedules for the four ways a tile can run off to infinity."""
    return {
        "case1_b0": [(10**j, 0) for j in range(7)],
        "case1_b3": [(10**j, 3) for j in range(7)],
        "case2": [(0, 2**j) for j in range(7)],
        "case3_a1": [(1, 2**j) for j in range(7)],
        "case3_a5": [(5, 2**j) for j in range(7)],
        "case4": [(2**j, 2**j) for j in range(7)],
    }


# -- the N_eps search --------------------------------------------------------


@dataclass
class FindNResult:
    eps: float
    N: float
    status: str  # "conclusive" | "inconclusive"
    certified_radius: float
    violations: int
    witness: tuple | None
    violations_beyond: list = field(default_factory=list)
    grid: tuple = ()

    def to_json(self):
        return {
            "eps": self.eps,
            "N": self.N,
            "status": self.status,
            "certified_radius": self.certified_radius,
            "violations_in_grid": self.violations,
            "witness": None if self.witness is None else list(self.witness),
            "violations": [list(v) for v in self.violations_beyond],
            "grid": {"a_max": self.grid[0], "b_max": self.grid[1]} if self.grid else None,
        }


def _row_angles(b: int, a: np.ndarray, r: float):
    w = r**b
    aw = a * w
    log_a = 1.0 + np.log1p(aw / E)
    p = np.log(log_a)
    u = 1.0 / (a + E / w)
    gap = np.log1p(np.log1p(u) / log_a)
    q = p + gap
    theta = np.arctan2(b * gap + q, p * q + b * b + b)
    return p, theta


def find_N(eps: float, P: GroupParams, a_max: int = 10**6, b_max: int = 60) -> FindNResult:
    """Smallest radius beyond which every grid tile subtends an angle below ``eps``.

    The grid is ``0 <= a <= a_max``, ``0 <= b <= b_max``.  ``N`` is the largest
    distance from v0 of a violating tile (0 when there is none), so every
    tile lying outside the closed N-ball satisfies the bound.  The grid holds
    every tile within ``certified_radius`` of v0.  When ``N`` reaches that
    radius the answer is marked inconclusive instead of being extrapolated.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    r = float(_ratio(P))
    a = np.arange(a_max + 1, dtype=np.float64)
    N = 0.0
    witness = None
    count = 0
    for b in range(b_max + 1):
        p, theta = _row_angles(b, a, r)
        bad = theta >= eps
        nbad = int(bad.sum())
        if not nbad:
            continue
        count += nbad
        rmin = np.hypot(p, b)
        rmin_bad = np.where(bad, rmin, -1.0)
        k = int(np.argmax(rmin_bad))
        if rmin_bad[k] > N:
            N = float(rmin_bad[k])
            witness = (k, b, float(theta[k]), N)
    p_edge = pq(a_max + 1, 0, P)[0]
    certified = min(float(b_max + 1), p_edge)
    status = "conclusive" if N < certified else "inconclusive"
    return FindNResult(eps, N, status, certified, count, witness, [], (a_max, b_max))


def violations_beyond(res: FindNResult, P: GroupParams) -> list:
    """Re-scan the grid for tiles outside the closed N-ball with angle >= eps."""
    a_max, b_max = res.grid
    r = float(_ratio(P))
    a = np.arange(a_max + 1, dtype=np.float64)
    out = []
    for b in range(b_max + 1):
        p, theta = _row_angles(b, a, r)
        hit = (theta >= res.eps) & (np.hypot(p, b) > res.N)
        for k in np.flatnonzero(hit):
            out.append((int(k), b, float(theta[k])))
    return out


# -- tiles of group elements ---------------------------------------------------


@dataclass(frozen=True)
class Tile:
    kind: str
    sheet: TreeEnd
    a: int | None
    b: int
    corners: tuple
    samples: tuple
    element: NormalForm | None = None

    @property
    def r_min(self) -> float:
        (x0, d0), (x1, _), _, _ = self.corners
        lo, hi = min(x0, x1), max(x0, x1)
        if lo <= 0 <= hi:
            return float(d0)
        return math.hypot(min(abs(lo), abs(hi)), d0)

    @property
    def r_max(self) -> float:
        return max(math.hypot(x, d) for x, d in self.corners)


def tile_of(g: NormalForm, samples: int = 16) -> Tile:
    """The compressed translate of the fundamental tile by ``g``, in sheet coordinates.

    ``R0`` is ``[0, 1]`` times the edge from v0 to t.v0.  Its image lies over
    the edge ``g v0 -- g t v0``.  Any sheet through that edge carries it at
    depths ``[dmin, dmin + 1]``.
    """
    if samples < 4:
        raise ValueError("need at least 4 boundary samples")
    P = g.params
    A = alpha(g)
    u = vertex_of(g)
    w = act_vertex(g, TreeVertex(P, ((1, 0),)))
    deeper = w if len(w.steps) > len(u.steps) else u
    dmin = float(min(len(u.steps), len(w.steps)))
    height = min(vertex_height(u), vertex_height(w))

    per_side = max(1, samples // 4)
    xs = [compress_fraction(A(Fraction(k, per_side))) for k in range(per_side + 1)]
    pts = []
    for x in xs:
        pts.append((x, dmin))
        pts.append((x, dmin + 1))
    for j in range(1, per_side):
        pts.append((xs[0], dmin + j / per_side))
        pts.append((xs[-1], dmin + j / per_side))
    corners = ((xs[0], dmin), (xs[-1], dmin), (xs[0], dmin + 1), (xs[-1], dmin + 1))

    a_index = None
    ratio = A.c / A.lam
    if ratio.denominator == 1 and A.lam > 0:
        a_index = int(ratio)
    return Tile("compressed", TreeEnd.through(deeper), a_index, height, corners, tuple(pts), g)


def grid_tile(a: int, b: int, P: GroupParams) -> Tile:
    """The compressed grid tile ``(a, b)`` in the preferred positive sheet."""
    corners = tile_corners_compressed(a, b, P)
    return Tile("compressed", TreeEnd(P, (), ((1, 0),)), a, b, corners, corners)


def _angles(T: Tile) -> list[float]:
    if T.r_min == 0:
        raise UndefinedAngle("tile contains the base point")
    return [math.atan2(d, x) for x, d in T.samples]


def angular_diameter(T: Tile) -> float:
    """Largest angle at v0 between two sampled points of the tile."""
    phis = _angles(T)
    return max(phis) - min(phis)


def fits_in_U(T: Tile, delta: float) -> bool:
    """Whether ``T`` lies in ``U(z, 1/delta, delta)`` for the ray z bisecting its angular span.

    The tile is a rectangle in its sheet, so the bisecting ray meets it and
    is a legitimate choice of ``w0``.  The distance between projections on
    the ``1/delta`` sphere is ``sqrt((2/delta^2)(1 - cos angle))``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if T.r_min <= 1 / delta:
        return False
    half = angular_diameter(T) / 2
    chord = math.sqrt(2.0 / delta**2 * 2.0 * math.sin(half / 2) ** 2)
    return chord < delta


def eta_for_delta(delta: float) -> float:
    """The angle at which ``sqrt((2/delta^2)(1 - cos eta)) = delta``."""
    return 2.0 * math.asin(delta**2 / 2.0)


@dataclass
class NullityReport:
    params: GroupParams
    L: int
    delta: float
    N: float
    N_status: str
    near_radius: float
    total: int = 0
    fits: int = 0
    near: int = 0
    far_failures: list = field(default_factory=list)
    max_r_min: float = 0.0

    def ok(self) -> bool:
        return not self.far_failures

    def to_json(self):
        return {
            "group": [self.params.m, self.params.n],
            "L": self.L,
            "delta": self.delta,
            "N": self.N,
            "N_status": self.N_status,
            "near_radius": self.near_radius,
            "total": self.total,
            "fits": self.fits,
            "near": self.near,
            "violations": [g.to_json() for g in self.far_failures],
            "max_tile_r_min": self.max_r_min,
        }


def nullity_sweep(
    L: int,
    delta: float,
    P: GroupParams,
    a_max: int = 10**4,
    b_max: int = 60,
    samples: int = 16,
    max_elements: int = 2_000_000,
) -> NullityReport:
    """Classify every translate of the compressed fundamental tile over ``ball(L)``.

    A tile *fits* when it lies in some ``U(z, 1/delta, delta)``.  Otherwise it
    is *near* when it meets the ball of radius ``max(1/delta, N) + diam(R0)``.
    Anything else is a far failure.
    """
    eta = eta_for_delta(delta)
    res = find_N(eta, P, a_max, b_max)
    diam0 = math.hypot(compress(1.0), 1.0)
    near_radius = max(1 / delta, res.N) + diam0
    rep = NullityReport(P, L, delta, res.N, res.status, near_radius)
    for g, _ in iter_ball(L, P, max_elements):
        T = tile_of(g, samples)
        rep.total += 1
        rep.max_r_min = max(rep.max_r_min, T.r_min)
        if T.r_min > 0 and fits_in_U(T, delta):
            rep.fits += 1
        elif T.r_min <= near_radius:
            rep.near += 1
        else:
            rep.far_failures.append(g)
    return rep


# -- Lebesgue-number style delta for covers of the boundary ---------------------


class CoverViolation(ValueError):
    """A sampled boundary point lies in no element of the cover."""


@dataclass(frozen=True)
class BasicNeighborhood:
    z: object  # BoundaryPoint
    r: float
    eps: float


@dataclass(frozen=True)
class OpenBall:
    center: object  # SpacePoint
    radius: float


def _nbhd_inside(z, eps: float, U) -> bool:
    """Sufficient test for ``U(z, 1/eps, eps) ⊆ U``.

    Radial projection from the ``1/eps`` sphere down to radius ``r`` shrinks
    distances by at least ``r eps`` (CAT(0) comparison), so
    ``r eps^2 + d(z(r), z_U(r)) <= eps_U`` suffices.
    """
    if isinstance(U, OpenBall):
        return False
    if 1 / eps < U.r:
        return False
    D = projection_distance(z, U.z, U.r)
    return U.r * eps * eps + D <= U.eps


def _eta(z, U, ceiling: float, iters: int = 80) -> float:
    if _nbhd_inside(z, ceiling, U):
        return ceiling
    lo, hi = 0.0, ceiling
    if not _nbhd_inside(z, ceiling * 1e-12, U):
        return 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _nbhd_inside(z, mid, U):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class CoverDelta:
    delta: float
    eta_min: float
    worst: object


def boundary_samples(P: GroupParams, n_theta: int = 9, depth: int = 2) -> list:
    """Points ``(theta, end)`` over a theta grid and all tree directions to ``depth``."""
    from .boundary import BoundaryPoint
    from .tree import truncated_tree

    leaves = [v for v in truncated_tree(P, depth) if len(v.steps) == depth]
    leaves.sort(key=lambda v: v.steps)
    ends = [TreeEnd.through(v) for v in leaves]
    out = []
    for i in range(n_theta):
        theta = math.pi * i / (n_theta - 1)
        if i in (0, n_theta - 1):
            out.append(BoundaryPoint(theta, None))
        else:
            out.extend(BoundaryPoint(theta, e) for e in ends)
    return out


def cover_delta(cover: Sequence, samples: "int | Iterable" = 9, P: GroupParams | None = None, ceiling: float = 1.0, depth: int = 2) -> CoverDelta:
    """Half the sampled minimum over boundary points of ``max_i eta_i``.

    ``eta_i(z)`` is the supremum of ``eps`` with ``U(z, 1/eps, eps)`` inside the
    ``i``-th cover element, found by bisection below ``ceiling``.
    """
    if isinstance(samples, int):
        if P is None:
            raise ValueError("pass the group parameters to generate samples")
        samples = boundary_samples(P, samples, depth)
    worst, best = None, math.inf
    for z in samples:
        eta = max((_eta(z, U, ceiling) for U in cover), default=0.0)
        if eta <= 0:
            raise CoverViolation(f"boundary point {z} is not covered")
        if eta < best:
            best, worst = eta, z
    return CoverDelta(best / 2, best, worst)
