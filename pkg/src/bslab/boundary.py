"""
The visual boundary of R x T(|m|, n) as a suspension of the end space.

A boundary point is a pair ``(theta, end)`` with ``theta`` in [0, pi]: the
direction at angle ``theta`` inside the sheet R x end.  ``theta = 0`` and
``theta = pi`` are the poles R and L, shared by every sheet.

For m > 0 a group element acts by suspending its action on ends.  For m < 0
the letter t also flips the R-factor, so elements of odd height act by the
reflected suspension ``theta -> pi - theta``.

The second half of the module checks the extension numerically.  The image
of the ray of slope ``p/q`` under s-bar or t-bar is an explicit curve whose
first coordinate exceeds ``|q| x`` by an amount that underflows doubles very
early.  That excess is evaluated with mpmath in the log domain, so that the
slope residuals can be compared even when they are far below 1e-300.
"""

from __future__ import annotations

import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .core import GroupParams, NormalForm
from .numerics import compress, stable_conj
from .space import act_compressed, polar, ray_point
from .tree import TreeEnd, TreeVertex, act_end

__all__ = [
    "BoundaryPoint",
    "pole",
    "suspend",
    "reflect_suspend",
    "act_boundary",
    "random_boundary_point",
    "RayCurve",
    "s_bar_image_curve",
    "t_bar_image_curve",
    "s_bar_sign",
    "SlopeReport",
    "asymptotic_slope",
    "interior_consistency",
    "image_curve",
    "verify_action",
    "verify_parity",
]

_PREC = 40  # decimal digits for the residual kernel


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    end: TreeEnd | None = None

    def __post_init__(self):
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if self.theta in (0, math.pi):
            object.__setattr__(self, "end", None)
        elif self.end is None:
            raise ValueError("a non-pole boundary point needs an end")

    @property
    def is_pole(self) -> bool:
        return self.end is None

    @property
    def pole_name(self) -> str | None:
        if not self.is_pole:
            return None
        return "R" if self.theta == 0 else "L"

    def to_json(self):
        if self.is_pole:
            return {"pole": self.pole_name}
        return {"theta": self.theta, "end": self.end.to_json()}

    @classmethod
    def from_json(cls, params: GroupParams, data: dict) -> "BoundaryPoint":
        if "pole" in data:
            return pole(data["pole"])
        return cls(float(data["theta"]), TreeEnd.from_json(params, data["end"]))

    def __repr__(self):
        if self.is_pole:
            return f"BoundaryPoint({self.pole_name})"
        return f"BoundaryPoint({self.theta!r}, {self.end!r})"


def pole(name: str) -> BoundaryPoint:
    if name == "R":
        return BoundaryPoint(0.0)
    if name == "L":
        return BoundaryPoint(math.pi)
    raise ValueError(f"unknown pole {name!r}")


EndMap = Callable[[TreeEnd], TreeEnd]
BoundaryMap = Callable[[BoundaryPoint], BoundaryPoint]


def suspend(h: EndMap) -> BoundaryMap:
    def mapped(z: BoundaryPoint) -> BoundaryPoint:
        if z.is_pole:
            return z
        return BoundaryPoint(z.theta, h(z.end))

    return mapped


def reflect_suspend(h: EndMap) -> BoundaryMap:
    def mapped(z: BoundaryPoint) -> BoundaryPoint:
        if z.is_pole:
            return pole("L" if z.pole_name == "R" else "R")
        return BoundaryPoint(math.pi - z.theta, h(z.end))

    return mapped


def act_boundary(g: NormalForm, z: BoundaryPoint, P: GroupParams | None = None) -> BoundaryPoint:
    P = P or g.params
    if P != g.params:
        from .core import ParameterMismatch

        raise ParameterMismatch(f"{g.params} vs {P}")
    h = lambda e: act_end(g, e)  # noqa: E731
    if P.m < 0 and g.height % 2:
        return reflect_suspend(h)(z)
    return suspend(h)(z)


def random_boundary_point(P: GroupParams, rng: random.Random, depth: int = 6, pole_weight: float = 0.1) -> BoundaryPoint:
    """A random point: occasionally a pole, else a random angle and an eventually periodic end."""
    if rng.random() < pole_weight:
        return pole(rng.choice("RL"))

    def step():
        eps = rng.choice((1, -1))
        return (eps, rng.randrange(P.modulus(eps)))

    while True:
        prefix = tuple(step() for _ in range(rng.randint(0, depth)))
        tail = tuple(step() for _ in range(rng.randint(1, 3)))
        try:
            end = TreeEnd(P, prefix, tail)
        except ValueError:  # backtracking somewhere; draw again
            continue
        return BoundaryPoint(rng.uniform(0.05, math.pi - 0.05), end)


# -- image curves of slope-p/q rays ---------------------------------------------


def s_bar_sign(q: int, x: float, n: int) -> int:
    """The sign in front of the s-bar image curve: ``sgn(sgn(q) loglog(x + e) + 1/n)``."""
    v = (1 if q > 0 else -1) * math.log(math.log(x + math.e)) + 1.0 / n
    return (v > 0) - (v < 0)


def _loglog_excess(Q, lam, c):
    """``log(log(lam exp(exp(Q)) + c)) - Q`` in mpmath, without cancellation."""
    Q = mpmath.mpf(Q)
    E = mpmath.exp(Q)
    lam = mpmath.mpf(lam)
    inner = mpmath.log(lam) + mpmath.log1p(mpmath.mpf(c) * mpmath.exp(-E) / lam)
    return mpmath.log1p(inner / E)


@dataclass(frozen=True)
class RayCurve:
    """Image of the ray ``{(q x, p x) : x > 0}`` of a sheet under s-bar or t-bar."""

    p: int
    q: int
    sheet: TreeEnd
    generator: str  # "s" or "t"
    params: GroupParams

    def __post_init__(self):
        if self.p < 0 or self.q == 0:
            raise ValueError("need p >= 0 and q != 0")
        if self.generator not in ("s", "t"):
            raise ValueError("generator must be 's' or 't'")

    @property
    def reflected(self) -> bool:
        return self.generator == "t" and self.params.m < 0

    @property
    def limit_slope(self) -> Fraction:
        sl = Fraction(self.p, self.q)
        return -sl if self.reflected else sl

    def _lam_c(self):
        P = self.params
        if self.generator == "s":
            return 1, mpmath.mpf(1) / P.n
        m = abs(P.m)
        return mpmath.mpf(P.n) / m, mpmath.mpf(m - P.n) / m * mpmath.e

    def sign(self, x: float) -> int:
        if self.generator == "s":
            return s_bar_sign(self.q, x, self.params.n)
        sg = 1 if self.q > 0 else -1
        return -sg if self.reflected else sg

    def excess(self, x: float):
        """``|first coordinate| - |q| x`` as an mpmath number."""
        with mpmath.workdps(_PREC):
            lam, c = self._lam_c()
            return _loglog_excess(abs(self.q) * mpmath.mpf(x), lam, c)

    def first(self, x: float):
        with mpmath.workdps(_PREC):
            return self.sign(x) * (abs(self.q) * mpmath.mpf(x) + self.excess(x))

    def __call__(self, x: float) -> tuple[float, float]:
        """Local coordinates of the curve point with parameter ``x``."""
        if not x > 0:
            raise ValueError("curve parameter must be positive")
        return float(self.first(x)), float(self.p * x)

    def exact_first(self, x: float) -> float:
        """First coordinate from the exact conjugated map, evaluated in floats."""
        P = self.params
        if self.generator == "s":
            return stable_conj(1, Fraction(1, P.n), self.q * x)
        lam = Fraction(P.n, abs(P.m))
        v = stable_conj(lam, 0, self.q * x)
        return -v if self.reflected else v

    def flagged(self, x: float) -> bool:
        """Points in the sign-flip region ``q < 0, loglog(x + e) < 1/n`` of the s-bar curve."""
        return self.generator == "s" and self.q < 0 and math.log(math.log(x + math.e)) < 1.0 / self.params.n

    def slope_residual(self, x: float):
        """``(estimate, |estimate - limit|)`` for the slope ``p x / first(x)``."""
        with mpmath.workdps(_PREC):
            L = self.limit_slope
            limit = mpmath.mpf(L.numerator) / L.denominator
            if self.p == 0:
                return mpmath.mpf(0), mpmath.mpf(0)
            xi = self.first(x)
            est = self.p * mpmath.mpf(x) / xi
            target = 1 if L > 0 else -1
            if self.sign(x) == target:
                Q = abs(self.q) * mpmath.mpf(x)
                d = self.excess(x)
                res = abs(limit) * abs(d) / abs(Q + d)
            else:
                res = abs(est - limit)
            return est, res


def s_bar_image_curve(p: int, q: int, x: float, P: GroupParams, sheet: TreeEnd | None = None):
    """Local coordinates of the s-bar image of the slope-``p/q`` ray at parameter ``x``."""
    return _curve(p, q, "s", P, sheet)(x)


def t_bar_image_curve(p: int, q: int, x: float, P: GroupParams, sheet: TreeEnd | None = None):
    """Local coordinates of the t-bar image; for m < 0 the first coordinate is reflected."""
    return _curve(p, q, "t", P, sheet)(x)


def _curve(p, q, gen, P, sheet=None) -> RayCurve:
    sheet = sheet if sheet is not None else TreeEnd(P, (), ((1, 0),))
    g = P.s if gen == "s" else P.t
    return RayCurve(p, q, act_end(g, sheet), gen, P)


def image_curve(p: int, q: int, generator: str, P: GroupParams, sheet: TreeEnd | None = None) -> RayCurve:
    return _curve(p, q, generator, P, sheet)


@dataclass
class SlopeReport:
    curve: RayCurve
    rows: list = field(default_factory=list)  # (x, estimate, residual, flagged, exact_first)

    @property
    def final_estimate(self):
        return self.rows[-1][1]

    @property
    def final_residual(self):
        return self.rows[-1][2]

    def residuals(self):
        return [r[2] for r in self.rows]

    def decreasing(self) -> bool:
        """Strictly decreasing residuals, or identically zero ones."""
        res = self.residuals()
        if all(r == 0 for r in res):
            return True
        return all(b < a for a, b in zip(res, res[1:]))

    def to_json(self):
        c = self.curve
        return {
            "generator": c.generator,
            "p": c.p,
            "q": c.q,
            "limit": str(c.limit_slope),
            "rows": [
                {
                    "x": x,
                    "estimate": mpmath.nstr(est, 20),
                    "residual": mpmath.nstr(res, 6),
                    "flagged": flag,
                    "exact_first": ex,
                }
                for x, est, res, flag, ex in self.rows
            ],
            "decreasing": self.decreasing(),
        }


def asymptotic_slope(curve: RayCurve, schedule: Sequence[float] = (4, 8, 16, 32)) -> SlopeReport:
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be increasing")
    rep = SlopeReport(curve)
    for x in schedule:
        est, res = curve.slope_residual(x)
        rep.rows.append((x, est, res, curve.flagged(x), curve.exact_first(x)))
    return rep


# -- consistency with the interior action -----------------------------------------


@dataclass
class ConsistencyReport:
    generator: str
    theta: float
    target: float
    rows: list = field(default_factory=list)  # (radius, image angle, residual, on image sheet)

    def ok(self) -> bool:
        """Residuals shrink over the second half of the schedule and end below where they began.

        Early on the x-shift of the conjugated map and the unit depth shift of
        t can pull the angle in opposite directions, so the residual may pass
        through zero once before settling into its ``1/R`` decay.
        """
        # residuals within a few ulps of the target are rounding, not signal
        floor = 4 * sys.float_info.epsilon * max(1.0, abs(self.target))
        res = [0.0 if r[2] <= floor else r[2] for r in self.rows]
        if all(r == 0 for r in res):
            shrinking = True
        else:
            tail = res[len(res) // 2 - 1 :]
            settled = all(b < a or b == 0 for a, b in zip(tail, tail[1:]))
            shrinking = settled and res[-1] < res[0]
        return shrinking and all(r[3] for r in self.rows[1:])

    def to_json(self):
        return {
            "generator": self.generator,
            "theta": self.theta,
            "target": self.target,
            "rows": [list(r) for r in self.rows],
            "ok": self.ok(),
        }


def interior_consistency(
    generator: str,
    z: BoundaryPoint,
    P: GroupParams,
    radii: Sequence[float] = (16, 32, 64, 128, 256, 512),
) -> ConsistencyReport:
    """Push points of the ray toward ``z`` through the compressed action and track their angle."""
    if z.is_pole:
        raise ValueError("pick a non-pole direction")
    g = P.s if generator == "s" else P.t
    image = act_boundary(g, z, P)
    rep = ConsistencyReport(generator, z.theta, image.theta)
    for R in radii:
        x, d = R * math.cos(z.theta), R * math.sin(z.theta)
        w = act_compressed(g, ray_point(z.end, x, d))
        ang = polar(w).theta
        path = w.y.path
        on_sheet = image.end.prefix_steps(len(path)) == path
        rep.rows.append((R, ang, abs(ang - image.theta), on_sheet))
    return rep


# -- group-action checks -------------------------------------------------------------


def _same_end(a: TreeEnd | None, b: TreeEnd | None) -> bool:
    if a is None or b is None:
        return a is b
    if not a.equals(b):
        return False
    # second route: compare the streamed periodic presentations
    pa, pb = a.to_periodic(), b.to_periodic()
    if pa is None or pb is None:
        return a.agrees(b, 64)
    return (pa.prefix, pa.tail) == (pb.prefix, pb.tail)


def verify_action(P: GroupParams, rng: random.Random, pairs: int = 200, L: int = 5) -> list[dict]:
    """Check identity and composition laws on random pairs drawn from ``ball(L)``."""
    from .core import ball

    pool = sorted(ball(L, P), key=lambda g: (len(g.syllables), g.a0, g.syllables))
    rows = []
    for _ in range(pairs):
        g, h = rng.choice(pool), rng.choice(pool)
        z = random_boundary_point(P, rng)
        lhs = act_boundary(g * h, z, P)
        rhs = act_boundary(g, act_boundary(h, z, P), P)
        ident = act_boundary(P.identity, z, P)
        dtheta = abs(lhs.theta - rhs.theta)
        rows.append(
            {
                "g": str(g),
                "h": str(h),
                "z": z.to_json(),
                "dtheta": dtheta,
                "end_equal": _same_end(lhs.end, rhs.end),
                "identity_ok": ident == z,
                "ok": dtheta < 1e-12 and lhs.is_pole == rhs.is_pole and _same_end(lhs.end, rhs.end) and ident == z,
            }
        )
    return rows


def verify_parity(P: GroupParams, L: int = 6) -> list[dict]:
    """Poles swap exactly for elements that reverse the R-factor.

    The expected answer comes from the sign of the R-coordinate dilation of
    ``g``, computed independently of the height.
    """
    from .core import ball
    from .space import alpha

    bad = []
    R = pole("R")
    for g in ball(L, P):
        swapped = act_boundary(g, R, P).pole_name == "L"
        flips = alpha(g).lam < 0
        if swapped != flips or swapped != bool(P.m < 0 and g.height % 2):
            bad.append({"g": str(g), "height": g.height, "swapped": swapped})
    return bad
