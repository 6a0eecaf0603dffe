"""
Overflow-safe evaluation of the log-log compression and its conjugates.

The compression is ``f(x) = sgn(x) log(log(|x| + e))`` with inverse
``sgn(x) (exp(exp(|x|)) - e)``.  The inverse leaves double range once
``exp(|x|) > 709``, i.e. ``|x| > 6.5647``, so conjugated maps
``f(lam * f^-1(x) + c)`` are evaluated in the log domain: with
``E = exp(|x|)`` we carry ``log|z|`` as ``E + rest`` and use

    log(log|z|) = |x| + log1p(rest / E).
"""

from __future__ import annotations

import math
from fractions import Fraction

E = math.e
LOG_MAX = 709.0
# largest |x| for which decompress() stays finite
DECOMPRESS_MAX = math.log(LOG_MAX)
# below this, lam * f^-1(x) + c is formed directly in floats
_DIRECT = 5.5


def sign(x) -> int:
    return (x > 0) - (x < 0)


def compress(x: float) -> float:
    """``sgn(x) log(log(|x| + e))``, accurate near 0 and for huge ``|x|``."""
    if isinstance(x, Fraction):
        return compress_fraction(x)
    ax = abs(x)
    if math.isinf(ax):
        return math.copysign(math.inf, x)
    if ax < 1e300:
        return sign(x) * math.log1p(math.log1p(ax / E))
    return sign(x) * loglog_from_log(math.log(ax))


def compress_fraction(x: Fraction | int) -> float:
    """Compression of an exact rational of any size."""
    x = Fraction(x)
    if x == 0:
        return 0.0
    ax = abs(x)
    if ax < 10**300:
        return sign(x) * math.log1p(math.log1p(float(ax) / E))
    return sign(x) * loglog_from_log(math.log(ax.numerator) - math.log(ax.denominator))


def loglog_from_log(L: float) -> float:
    """``log(log(exp(L) + e))`` given ``L = log z``."""
    if L < 30:
        return math.log1p(math.log1p(math.exp(L) / E))
    return math.log(L + math.log1p(math.exp(1.0 - L)))


def decompress(x: float) -> float:
    """``sgn(x) (exp(exp(|x|)) - e)``; raises OverflowError past ``DECOMPRESS_MAX``."""
    ax = abs(x)
    if ax > DECOMPRESS_MAX:
        raise OverflowError(f"decompress({x}) exceeds double range (|x| > {DECOMPRESS_MAX:.6f})")
    return sign(x) * E * math.expm1(math.expm1(ax))


def _log_abs(q) -> float:
    if isinstance(q, Fraction):
        q = abs(q)
        return math.log(q.numerator) - math.log(q.denominator)
    return math.log(abs(q))


def stable_conj(lam, c, x: float) -> float:
    """Evaluate ``f(lam * f^-1(x) + c)`` for the affine map ``y -> lam*y + c``.

    ``lam`` and ``c`` may be exact rationals.  For ``|x| < 5.5`` the
    composition is formed directly; beyond that it runs in the log domain and
    stays finite for every finite ``x``.
    """
    if x == 0:
        return compress(c) if not isinstance(c, Fraction) else compress_fraction(c)
    ax = abs(x)
    sx = sign(x)
    sl = sign(lam)
    if ax < _DIRECT:
        y = sx * E * math.expm1(math.expm1(ax))
        z = float(lam) * y + float(c)
        if math.isfinite(z):
            return compress(z)

    # log|lam * y| = E_x + ra with E_x = exp|x|
    big = ax > LOG_MAX
    Ex = math.inf if big else math.exp(ax)
    ra = _log_abs(lam) + (0.0 if big else math.log1p(-math.exp(1.0 - Ex)))
    sa = sx * sl
    if c == 0:
        sz, rz = sa, ra
    else:
        Lc = _log_abs(c)
        sc = sign(c)
        diff = Lc - ra - (math.inf if big else Ex)  # log|c| - log|lam y|
        if diff <= 0:
            ratio = math.exp(diff)
            if sc == sa:
                rz = ra + math.log1p(ratio)
            elif ratio == 1.0:
                return 0.0
            else:
                rz = ra + math.log1p(-ratio)
            sz = sa
        else:
            # |c| dominates (only possible when exp|x| is finite)
            ratio = math.exp(-diff)
            rz = Lc - Ex + (math.log1p(ratio) if sc == sa else math.log1p(-ratio))
            sz = sc
    Lz = rz + (math.inf if big else Ex)
    if Lz < 30:
        return sz * math.log1p(math.log1p(math.exp(Lz) / E))
    rest = rz + math.log1p(math.exp(1.0 - Lz))
    if big:
        return sz * (ax + math.log1p(rest * math.exp(-ax)))
    return sz * (ax + math.log1p(rest / Ex))

