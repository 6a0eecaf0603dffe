import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bslab.numerics import DECOMPRESS_MAX, compress, compress_fraction, decompress, stable_conj
from oracles import mp_compress, mp_conj

E = math.e


def test_compress_identities():
    assert compress(0.0) == 0.0
    assert compress(E**E - E) == pytest.approx(1.0, abs=1e-15)
    assert compress(-(E**E - E)) == pytest.approx(-1.0, abs=1e-15)


@given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False))
def test_compress_matches_high_precision(x):
    assert compress(x) == pytest.approx(float(mp_compress(x)), rel=1e-14, abs=1e-300)


def test_compress_huge_rationals():
    x = Fraction(10) ** 400 + Fraction(1, 3)
    assert compress_fraction(x) == pytest.approx(float(mp_compress(x)), rel=1e-15)
    assert compress_fraction(-x) == -compress_fraction(x)


@given(st.floats(min_value=-DECOMPRESS_MAX, max_value=DECOMPRESS_MAX))
def test_round_trip(x):
    assert compress(decompress(x)) == pytest.approx(x, rel=1e-12, abs=1e-12)


def test_decompress_guard():
    with pytest.raises(OverflowError):
        decompress(DECOMPRESS_MAX + 0.01)


def test_stable_conj_fixed_points():
    for x in (-40.0, -3.0, 0.0, 0.5, 7.0, 900.0):
        assert stable_conj(1, 0, x) == x
    assert stable_conj(Fraction(1), Fraction(0), 0.0) == 0.0


def test_stable_conj_matches_naive_on_safe_range():
    lam = Fraction(3, 2)
    for x in (0.5, 1.0, 2.0, 5.0):
        naive = compress(float(lam) * decompress(x))
        assert stable_conj(lam, 0, x) == pytest.approx(naive, abs=1e-9)


maps = st.sampled_from(
    [
        (Fraction(3, 2), Fraction(0)),
        (Fraction(2, 3), Fraction(1, 3)),
        (Fraction(-3, 2), Fraction(0)),
        (Fraction(9, 4), Fraction(-5, 3)),
        (Fraction(1), Fraction(1, 3)),
        (Fraction(-8, 27), Fraction(7)),
        (Fraction(1, 1024), Fraction(-2)),
    ]
)


@given(maps, st.floats(min_value=-40, max_value=40))
def test_stable_conj_matches_high_precision(A, x):
    lam, c = A
    got = stable_conj(lam, c, x)
    want = mp_conj(lam, c, x)
    assert got == pytest.approx(float(want), rel=1e-12, abs=1e-12)


def test_stable_conj_far_out_is_finite_and_monotone():
    lam = Fraction(3, 2)
    prev = -math.inf
    for x in (10.0, 100.0, 709.0, 710.0, 1e4, 1e8):
        y = stable_conj(lam, Fraction(1, 3), x)
        assert math.isfinite(y) and y >= x and y >= prev
        prev = y
    assert stable_conj(Fraction(-2, 3), 0, 1e6) == -1e6
