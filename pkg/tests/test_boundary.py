import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bslab.boundary import (
    BoundaryPoint,
    act_boundary,
    asymptotic_slope,
    image_curve,
    interior_consistency,
    pole,
    random_boundary_point,
    reflect_suspend,
    s_bar_image_curve,
    s_bar_sign,
    suspend,
    t_bar_image_curve,
    verify_action,
    verify_parity,
)
from bslab.core import GroupParams, ball, multiply, reduce
from bslab.tree import TreeEnd, act_end, tau_plus

BS23 = GroupParams(2, 3)
BSm23 = GroupParams(-2, 3)
R, L = pole("R"), pole("L")


def test_poles_are_canonical():
    assert BoundaryPoint(0.0, tau_plus(BS23)) == R
    assert BoundaryPoint(math.pi, tau_plus(BS23)).is_pole
    with pytest.raises(ValueError):
        BoundaryPoint(1.0)
    with pytest.raises(ValueError):
        BoundaryPoint(4.0, tau_plus(BS23))


def test_suspension_examples():
    h = lambda e: act_end(BS23.s, e)  # noqa: E731
    assert suspend(h)(R) == R and suspend(h)(L) == L
    z = BoundaryPoint(math.pi / 2, tau_plus(BS23))
    assert suspend(h)(z) == BoundaryPoint(math.pi / 2, act_end(BS23.s, tau_plus(BS23)))
    assert reflect_suspend(h)(R) == L
    assert reflect_suspend(h)(z).theta == math.pi / 2
    g = lambda e: act_end(BS23.t, e)  # noqa: E731
    w = BoundaryPoint(0.7, TreeEnd(BS23, ((1, 2),), ((-1, 1),)))
    twice = reflect_suspend(h)(reflect_suspend(g)(w))
    assert twice == suspend(lambda e: h(g(e)))(w) or abs(twice.theta - w.theta) < 1e-15
    assert twice.end == h(g(w.end))


def test_action_examples():
    for g in list(ball(3, BS23))[:40]:
        assert act_boundary(g, R) == R and act_boundary(g, L) == L
    assert act_boundary(BSm23.t, R) == L
    assert act_boundary(BSm23.t ** 2, R) == R


def test_theta_preserved_for_positive_m():
    rng = random.Random(0)
    pool = list(ball(4, BS23))
    for _ in range(100):
        z = random_boundary_point(BS23, rng, pole_weight=0)
        assert act_boundary(rng.choice(pool), z).theta == z.theta


def test_composition_law_random_pairs():
    for P in (BS23, BSm23):
        rows = verify_action(P, random.Random(11), pairs=100, L=4)
        assert all(r["ok"] for r in rows)


def test_parity_rule():
    assert verify_parity(BSm23, L=5) == []
    assert verify_parity(BS23, L=5) == []


def test_json_round_trip():
    z = BoundaryPoint(1.25, act_end(BS23.element("s t"), TreeEnd(BS23, ((1, 1),), ((-1, 1),))))
    back = BoundaryPoint.from_json(BS23, z.to_json())
    assert back == z
    assert R.to_json() == {"pole": "R"} and BoundaryPoint.from_json(BS23, {"pole": "L"}) == L


# -- curves ---------------------------------------------------------------------------


def test_s_bar_sign_rule():
    n = 3
    for q in (1, 2, -1, -3):
        for x in [10**k for k in range(-6, 4)]:
            if math.log(math.log(x + math.e)) >= 1 / n:
                assert s_bar_sign(q, x, n) == (1 if q > 0 else -1)
    # inside the flip region the sign is + even though q < 0
    x = 0.01
    assert math.log(math.log(x + math.e)) < 1 / 3
    assert s_bar_sign(-1, x, 3) == 1
    assert image_curve(1, -1, "s", BS23).flagged(x)


def test_curve_shapes():
    x, y = s_bar_image_curve(0, 1, 5.0, BS23)
    assert y == 0
    x0, _ = t_bar_image_curve(1, 1, 1e-12, BS23)
    assert abs(x0) < 1e-10
    # large x: first coordinate approaches |q| x from above
    c = image_curve(1, 2, "s", BS23)
    assert 0 < c.excess(3.0) < 1e-50
    assert c(3.0)[0] == pytest.approx(6.0)


def test_curve_matches_direct_high_precision():
    with mpmath.workdps(60):
        for x in (0.3, 1.0, 2.5):
            want = mpmath.log(mpmath.log(mpmath.mpf(3) / 2 * mpmath.exp(mpmath.exp(2 * mpmath.mpf(x))) - mpmath.e / 2))
            got = image_curve(1, 2, "t", BS23).first(x)
            assert float(got) == pytest.approx(float(want), rel=1e-14)
            want = mpmath.log(mpmath.log(mpmath.exp(mpmath.exp(mpmath.mpf(x))) + mpmath.mpf(1) / 3))
            assert float(image_curve(1, 1, "s", BS23).first(x)) == pytest.approx(float(want), rel=1e-14)


def test_exact_conjugation_cross_check():
    # for q > 0 the displayed s-bar curve is the exact conjugate of x -> x + 1/n
    c = image_curve(1, 1, "s", BS23)
    for x in (0.2, 1.0, 3.0, 30.0):
        assert c(x)[0] == pytest.approx(c.exact_first(x), rel=1e-13)
    ct = image_curve(3, 2, "t", BS23)
    for x in (0.2, 1.0, 3.0, 30.0):
        assert ct(x)[0] == pytest.approx(ct.exact_first(x), rel=1e-13)


def test_slope_examples():
    rep = asymptotic_slope(image_curve(1, 1, "s", BS23))
    assert rep.decreasing()
    assert all(r > 0 for r in rep.residuals())
    rep = asymptotic_slope(image_curve(0, 1, "s", BS23))
    assert all(r == 0 for r in rep.residuals()) and rep.decreasing()
    rep = asymptotic_slope(image_curve(3, 2, "t", BS23))
    assert rep.final_residual < 1e-3
    ratio = asymptotic_slope(image_curve(1, 1, "t", BS23), (1, 2, 4, 8)).final_estimate
    assert abs(ratio - 1) < 1e-3


def test_reflected_t_curve_for_negative_m():
    c = image_curve(1, 1, "t", BSm23)
    assert c.limit_slope == -1
    rep = asymptotic_slope(c)
    assert rep.decreasing() and rep.final_residual < 1e-3
    assert c(4.0)[0] < 0


@settings(max_examples=30)
@given(st.sampled_from(["s", "t"]), st.floats(0.2, math.pi - 0.2), st.sampled_from([BS23, BSm23, GroupParams(1, 2)]))
def test_interior_consistency(gen, theta, P):
    z = BoundaryPoint(theta, TreeEnd(P, ((1, P.n - 1),), ((1, 0),)))
    rep = interior_consistency(gen, z, P)
    assert rep.ok()
