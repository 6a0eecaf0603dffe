"""
Acceptance gate: one check per criterion, at the stated tolerance.

Each check records a PASS/FAIL line that is printed in pytest's terminal
summary (see conftest.py).  Run this file directly to print the lines
without pytest.
"""

import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from bslab.boundary import asymptotic_slope, image_curve, verify_action, verify_parity
from bslab.core import GroupParams, expand, multiply, parse_word, reduce
from bslab.gbs import GraphOfZ, classify, modular_image, parse_graph, random_graph, spanning_tree
from bslab.nullity import find_N, key_quantity, nullity_sweep, regime_schedules, theta_ab, tile_corners_compressed, tile_corners_std, violations_beyond
from bslab.svg import parse_polygons, parse_transform, tiling_scene

BS23 = GroupParams(2, 3)
BS12 = GroupParams(1, 2)
LINES: list[str] = []


def record(n: int, title: str, ok: bool, detail: str) -> None:
    LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}")


def check_1():
    start = time.perf_counter()
    rel = reduce(parse_word("ts^2t^{-1}"), BS23)
    ok_rel = (rel.a0, rel.syllables) == (3, ())
    rng = random.Random(20240601)

    def word():
        return "".join(rng.choice("sStT") for _ in range(rng.randint(0, 12)))

    bad = 0
    for _ in range(10_000):
        u, v, w = word(), word(), word()
        a = reduce(u, BS23)
        if reduce(expand(a), BS23) != a:
            bad += 1
        b, c = reduce(v, BS23), reduce(w, BS23)
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = ok_rel and bad == 0 and elapsed < 10
    return ok, f"relator {'ok' if ok_rel else 'wrong'}, {bad} failures in 10000 words, {elapsed:.2f}s"


def check_2():
    worst = 0.0
    with mpmath.workdps(60):
        for a in range(21):
            for b in range(11):
                w = (mpmath.mpf(3) / 2) ** b
                p = mpmath.log(mpmath.log(a * w + mpmath.e))
                q = mpmath.log(mpmath.log((a + 1) * w + mpmath.e))
                want = ((p, b), (q, b), (p, b + 1), (q, b + 1))
                for (x, y), (X, Y) in zip(tile_corners_compressed(a, b, BS23), want):
                    worst = max(worst, abs(x - float(X)), abs(y - Y))
    return worst <= 1e-12, f"max corner error {worst:.2e} over 231 tiles"


def check_3():
    start = time.perf_counter()
    failures = []
    for P in (BS23, BS12):
        scheds = regime_schedules()
        for name, sched in scheds.items():
            thetas = [theta_ab(a, b, P) for a, b in sched]
            dec = all(y < x for x, y in zip(thetas, thetas[1:]))
            a, b = sched[-1]
            key = key_quantity(a, b, P)
            if not (dec and thetas[-1] < 0.01 and key < 1e-2):
                failures.append(f"{P}/{name}: theta_end={thetas[-1]:.4f} decreasing={dec} key_end={key:.3g}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 5
    detail = f"{elapsed:.2f}s; " + ("all regimes pass" if not failures else "; ".join(failures))
    return ok, detail


def check_4():
    r1 = find_N(0.1, BS23, 10**6, 60)
    r2 = find_N(0.01, BS23, 10**6, 60)
    v1, v2 = violations_beyond(r1, BS23), violations_beyond(r2, BS23)
    ok = math.isfinite(r1.N) and math.isfinite(r2.N) and not v1 and not v2 and r2.N >= r1.N
    return ok, f"N(0.1)={r1.N:.6g} [{r1.status}], N(0.01)={r2.N:.6g} [{r2.status}], violations beyond N: {len(v1)}, {len(v2)}"


def check_5():
    start = time.perf_counter()
    rep = nullity_sweep(8, 0.05, BS23, a_max=10**6, b_max=60)
    elapsed = time.perf_counter() - start
    ok = rep.ok() and rep.fits + rep.near == rep.total and elapsed < 60
    return ok, (
        f"{rep.total} tiles: {rep.fits} fit, {rep.near} near (radius {rep.near_radius:.4g}), "
        f"{len(rep.far_failures)} far failures, {elapsed:.2f}s"
    )


def check_6():
    failures = []
    for gen in ("s", "t"):
        for p, q in ((0, 1), (1, 1), (1, 2), (3, 2)):
            rep = asymptotic_slope(image_curve(p, q, gen, BS23), (4, 8, 16, 32))
            if not (rep.decreasing() and rep.final_residual < 1e-3):
                failures.append(f"{gen}-bar ({p},{q})")
    worst = max(
        asymptotic_slope(image_curve(p, q, g, BS23)).final_residual for g in "st" for p, q in ((1, 1), (1, 2), (3, 2))
    )
    return not failures, f"8 curves, largest final residual {mpmath.nstr(worst, 3)}" + (f"; failing {failures}" if failures else "")


def check_7():
    rows = verify_action(BS23, random.Random(7), pairs=200, L=5)
    bad = [r for r in rows if not r["ok"]]
    worst = max(r["dtheta"] for r in rows)
    parity = verify_parity(GroupParams(-2, 3), L=6)
    ok = not bad and worst < 1e-12 and not parity
    return ok, f"{len(rows) - len(bad)}/200 pairs ok, max dtheta {worst:.1e}, parity mismatches on ball(6) of BS(-2,3): {len(parity)}"


def check_8():
    got = [classify(GraphOfZ.loop(m, n)).case for m, n in ((2, 2), (1, 5), (2, 3))]
    tree = classify(parse_graph("vertex x\nvertex y\nedge x y 2 3"))
    tree_ok = tree.case == 1 and not tree.caveats and tree.moduli.unimodular
    rng = random.Random(8)
    variant = 0
    for _ in range(20):
        G = random_graph(rng, max_edges=6)
        if len({modular_image(G, spanning_tree(G, rng)) for _ in range(5)}) != 1:
            variant += 1
    ok = got == [1, 2, 3] and tree_ok and variant == 0
    return ok, f"loops (2,2),(1,5),(2,3) -> {got}; tree edge case {tree.case} caveats {tree.caveats}; {variant}/20 graphs tree-dependent"


def check_9():
    scene = tiling_scene(BS23, "std", (0, 8), (-2, 4))
    svg = scene.render()
    sx, tx, sy, ty = parse_transform(svg)
    worst = 0.0
    polys = parse_polygons(svg)
    for (a, b), pts in polys.items():
        ll, lr, ul, ur = tile_corners_std(a, b, BS23)
        for (X, Y), (x, y) in zip(pts, (ll, lr, ur, ul)):
            assert isinstance(x, Fraction)
            worst = max(worst, abs(X - (sx * float(x) + tx)), abs(Y - (sy * float(y) + ty)))
    ok = len(polys) == 9 * 7 and worst <= 1e-9
    return ok, f"{len(polys)} tiles, max coordinate error {worst:.1e}"


CHECKS = [
    (1, "relator and normal-form suite", check_1),
    (2, "compressed tile corners", check_2),
    (3, "angle regimes", check_3),
    (4, "N_eps search", check_4),
    (5, "nullity sweep L=8, delta=0.05", check_5),
    (6, "boundary slope limits", check_6),
    (7, "boundary group action", check_7),
    (8, "Whyte classifier", check_8),
    (9, "SVG golden tiling", check_9),
]


@pytest.mark.parametrize("n,title,check", CHECKS, ids=[f"criterion_{n}" for n, _, _ in CHECKS])
def test_criterion(n, title, check):
    ok, detail = check()
    record(n, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for n, title, check in CHECKS:
        record(n, title, *check())
        print(LINES[-1])
