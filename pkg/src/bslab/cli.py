"""
``bslab``: command-line front end.

Exit codes: 0 when every check of the run passes, 1 on a violation, 2 when
a result is inconclusive, 64 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field

from . import __version__
from .core import GroupParams, WordSyntaxError, parse_word, reduce

EXIT_OK, EXIT_VIOLATION, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    m: int
    n: int
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self):
        return {"group": [self.m, self.n], "command": self.command, "params": self.params, "seed": self.seed}


def parse_grid(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    try:
        a_part, b_part = text.split(",")
        a0, a1 = (int(v) for v in a_part.split(":"))
        b0, b1 = (int(v) for v in b_part.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like a0:a1,b0:b1, got {text!r}") from None
    return (a0, a1), (b0, b1)


def _cells(grid) -> int:
    (a0, a1), (b0, b1) = grid
    return max(0, a1 - a0 + 1) * max(0, b1 - b0 + 1)


def _params(args) -> GroupParams:
    try:
        return GroupParams(args.m, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _report(cfg: RunConfig, body: dict) -> str:
    doc = {"schema": SCHEMA, "version": __version__, "config": cfg.to_json()}
    doc.update(body)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- commands -------------------------------------------------------------------------


def cmd_normal_form(args) -> int:
    P = _params(args)
    try:
        letters = parse_word(args.word)
    except WordSyntaxError as exc:
        raise UsageError(str(exc)) from None
    g = reduce(letters, P)
    print(json.dumps(g.to_json()) if args.json else str(g))
    return EXIT_OK


def cmd_render_tiling(args) -> int:
    from .svg import tiling_scene

    P = _params(args)
    (a0, a1), (b0, b1) = grid = parse_grid(args.grid)
    if _cells(grid) > 20000:
        raise UsageError("grid too large for rendering (limit 20000 tiles)")
    if args.kind == "std" and max(abs(b0), abs(b1)) > 40:
        raise UsageError("standard tiling rows limited to |b| <= 40")
    scene = tiling_scene(P, args.kind, (a0, a1), (b0, b1), labels=args.labels)
    _write(args.out, scene.render())
    return EXIT_OK


def cmd_angle_sweep(args) -> int:
    from .nullity import angle_report, regime_schedules

    P = _params(args)
    grid = parse_grid(args.grid)
    (a0, a1), (b0, b1) = grid
    if a0 < 0 or b0 < 0:
        raise UsageError("angle sweep grid needs a, b >= 0")
    if _cells(grid) > 2_000_000:
        raise UsageError("grid too large (limit 2e6 cells)")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "p", "q", "theta", "key_quantity", "r_min"])
    for b in range(b0, b1 + 1):
        for a in range(a0, a1 + 1):
            if (a, b) == (0, 0):
                continue
            r = angle_report(a, b, P)
            w.writerow([a, b] + [f"{v:.17g}" for v in r.row()[2:]])
    _write(args.out, buf.getvalue())

    summary = {}
    ok = True
    for name, sched in regime_schedules().items():
        thetas = [angle_report(a, b, P).theta for a, b in sched]
        dec = all(y < x for x, y in zip(thetas, thetas[1:]))
        small = thetas[-1] < args.eps
        summary[name] = {"theta": thetas, "strictly_decreasing": dec, "below_eps": small}
        ok = ok and dec and small
    cfg = RunConfig(P.m, P.n, "angle-sweep", {"grid": args.grid, "eps": args.eps}, args.seed)
    sys.stderr.write(_report(cfg, {"regimes": summary, "ok": ok}))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_find_n(args) -> int:
    from .nullity import find_N, violations_beyond

    P = _params(args)
    (a0, a1), (b0, b1) = parse_grid(args.grid)
    if not 0 < args.eps < math.pi:
        raise UsageError("eps must lie in (0, pi)")
    if a0 != 0 or b0 != 0 or a1 > 10**7 or b1 > 400:
        raise UsageError("find-N grid must start at 0:..,0:.. with a <= 1e7, b <= 400")
    res = find_N(args.eps, P, a1, b1)
    res.violations_beyond = violations_beyond(res, P)
    cfg = RunConfig(P.m, P.n, "find-N", {"grid": args.grid, "eps": args.eps}, args.seed)
    _write(args.out, _report(cfg, res.to_json()))
    if res.violations_beyond:
        return EXIT_VIOLATION
    return EXIT_OK if res.status == "conclusive" else EXIT_INCONCLUSIVE


def cmd_nullity(args) -> int:
    from .nullity import nullity_sweep

    P = _params(args)
    if not 0 <= args.L <= 10:
        raise UsageError("L must lie in [0, 10]")
    if not 0 < args.delta <= 1:
        raise UsageError("delta must lie in (0, 1]")
    rep = nullity_sweep(args.L, args.delta, P)
    cfg = RunConfig(P.m, P.n, "nullity", {"L": args.L, "delta": args.delta}, args.seed)
    _write(args.out, _report(cfg, rep.to_json()))
    # a grid-limited N can only be too small, which shrinks the near radius;
    # zero far failures therefore stands whatever N_status says
    return EXIT_OK if rep.ok() else EXIT_VIOLATION


def cmd_boundary_verify(args) -> int:
    from .boundary import asymptotic_slope, image_curve, verify_action, verify_parity

    P = _params(args)
    if not 0 < args.samples <= 5000:
        raise UsageError("samples must lie in (0, 5000]")
    rng = random.Random(args.seed)
    action = verify_action(P, rng, args.samples, L=5)
    parity = verify_parity(P, L=6)
    slopes = []
    for gen in ("s", "t"):
        for p, q in ((0, 1), (1, 1), (1, 2), (3, 2)):
            rep = asymptotic_slope(image_curve(p, q, gen, P))
            row = rep.to_json()
            row["ok"] = rep.decreasing() and rep.final_residual < 1e-3
            slopes.append(row)
    ok = all(r["ok"] for r in action) and not parity and all(r["ok"] for r in slopes)
    cfg = RunConfig(P.m, P.n, "boundary-verify", {"samples": args.samples}, args.seed)
    body = {
        "action_failures": [r for r in action if not r["ok"]],
        "action_checked": len(action),
        "parity_failures": parity,
        "slopes": slopes,
        "ok": ok,
    }
    _write(args.out, _report(cfg, body))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gbs_classify(args) -> int:
    from .gbs import GraphParseError, classify, parse_graph

    text = args.graph
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = text.replace(";", "\n")
    try:
        G = parse_graph(text)
    except GraphParseError as exc:
        raise UsageError(str(exc)) from None
    cls = classify(G)
    cfg = RunConfig(0, 0, "gbs-classify", {"graph": G.to_text()}, args.seed)
    _write(args.out, _report(cfg, cls.to_json()))
    return EXIT_OK


# -- wiring ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bslab", description="Baumslag-Solitar boundary laboratory")
    parser.add_argument("--version", action="version", version=f"bslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group(p, m=2, n=3):
        p.add_argument("--m", type=int, default=m)
        p.add_argument("--n", type=int, default=n)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")

    p = sub.add_parser("normal-form", help="reduce a word to normal form")
    group(p)
    p.add_argument("word")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("render-tiling", help="write an SVG of the standard or compressed tiling")
    group(p)
    p.add_argument("--kind", choices=("std", "compressed"), default="std")
    p.add_argument("--grid", default="0:8,-2:4")
    p.add_argument("--labels", action="store_true")
    p.set_defaults(func=cmd_render_tiling)

    p = sub.add_parser("angle-sweep", help="CSV of tile angles over a grid")
    group(p)
    p.add_argument("--grid", default="0:64,0:64")
    p.add_argument("--eps", type=float, default=0.01)
    p.set_defaults(func=cmd_angle_sweep)

    p = sub.add_parser("find-N", help="radius beyond which grid tiles subtend less than eps")
    group(p)
    p.add_argument("--grid", default="0:1000000,0:60")
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=cmd_find_n)

    p = sub.add_parser("nullity", help="classify tile translates over a word-length ball")
    group(p)
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(func=cmd_nullity)

    p = sub.add_parser("boundary-verify", help="check the boundary action and slope limits")
    group(p)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_boundary_verify)

    p = sub.add_parser("gbs-classify", help="Whyte class of a graph of Z's (file or inline text)")
    p.add_argument("graph", help="path, or inline text with ';' separating lines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gbs_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"bslab {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
