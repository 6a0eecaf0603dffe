"""
Graphs of infinite cyclic groups and Whyte's trichotomy.

An edge ``(u, v, mu, mv)`` identifies ``x_u^mu`` with ``x_v^mv``.  Input text
uses one declaration per line::

    vertex a
    edge a b 2 3
    loop a 2 3        # an edge from a to itself
    loop 2 3          # shorthand: single vertex "s" with one loop

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import hermite_normal_form

__all__ = [
    "GraphOfZ",
    "GraphParseError",
    "Presentation",
    "ModularImage",
    "WhyteClass",
    "parse_graph",
    "presentation",
    "spanning_tree",
    "modular_image",
    "classify",
    "bass_serre_valences",
    "random_graph",
]

Edge = tuple[str, str, int, int]


class GraphParseError(ValueError):
    pass


@dataclass
class GraphOfZ:
    vertices: list[str]
    edges: list[Edge]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        vs = set(self.vertices)
        for u, v, mu, mv in self.edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge {u}-{v} has an undeclared endpoint")
            if mu == 0 or mv == 0:
                raise ValueError("edge labels must be nonzero")
        if len(_component(self, self.vertices[0])) != len(self.vertices):
            raise ValueError("graph is not connected")

    @classmethod
    def loop(cls, m: int, n: int) -> "GraphOfZ":
        return cls(["s"], [("s", "s", m, n)])

    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"edge {u} {v} {mu} {mv}" for u, v, mu, mv in self.edges]
        return "\n".join(lines) + "\n"


def _component(G: GraphOfZ, start: str) -> set:
    adj: dict = {v: [] for v in G.vertices}
    for u, v, *_ in G.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {start}
    todo = [start]
    while todo:
        for w in adj[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def _label(tok: str, lineno: int) -> int:
    try:
        k = int(tok)
    except ValueError:
        raise GraphParseError(f"line {lineno}: label {tok!r} is not an integer") from None
    if k == 0:
        raise GraphParseError(f"line {lineno}: edge label must be nonzero")
    return k


def parse_graph(text: str) -> GraphOfZ:
    vertices: list[str] = []
    edges: list[Edge] = []
    edge_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "vertex" and len(tok) == 2:
            if tok[1] in vertices:
                raise GraphParseError(f"line {lineno}: vertex {tok[1]!r} declared twice")
            vertices.append(tok[1])
        elif kind == "edge" and len(tok) == 5:
            edges.append((tok[1], tok[2], _label(tok[3], lineno), _label(tok[4], lineno)))
            edge_lines.append(lineno)
        elif kind == "loop" and len(tok) == 3:
            if "s" not in vertices:
                vertices.append("s")
            edges.append(("s", "s", _label(tok[1], lineno), _label(tok[2], lineno)))
            edge_lines.append(lineno)
        elif kind == "loop" and len(tok) == 4:
            edges.append((tok[1], tok[1], _label(tok[2], lineno), _label(tok[3], lineno)))
            edge_lines.append(lineno)
        else:
            raise GraphParseError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if not vertices:
        raise GraphParseError("line 1: no vertices declared")
    for (u, v, _, _), lineno in zip(edges, edge_lines):
        for w in (u, v):
            if w not in vertices:
                raise GraphParseError(f"line {lineno}: edge endpoint {w!r} is not a declared vertex")
    G = GraphOfZ.__new__(GraphOfZ)
    G.vertices, G.edges = vertices, edges
    missing = set(vertices) - _component(G, vertices[0])
    if missing:
        raise GraphParseError(f"line {len(text.splitlines())}: graph is disconnected ({sorted(missing)} unreachable)")
    return GraphOfZ(vertices, edges)


# -- spanning trees and presentations ------------------------------------------------


def spanning_tree(G: GraphOfZ, rng: random.Random | None = None) -> list[int]:
    """Indices of edges forming a spanning tree (random edge order if ``rng`` is given)."""
    order = list(range(len(G.edges)))
    if rng is not None:
        rng.shuffle(order)
    parent = {v: v for v in G.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for i in order:
        u, v, *_ = G.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append(i)
    return sorted(tree)


@dataclass
class Presentation:
    generators: list[str]
    relators: list[tuple[str, str]]  # (lhs, rhs) words

    def __str__(self):
        rels = ", ".join(f"{a} = {b}" for a, b in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def _pow(x: str, k: int) -> str:
    return x if k == 1 else f"{x}^{k}"


def presentation(G: GraphOfZ, tree: list[int] | None = None) -> Presentation:
    """One generator per vertex and per edge outside the spanning tree; one relator per edge."""
    tree = spanning_tree(G) if tree is None else tree
    off = [i for i in range(len(G.edges)) if i not in tree]
    stable = {i: ("t" if len(off) == 1 else f"t{k + 1}") for k, i in enumerate(off)}
    rels = []
    for i, (u, v, mu, mv) in enumerate(G.edges):
        if i in stable:
            e = stable[i]
            rels.append((f"{e} {_pow(u, mu)} {_pow(e, -1)}", _pow(v, mv)))
        else:
            rels.append((_pow(u, mu), _pow(v, mv)))
    return Presentation(list(G.vertices) + [stable[i] for i in off], rels)


# -- the modular homomorphism -------------------------------------------------------


@dataclass(frozen=True)
class ModularImage:
    """A subgroup of the nonzero rationals, held by a canonical generating set."""

    generators: tuple[Fraction, ...]

    @property
    def unimodular(self) -> bool:
        return all(abs(g) == 1 for g in self.generators)

    def __str__(self):
        if not self.generators:
            return "{1}"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def _edge_moduli(G: GraphOfZ, tree: list[int]) -> list[Fraction]:
    """Modulus of each non-tree edge, after expressing vertex groups through the root."""
    # x_v is commensurable with x_root^scale[v]
    adj: dict = {v: [] for v in G.vertices}
    for i in tree:
        u, v, mu, mv = G.edges[i]
        adj[u].append((v, Fraction(mu, mv)))
        adj[v].append((u, Fraction(mv, mu)))
    root = G.vertices[0]
    scale = {root: Fraction(1)}
    todo = deque([root])
    while todo:
        u = todo.popleft()
        for v, r in adj[u]:
            if v not in scale:
                scale[v] = scale[u] * r
                todo.append(v)
    out = []
    for i, (u, v, mu, mv) in enumerate(G.edges):
        if i not in tree:
            out.append(scale[v] * mv / (scale[u] * mu))
    return out


def _canonical_subgroup(gens: list[Fraction]) -> tuple[Fraction, ...]:
    """Canonical generators via the Hermite normal form of exponent vectors.

    The sign is a Z/2 coordinate; it is lifted to Z together with the extra
    generator ``2 e_sign`` so that the lattice, and hence its HNF, is canonical.
    """
    gens = [g for g in gens if g != 1]
    if not gens:
        return ()
    primes = sorted({p for g in gens for p in sympy.factorint(abs(g.numerator) * g.denominator)})
    cols = []
    for g in gens:
        fn = sympy.factorint(abs(g.numerator))
        fd = sympy.factorint(g.denominator)
        cols.append([1 if g < 0 else 0] + [fn.get(p, 0) - fd.get(p, 0) for p in primes])
    cols.append([2] + [0] * len(primes))
    A = sympy.Matrix(cols).T  # one column per generator
    H = hermite_normal_form(A)
    out = []
    for j in range(H.shape[1]):
        col = [int(x) for x in H[:, j]]
        val = Fraction(-1 if col[0] % 2 else 1)
        for p, k in zip(primes, col[1:]):
            val *= Fraction(p) ** k
        if val != 1:
            out.append(val)
    return tuple(out)


def modular_image(G: GraphOfZ, tree: list[int] | None = None) -> ModularImage:
    tree = spanning_tree(G) if tree is None else tree
    return ModularImage(_canonical_subgroup(_edge_moduli(G, tree)))


# -- classification -----------------------------------------------------------------


@dataclass
class WhyteClass:
    case: int
    detail: str
    moduli: ModularImage
    certificate: str
    valences: dict = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    def to_json(self):
        return {
            "case": self.case,
            "detail": self.detail,
            "moduli": [str(g) for g in self.moduli.generators],
            "certificate": self.certificate,
            "valences": self.valences,
            "caveats": self.caveats,
            "boundary": "suspension of the tree's end space",
        }


_DETAIL = {
    1: "contains finite-index Z x F_n",
    2: "= BS(1,n), n>1",
    3: "quasi-isometric to BS(2,3)",
}

CAVEAT_CASE2 = "case-2 not excluded by full isomorphism check"


def collapse_unit_edges(G: GraphOfZ) -> GraphOfZ:
    """Repeatedly contract non-loop edges carrying a label of absolute value 1.

    If ``x_u = x_v^k`` the vertex u is redundant: its other edge labels are
    multiplied by ``k`` and moved to v.
    """
    vertices = list(G.vertices)
    edges = list(G.edges)
    changed = True
    while changed:
        changed = False
        for i, (u, v, mu, mv) in enumerate(edges):
            if u == v:
                continue
            if abs(mu) == 1:
                gone, keep, k = u, v, mv * mu
            elif abs(mv) == 1:
                gone, keep, k = v, u, mu * mv
            else:
                continue
            rest = edges[:i] + edges[i + 1 :]
            edges = []
            for a, b, la, lb in rest:
                if a == gone:
                    a, la = keep, la * k
                if b == gone:
                    b, lb = keep, lb * k
                edges.append((a, b, la, lb))
            vertices.remove(gone)
            changed = True
            break
    return GraphOfZ(vertices, edges)


def classify(G: GraphOfZ) -> WhyteClass:
    image = modular_image(G)
    valences = bass_serre_valences(G)
    if image.unimodular:
        return WhyteClass(1, _DETAIL[1], image, f"modular image {image}", valences)
    R = collapse_unit_edges(G)
    cert = "; ".join(f"{u}-{v} ({mu},{mv})" for u, v, mu, mv in R.edges)
    if len(R.vertices) == 1 and len(R.edges) == 1:
        _, _, a, b = R.edges[0]
        lo, hi = sorted((abs(a), abs(b)))
        if lo == 1 and hi > 1:
            return WhyteClass(2, _DETAIL[2], image, f"reduces to single loop {cert}", valences)
        return WhyteClass(3, _DETAIL[3], image, f"reduces to single loop {cert}", valences)
    return WhyteClass(3, _DETAIL[3], image, f"reduced graph {cert}", valences, [CAVEAT_CASE2])


def bass_serre_valences(G: GraphOfZ) -> dict[str, int]:
    """Degree of the Bass-Serre tree at vertices over each vertex of the graph."""
    deg = {v: 0 for v in G.vertices}
    for u, v, mu, mv in G.edges:
        deg[u] += abs(mu)
        deg[v] += abs(mv)
    return deg


def random_graph(rng: random.Random, max_edges: int = 6, max_label: int = 6) -> GraphOfZ:
    """A random connected graph of Z's with at most ``max_edges`` edges."""
    n_edges = rng.randint(1, max_edges)
    n_vertices = rng.randint(1, n_edges + 1 if n_edges < 5 else 5)
    n_vertices = min(n_vertices, n_edges + 1)
    names = [f"v{i}" for i in range(n_vertices)]

    def lab():
        k = rng.randint(1, max_label)
        return k if rng.random() < 0.8 else -k

    edges = []
    for i in range(1, n_vertices):
        edges.append((names[rng.randrange(i)], names[i], lab(), lab()))
    while len(edges) < n_edges:
        edges.append((rng.choice(names), rng.choice(names), lab(), lab()))
    rng.shuffle(edges)
    return GraphOfZ(names, edges)
