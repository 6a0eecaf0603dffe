"""
The Bass-Serre tree T(|m|, n) of BS(m, n).

Vertices are left cosets g<s>.  A coset is addressed by the vertex path from
the base vertex v0, a tuple of steps ``(eps, index)``: ``eps = +1`` follows an
outgoing edge (``index < n``), ``eps = -1`` an incoming one (``index < |m|``).
The address of g<s> is the normal form of g with its final s-exponent
dropped, so the tree is never stored; it is generated on demand.

Ends are infinite non-backtracking step sequences.  An end is held as an
eventually periodic *seed* (prefix + repeating tail) optionally translated by
a group element.  The translate is streamed by running the normal-form
machine along the seed: past the first ``d(v0, g v0) + 1`` steps the output
only grows, and from then on it is a transducer whose state is the carried
s-exponent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .core import GroupParams, NormalForm, _Machine, multiply

__all__ = [
    "TreeVertex",
    "TreeEnd",
    "EndComparisonError",
    "base_vertex",
    "vertex_of",
    "neighbors",
    "act_vertex",
    "tree_distance",
    "vertex_height",
    "act_end",
    "tau_plus",
    "tau_minus",
    "truncated_tree",
]

Step = tuple[int, int]


class EndComparisonError(RuntimeError):
    """Equality of two lazily presented ends could not be settled within budget."""


def _backtracks(prev: Step, step: Step) -> bool:
    return prev[0] == -step[0] and step[1] == 0


def _check_steps(params: GroupParams, steps) -> None:
    prev = None
    for eps, idx in steps:
        if eps not in (1, -1) or not 0 <= idx < params.modulus(eps):
            raise ValueError(f"invalid step {(eps, idx)} in {params}")
        if prev is not None and _backtracks(prev, (eps, idx)):
            raise ValueError(f"backtracking step {(eps, idx)} after {prev}")
        prev = (eps, idx)


@dataclass(frozen=True)
class TreeVertex:
    params: GroupParams
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        _check_steps(self.params, self.steps)

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def height(self) -> int:
        return vertex_height(self)

    def element(self) -> NormalForm:
        """The coset representative whose final s-exponent is 0."""
        return NormalForm.from_steps(self.params, self.steps, 0)

    def to_json(self) -> list:
        g = self.element()
        return [g.a0] + [[eps, a] for eps, a in g.syllables]

    @classmethod
    def from_json(cls, params: GroupParams, data: list) -> "TreeVertex":
        g = NormalForm(params, int(data[0]), tuple((int(e), int(a)) for e, a in data[1:]))
        return vertex_of(g)

    def __repr__(self):
        return f"TreeVertex({list(self.steps)})"


def base_vertex(params: GroupParams) -> TreeVertex:
    return TreeVertex(params, ())


def vertex_of(g: NormalForm) -> TreeVertex:
    """The vertex g.v0 = g<s>."""
    return TreeVertex(g.params, g.steps)


def child(v: TreeVertex, step: Step) -> TreeVertex:
    return TreeVertex(v.params, v.steps + (step,))


def neighbor(v: TreeVertex, step: Step) -> TreeVertex:
    """Vertex of ``v . s^index t^eps``: a child, or the parent on a backtrack."""
    if v.steps and _backtracks(v.steps[-1], step):
        return TreeVertex(v.params, v.steps[:-1])
    return TreeVertex(v.params, v.steps + (step,))


def neighbors(v: TreeVertex) -> list[tuple[Step, TreeVertex]]:
    P = v.params
    out = [((1, j), neighbor(v, (1, j))) for j in range(P.n)]
    out += [((-1, j), neighbor(v, (-1, j))) for j in range(abs(P.m))]
    return out


def act_vertex(g: NormalForm, v: TreeVertex) -> TreeVertex:
    if g.params != v.params:
        from .core import ParameterMismatch

        raise ParameterMismatch(f"{g.params} vs {v.params}")
    return vertex_of(multiply(g, v.element()))


def _lcp(a, b) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def tree_distance(u: TreeVertex, v: TreeVertex) -> int:
    return len(u.steps) + len(v.steps) - 2 * _lcp(u.steps, v.steps)


def vertex_height(v: TreeVertex) -> int:
    return sum(eps for eps, _ in v.steps)


def truncated_tree(params: GroupParams, depth: int) -> set[TreeVertex]:
    """All vertices within ``depth`` of v0, found by breadth-first search over neighbors."""
    start = base_vertex(params)
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for _, w in neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# -- ends -----------------------------------------------------------------


class TreeEnd:
    """A point of the end space of T(|m|, n).

    ``prefix`` and ``tail`` describe the seed ray ``prefix + tail + tail + ...``;
    ``element`` (if not None) is applied to it.  Equality is semantic: two
    presentations compare equal when they describe the same ray.
    """

    __slots__ = ("params", "prefix", "tail", "element", "_hash")

    def __init__(self, params: GroupParams, prefix=(), tail=((1, 0),), element: NormalForm | None = None):
        prefix = tuple((int(e), int(i)) for e, i in prefix)
        tail = tuple((int(e), int(i)) for e, i in tail)
        if not tail:
            raise ValueError("an end needs a non-empty periodic tail")
        _check_steps(params, prefix + tail + tail)
        if element is not None:
            if element.params != params:
                raise ValueError("element from a different group")
            if element.is_identity():
                element = None
        self.params = params
        self.prefix = prefix
        self.tail = tail
        self.element = element
        self._hash = None

    # -- construction ----------------------------------------------------

    @classmethod
    def through(cls, v: TreeVertex) -> "TreeEnd":
        """A ray from v0 through ``v``, continued by a constant non-backtracking tail."""
        if v.steps and v.steps[-1][0] == -1:
            tail = ((-1, 0),)
        else:
            tail = ((1, 0),)
        return cls(v.params, v.steps, tail)

    @property
    def is_periodic(self) -> bool:
        return self.element is None

    def seed(self) -> "TreeEnd":
        return TreeEnd(self.params, self.prefix, self.tail)

    # -- streaming -------------------------------------------------------

    def _seed_steps(self) -> Iterator[tuple[Step, tuple]]:
        for i, st in enumerate(self.prefix):
            yield st, ("p", i)
        for phase in itertools.count():
            k = phase % len(self.tail)
            yield self.tail[k], ("t", k)

    def stream(self) -> Iterator[tuple[Step, tuple | None]]:
        """Yield ``(step, state)``; equal states predict equal futures.

        ``state`` is None for steps emitted before the stream settles.
        """
        if self.element is None:
            yield from self._seed_steps()
            return
        machine = _Machine.of(self.element)
        start_depth = len(machine.steps)
        settled = False
        for count, ((eps, idx), seed_state) in enumerate(self._seed_steps()):
            machine.mul_s(idx)
            popped = machine.mul_t(eps)
            if settled:
                yield machine.steps[-1], (machine.tail, seed_state)
                machine.steps.pop()
                continue
            if not popped:
                settled = True
                for st in machine.steps[:-1]:
                    yield st, None
                yield machine.steps[-1], (machine.tail, seed_state)
                machine.steps.clear()
            elif count > start_depth + 1:
                raise RuntimeError("end image failed to stabilise within the element's length")

    def steps(self) -> Iterator[Step]:
        for st, _ in self.stream():
            yield st

    def prefix_steps(self, depth: int) -> tuple[Step, ...]:
        return tuple(itertools.islice(self.steps(), depth))

    def vertex_at(self, depth: int) -> TreeVertex:
        return TreeVertex(self.params, self.prefix_steps(depth))

    def stabilization_depth(self) -> int:
        """Number of seed steps consumed before the translated ray stops retracting."""
        if self.element is None:
            return 0
        machine = _Machine.of(self.element)
        for count, ((eps, idx), _) in enumerate(self._seed_steps()):
            machine.mul_s(idx)
            if not machine.mul_t(eps):
                return count + 1
        raise AssertionError("unreachable")

    # -- periodic presentation -------------------------------------------

    def to_periodic(self, budget: int = 4096) -> "TreeEnd | None":
        """An equal end without a translating element, if one is found in ``budget`` steps."""
        if self.element is None:
            return self.canonical()
        out: list[Step] = []
        seen: dict = {}
        for pos, (st, state) in enumerate(itertools.islice(self.stream(), budget)):
            out.append(st)
            if state is None:
                continue
            if state in seen:
                i = seen[state]
                return TreeEnd(self.params, out[: i + 1], out[i + 1 :]).canonical()
            seen[state] = pos
        return None

    def canonical(self) -> "TreeEnd":
        """Shortest prefix and primitive tail (only for periodic presentations)."""
        if self.element is not None:
            raise ValueError("canonical() needs a periodic presentation")
        tail = self.tail
        for k in range(1, len(tail) + 1):
            if len(tail) % k == 0 and tail == tail[:k] * (len(tail) // k):
                tail = tail[:k]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == tail[-1]:
            prefix = prefix[:-1]
            tail = tail[-1:] + tail[:-1]
        return TreeEnd(self.params, prefix, tail)

    # -- comparison ------------------------------------------------------

    def equals(self, other: "TreeEnd", budget: int = 20000) -> bool:
        if self.params != other.params:
            return False
        if (self.prefix, self.tail, self.element) == (other.prefix, other.tail, other.element):
            return True
        seen = set()
        for (a, sa), (b, sb) in itertools.islice(zip(self.stream(), other.stream()), budget):
            if a != b:
                return False
            if sa is not None and sb is not None:
                key = (sa, sb)
                if key in seen:
                    return True
                seen.add(key)
        raise EndComparisonError(f"undecided after {budget} steps")

    def __eq__(self, other):
        if not isinstance(other, TreeEnd):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params, self.prefix_steps(12)))
        return self._hash

    def agrees(self, other: "TreeEnd", depth: int) -> bool:
        return self.prefix_steps(depth) == other.prefix_steps(depth)

    def to_json(self) -> dict:
        periodic = self.to_periodic()
        if periodic is not None:
            return {"prefix": [list(s) for s in periodic.prefix], "tail": [list(s) for s in periodic.tail]}
        return {
            "prefix": [list(s) for s in self.prefix],
            "tail": [list(s) for s in self.tail],
            "translate": self.element.to_json(),
        }

    @classmethod
    def from_json(cls, params: GroupParams, data: dict) -> "TreeEnd":
        element = None
        if "translate" in data:
            element = NormalForm.from_json(params, data["translate"])
        return cls(params, data["prefix"], data["tail"], element)

    def __repr__(self):
        head = ",".join(f"{'+' if e > 0 else '-'}{i}" for e, i in self.prefix_steps(8))
        return f"TreeEnd({head},...)"


def tau_plus(params: GroupParams) -> TreeEnd:
    """The end of the ray t, t^2, t^3, ... through v0."""
    return TreeEnd(params, (), ((1, 0),))


def tau_minus(params: GroupParams) -> TreeEnd:
    return TreeEnd(params, (), ((-1, 0),))


def act_end(g: NormalForm, e: TreeEnd) -> TreeEnd:
    if g.params != e.params:
        from .core import ParameterMismatch

        raise ParameterMismatch(f"{g.params} vs {e.params}")
    element = g if e.element is None else multiply(g, e.element)
    return TreeEnd(e.params, e.prefix, e.tail, element)
