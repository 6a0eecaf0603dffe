"""
Word arithmetic in the Baumslag-Solitar group BS(m,n) = <s, t | t s^m t^-1 = s^n>.

Elements are kept in a Britton normal form

    s^a0 t^e1 s^a1 ... t^ek s^ak

where every exponent except the last is a transversal representative for the
stable letter that follows it: ``0 <= a < n`` before ``t`` and
``0 <= a < |m|`` before ``t^-1``.  Combined with the absence of pinches
(``t s^0 t^-1`` or ``t^-1 s^0 t``) this form is unique.

Normalisation pushes s-powers to the right with

    s^a t    = s^(a mod n)   t    s^(m * (a // n))
    s^a t^-1 = s^(a mod |m|) t^-1 s^(n * sgn(m) * (a // |m|))

so a word is reduced in a single left-to-right pass.  Exponents are Python
integers and grow without bound (like n^k) along long words.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "GroupParams",
    "NormalForm",
    "ParameterMismatch",
    "BudgetExceeded",
    "WordSyntaxError",
    "parse_word",
    "reduce",
    "multiply",
    "invert",
    "height",
    "expand",
    "ball",
]

Step = tuple[int, int]


class ParameterMismatch(ValueError):
    """Raised when elements of different groups are combined."""


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its resource budget."""


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class GroupParams:
    """The pair (m, n) defining BS(m, n); requires 0 < |m| <= n."""

    m: int
    n: int

    def __post_init__(self):
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise TypeError("m and n must be integers")
        if not (0 < abs(self.m) <= self.n):
            raise ValueError(f"need 0 < |m| <= n, got m={self.m}, n={self.n}")

    def __str__(self):
        return f"BS({self.m},{self.n})"

    # transversal size and carried multiplier for a stable letter t^eps
    def modulus(self, eps: int) -> int:
        return self.n if eps > 0 else abs(self.m)

    def carry(self, eps: int) -> int:
        if eps > 0:
            return self.m
        return self.n if self.m > 0 else -self.n

    @property
    def identity(self) -> "NormalForm":
        return NormalForm(self, 0, ())

    @property
    def s(self) -> "NormalForm":
        return NormalForm(self, 1, ())

    @property
    def t(self) -> "NormalForm":
        return NormalForm(self, 0, ((1, 0),))

    def element(self, word: "str | Iterable[str]") -> "NormalForm":
        """Reduce a word given as text (``"tsST"``, ``"s^2 t^{-1}"``) or letters."""
        if isinstance(word, str):
            word = parse_word(word)
        return reduce(word, self)

    def relator(self) -> "NormalForm":
        return self.element(f"t s^{self.m} t^-1 s^{-self.n}")


@dataclass(frozen=True)
class NormalForm:
    """Canonical form of a group element.

    ``syllables[i] = (eps, a)`` stands for ``t^eps s^a``; the element is
    ``s^a0`` followed by the syllables in order.
    """

    params: GroupParams
    a0: int
    syllables: tuple[Step, ...] = field(default=())

    # -- structural views -------------------------------------------------

    @property
    def exponents(self) -> tuple[int, ...]:
        return (self.a0,) + tuple(a for _, a in self.syllables)

    @property
    def tail(self) -> int:
        """The final, unconstrained s-exponent."""
        return self.syllables[-1][1] if self.syllables else self.a0

    @property
    def steps(self) -> tuple[Step, ...]:
        """Tree steps ``(eps, index)`` of the vertex path from v0 to g.v0."""
        exps = self.exponents
        return tuple((eps, exps[i]) for i, (eps, _) in enumerate(self.syllables))

    @classmethod
    def from_steps(cls, params: GroupParams, steps: Iterable[Step], tail: int = 0) -> "NormalForm":
        steps = tuple(steps)
        if not steps:
            return cls(params, tail, ())
        exps = [idx for _, idx in steps[1:]] + [tail]
        return cls(params, steps[0][1], tuple((eps, a) for (eps, _), a in zip(steps, exps)))

    def is_identity(self) -> bool:
        return self.a0 == 0 and not self.syllables

    def validate(self) -> None:
        """Check the transversal and no-pinch conditions; raise ValueError otherwise."""
        P = self.params
        prev_eps = 0
        prev_idx = None
        for eps, idx in self.steps:
            if eps not in (1, -1):
                raise ValueError(f"bad stable-letter sign {eps}")
            if not 0 <= idx < P.modulus(eps):
                raise ValueError(f"exponent {idx} outside transversal for t^{eps}")
            if prev_eps == -eps and idx == 0 and prev_idx is not None:
                raise ValueError("pinch in normal form")
            prev_eps, prev_idx = eps, idx

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        return multiply(self, other)

    def __invert__(self) -> "NormalForm":
        return invert(self)

    def __pow__(self, k: int) -> "NormalForm":
        base = self if k >= 0 else invert(self)
        result = self.params.identity
        for _ in range(abs(k)):
            result = multiply(result, base)
        return result

    @property
    def height(self) -> int:
        return sum(eps for eps, _ in self.syllables)

    def word_length_bound(self) -> int:
        return abs(self.a0) + sum(1 + abs(a) for _, a in self.syllables)

    # -- formatting --------------------------------------------------------

    def to_json(self) -> dict:
        return {"a0": self.a0, "syllables": [[eps, a] for eps, a in self.syllables]}

    @classmethod
    def from_json(cls, params: GroupParams, data: dict) -> "NormalForm":
        g = cls(params, int(data["a0"]), tuple((int(e), int(a)) for e, a in data["syllables"]))
        g.validate()
        return g

    def __str__(self):
        parts: list[str] = []

        def s_power(a):
            if a:
                parts.append("s" if a == 1 else f"s^{a}")

        s_power(self.a0)
        run = 0
        for eps, a in self.syllables:
            if run and (run > 0) == (eps > 0):
                run += eps
            else:
                if run:
                    parts.append(_t_power(run))
                run = eps
            if a:
                parts.append(_t_power(run))
                run = 0
                s_power(a)
        if run:
            parts.append(_t_power(run))
        return " ".join(parts) if parts else "1"

    def __repr__(self):
        return f"<{self.params}: {self}>"


def _t_power(k):
    return "t" if k == 1 else f"t^{k}"


_TOKEN = re.compile(r"\s*([sStT])(?:\s*\^\s*\{?\s*([+-]?\d+)\s*\}?)?")


def parse_word(text: str) -> str:
    """Parse a word into a string of letters over ``sStT`` (capitals are inverses).

    Accepts runs like ``"tsST"`` as well as power syntax ``"s^3 t^{-1}"``.
    ``"1"`` and the empty string denote the identity.
    """
    text = text.strip()
    if text in ("", "1"):
        return ""
    letters: list[str] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace() or text[pos] == "*":
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise WordSyntaxError(f"unexpected {text[pos]!r} at column {pos + 1} in {text!r}")
        letter, power = match.group(1), match.group(2)
        k = int(power) if power is not None else 1
        if k < 0:
            letter = letter.swapcase()
        letters.append(letter * abs(k))
        pos = match.end()
    return "".join(letters)


class _Machine:
    """Right-multiplication state: a vertex path plus the trailing s-exponent."""

    __slots__ = ("params", "steps", "tail")

    def __init__(self, params: GroupParams, steps: list[Step] | None = None, tail: int = 0):
        self.params = params
        self.steps = steps if steps is not None else []
        self.tail = tail

    @classmethod
    def of(cls, g: NormalForm) -> "_Machine":
        return cls(g.params, list(g.steps), g.tail)

    def mul_s(self, k: int) -> None:
        self.tail += k

    def mul_t(self, eps: int) -> bool:
        """Multiply by t^eps; return True when a pinch cancelled a stable letter."""
        P = self.params
        q, r = divmod(self.tail, P.modulus(eps))
        carry = P.carry(eps) * q
        if r == 0 and self.steps and self.steps[-1][0] == -eps:
            _, idx = self.steps.pop()
            self.tail = idx + carry
            return True
        self.steps.append((eps, r))
        self.tail = carry
        return False

    def mul_letter(self, letter: str) -> None:
        if letter == "s":
            self.tail += 1
        elif letter == "S":
            self.tail -= 1
        elif letter == "t":
            self.mul_t(1)
        elif letter == "T":
            self.mul_t(-1)
        else:
            raise WordSyntaxError(f"not a generator: {letter!r}")

    def mul_element(self, h: NormalForm) -> None:
        self.mul_s(h.a0)
        for eps, a in h.syllables:
            self.mul_t(eps)
            self.mul_s(a)

    def result(self) -> NormalForm:
        return NormalForm.from_steps(self.params, self.steps, self.tail)


def reduce(word: "str | Iterable[str]", params: GroupParams) -> NormalForm:
    """Normal form of the element spelled by ``word`` (letters ``s S t T``)."""
    machine = _Machine(params)
    for letter in word:
        machine.mul_letter(letter)
    return machine.result()


def _check_same(g: NormalForm, h: NormalForm) -> None:
    if g.params != h.params:
        raise ParameterMismatch(f"{g.params} vs {h.params}")


def multiply(g: NormalForm, h: NormalForm) -> NormalForm:
    _check_same(g, h)
    machine = _Machine.of(g)
    machine.mul_element(h)
    return machine.result()


def invert(g: NormalForm) -> NormalForm:
    machine = _Machine(g.params, [], -g.tail)
    exps = g.exponents
    for i in range(len(g.syllables) - 1, -1, -1):
        machine.mul_t(-g.syllables[i][0])
        machine.mul_s(-exps[i])
    return machine.result()


def height(g: NormalForm) -> int:
    """Exponent sum of t; the homomorphism BS(m,n) -> Z killing <s>."""
    return g.height


def expand(g: NormalForm) -> str:
    """A word spelling ``g`` (s-powers written out letter by letter)."""
    out = []

    def s_run(a):
        out.append(("s" if a > 0 else "S") * abs(a))

    s_run(g.a0)
    for eps, a in g.syllables:
        out.append("t" if eps > 0 else "T")
        s_run(a)
    return "".join(out)


def iter_ball(L: int, params: GroupParams, max_elements: int = 2_000_000) -> Iterator[tuple[NormalForm, int]]:
    """Breadth-first enumeration of ``(element, word length)`` up to length ``L``."""
    if L < 0:
        raise ValueError("L must be non-negative")
    gens = [params.s, invert(params.s), params.t, invert(params.t)]
    seen = {params.identity}
    frontier = deque([params.identity])
    yield params.identity, 0
    for radius in range(1, L + 1):
        nxt = deque()
        for g in frontier:
            for x in gens:
                h = multiply(g, x)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > max_elements:
                        raise BudgetExceeded(
                            f"ball({L}) in {params} exceeds {max_elements} elements at radius {radius}"
                        )
                    nxt.append(h)
                    yield h, radius
        frontier = nxt


def ball(L: int, params: GroupParams, max_elements: int = 2_000_000) -> set[NormalForm]:
    """All elements of word length at most ``L`` in the generators s, t."""
    return {g for g, _ in iter_ball(L, params, max_elements)}
