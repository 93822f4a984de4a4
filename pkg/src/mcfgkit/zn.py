"""Words over free-abelian generators and their geometry as lattice paths.

Tokens are "a3" (one step forward along axis 3) and "A3" (one step back).
All path coordinates are stored doubled so that edge midpoints are exact
integers: a unit step changes one coordinate by 2 and a path of L edges is
parameterized by half-units p = 0..2L. Lattice points sit at even p (all
coordinates even) and edge midpoints at odd p (exactly one odd coordinate).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .grammar import CombineSchema, Grammar, Rule, Word, term, var

_TOKEN_RE = re.compile(r"^([aA])([1-9][0-9]*)$")

Vec = tuple[int, ...]


def make_token(axis: int, sign: int) -> str:
    if axis < 1 or sign not in (1, -1):
        raise ValueError(f"bad token spec: axis={axis}, sign={sign}")
    return f"{'a' if sign == 1 else 'A'}{axis}"


def token_step(token: str) -> tuple[int, int]:
    """Decode a token to (axis, sign); axes are 1-based."""
    m = _TOKEN_RE.match(token)
    if m is None:
        raise ValueError(f"malformed generator token: {token!r}")
    return int(m.group(2)), 1 if m.group(1) == "a" else -1


def parse_word(text: str) -> Word:
    tokens = tuple(text.split())
    for t in tokens:
        token_step(t)
    return tokens


def format_word(word: Word) -> str:
    return " ".join(word)


def alphabet(n: int) -> tuple[str, ...]:
    """Terminals a1, A1, ..., an, An in declaration order."""
    out: list[str] = []
    for axis in range(1, n + 1):
        out.append(make_token(axis, 1))
        out.append(make_token(axis, -1))
    return tuple(out)


def displacement(word: Word, n: int) -> Vec:
    """Net movement of a word as an n-vector of unit steps."""
    disp = [0] * n
    for token in word:
        axis, sign = token_step(token)
        if axis > n:
            raise ValueError(f"token {token!r}: axis {axis} out of range for n={n}")
        disp[axis - 1] += sign
    return tuple(disp)


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def l1(v: Vec) -> int:
    return sum(abs(c) for c in v)


@dataclass(frozen=True)
class LatticePath:
    """A path of unit steps on the n-dimensional integer lattice, doubled coordinates."""

    n: int
    start: Vec
    steps: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.start) != self.n:
            raise ValueError(f"start has {len(self.start)} coordinates, expected {self.n}")
        if any(c % 2 != 0 for c in self.start):
            raise ValueError("start must be a lattice point: all doubled coordinates even")
        for axis, sign in self.steps:
            if not 1 <= axis <= self.n or sign not in (1, -1):
                raise ValueError(f"bad step: axis={axis}, sign={sign}")

    def __len__(self) -> int:
        """Number of edges."""
        return len(self.steps)

    @cached_property
    def points(self) -> tuple[Vec, ...]:
        """Doubled coordinates at every half-unit parameter 0..2L."""
        pts = [self.start]
        cur = list(self.start)
        for axis, sign in self.steps:
            for _ in range(2):
                cur[axis - 1] += sign
                pts.append(tuple(cur))
        return tuple(pts)

    def point(self, p: int) -> Vec:
        if not 0 <= p <= 2 * len(self.steps):
            raise ValueError(f"parameter {p} out of range 0..{2 * len(self.steps)}")
        return self.points[p]

    def step_at(self, p: int) -> tuple[int, int]:
        """The (axis, sign) of the edge whose interior contains odd parameter p."""
        if p % 2 == 0:
            raise ValueError(f"parameter {p} is a lattice point, not an edge interior")
        return self.steps[p // 2]

    def total_doubled(self) -> Vec:
        return vsub(self.points[-1], self.points[0])


def word_to_path(word: Word, n: int, start: Vec | None = None) -> LatticePath:
    """Trace a word as a lattice path; start is given in doubled coordinates."""
    if start is None:
        start = (0,) * n
    steps = []
    for token in word:
        axis, sign = token_step(token)
        if axis > n:
            raise ValueError(f"token {token!r}: axis {axis} out of range for n={n}")
        steps.append((axis, sign))
    return LatticePath(n, tuple(start), tuple(steps))


class GrammarParams(NamedTuple):
    """Derived grammar sizes for rank n: k = floor((n+1)/2), m = 8k - 2.

    A plain (k, m) pair; the dimension n travels alongside as an explicit
    argument wherever it is needed.
    """

    k: int
    m: int


def grammar_params(n: int) -> GrammarParams:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    k = (n + 1) // 2
    return GrammarParams(k=k, m=8 * k - 2)


def make_grammar(n: int) -> Grammar:
    """Grammar whose language is the set of words with zero displacement in rank n.

    One start rule flattens an m-tuple, one axiom derives the all-empty
    tuple, one axiom per axis derives (a_i, A_i, eps, ...), and a single
    schema carries the full regrouping family for the arity-m nonterminal.
    """
    params = grammar_params(n)
    m = params.m
    xs = tuple(f"x{i}" for i in range(1, m + 1))
    rules = [Rule("S", (tuple(var(x) for x in xs),), (("I", xs),))]
    rules.append(Rule("I", tuple(() for _ in range(m))))
    for axis in range(1, n + 1):
        templates = [(term(make_token(axis, 1)),), (term(make_token(axis, -1)),)]
        templates.extend(() for _ in range(m - 2))
        rules.append(Rule("I", tuple(templates)))
    return Grammar(
        terminals=alphabet(n),
        nonterminals=(("S", 1), ("I", m)),
        start="S",
        rules=tuple(rules),
        schemas=(CombineSchema("I", m),),
    )
