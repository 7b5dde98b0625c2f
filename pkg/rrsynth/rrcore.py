"""Request-response conditions, waiting times, penalties and play values."""

from __future__ import annotations

import functools
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import pandas as pd

from rrsynth.arena import Arena, LassoPlay, check_lasso, check_prefix
from rrsynth.errors import BelowRange, ParseError, SemanticError


class _Bottom:
    """Cap marker: some waiting time ran past its cap."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __str__(self):
        return "bot"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()

WaitingVector = tuple[int, ...] | _Bottom


@functools.total_ordering
class _Infinite:
    """Value of a play along which some request is never answered.

    Compares above every rational.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("rrsynth-infinite")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()

ValueResult = Fraction | _Infinite


@dataclass(frozen=True)
class PenaltyFn:
    """Strictly increasing f: N -> N.

    kinds: `identity`, `affine` (slope * n + offset), `table` (explicit prefix,
    continued with slope 1 after the last entry).
    """

    kind: str = "identity"
    slope: int = 1
    offset: int = 0
    table: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind == "affine":
            if self.slope < 1 or self.offset < 0:
                raise SemanticError("affine penalties need slope >= 1 and offset >= 0")
        elif self.kind == "table":
            if not self.table or self.table[0] < 0:
                raise SemanticError("table penalties need a nonempty list of nonnegative values")
            if any(b <= a for a, b in zip(self.table, self.table[1:])):
                raise SemanticError("table penalties must be strictly increasing")
        elif self.kind != "identity":
            raise SemanticError(f"unknown penalty kind '{self.kind}'")

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def affine(cls, slope, offset=0):
        return cls("affine", slope=slope, offset=offset)

    @classmethod
    def from_table(cls, values):
        return cls("table", table=tuple(values))

    @classmethod
    def parse(cls, descriptor, line=0, column=0):
        parts = descriptor.strip().split(":")
        try:
            if parts == ["identity"]:
                return cls.identity()
            if parts[0] == "affine" and len(parts) == 3:
                return cls.affine(int(parts[1]), int(parts[2]))
            if parts[0] == "table" and len(parts) == 2:
                return cls.from_table(int(x) for x in parts[1].split(","))
        except ValueError:
            pass
        raise ParseError(line, column, f"bad penalty descriptor '{descriptor.strip()}'")

    def describe(self):
        if self.kind == "affine":
            return f"affine:{self.slope}:{self.offset}"
        if self.kind == "table":
            return "table:" + ",".join(str(x) for x in self.table)
        return "identity"

    def __call__(self, n: int) -> int:
        if self.kind == "identity":
            return n
        if self.kind == "affine":
            return self.slope * n + self.offset
        last = len(self.table) - 1
        if n <= last:
            return self.table[n]
        return self.table[last] + (n - last)

    def pseudo_inverse(self, value: int) -> int:
        """max{ n : f(n) <= value }."""
        if value < self(0):
            raise BelowRange(f"{value} is below f(0) = {self(0)}")
        if self.kind == "identity":
            return value
        if self.kind == "affine":
            return (value - self.offset) // self.slope
        last = len(self.table) - 1
        if value >= self.table[last]:
            return last + (value - self.table[last])
        return bisect_right(self.table, value) - 1


@dataclass(frozen=True)
class RRCondition:
    request: frozenset[int]
    response: frozenset[int]


@dataclass(frozen=True)
class RRGame:
    arena: Arena
    conditions: tuple[RRCondition, ...]
    penalties: tuple[PenaltyFn, ...]

    def __post_init__(self):
        if len(self.conditions) != len(self.penalties):
            raise SemanticError("every condition needs exactly one penalty function")
        for j, cond in enumerate(self.conditions, start=1):
            for v in cond.request | cond.response:
                if not 0 <= v < self.arena.size:
                    raise SemanticError(f"condition {j} mentions vertex index {v} outside the arena")

    @property
    def k(self):
        return len(self.conditions)

    @functools.cached_property
    def requests_at(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(v in c.request for c in self.conditions) for v in range(self.arena.size))

    @functools.cached_property
    def responses_at(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(v in c.response for c in self.conditions) for v in range(self.arena.size))


def waiting_step(t: WaitingVector, v: int, game: RRGame, caps: Sequence[int] | None = None) -> WaitingVector:
    """Waiting vector after appending v to a prefix whose vector is t."""
    if t is BOTTOM:
        return BOTTOM
    requests = game.requests_at[v]
    responses = game.responses_at[v]
    if caps is not None:
        for j, tj in enumerate(t):
            if tj >= caps[j] and not responses[j]:
                return BOTTOM
    nxt = []
    for j, tj in enumerate(t):
        if responses[j]:
            nxt.append(0)
        elif tj > 0 or requests[j]:
            nxt.append(tj + 1)
        else:
            nxt.append(0)
    return tuple(nxt)


def initial_vector(game: RRGame, v: int) -> tuple[int, ...]:
    return waiting_step((0,) * game.k, v, game)


def dominates(x: Sequence[int], y: Sequence[int]) -> bool:
    """True when y <= x componentwise."""
    return all(a >= b for a, b in zip(x, y))


def prefix_penalty(t: WaitingVector, penalties: Sequence[PenaltyFn]) -> int:
    if t is BOTTOM:
        raise ValueError("the cap marker has no penalty")
    return sum(f(tj) for f, tj in zip(penalties, t))


def annotate_prefix(game: RRGame, w: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    w = check_prefix(game.arena, w)
    annotated = []
    t = (0,) * game.k
    for v in w:
        t = waiting_step(t, v, game)
        annotated.append((t, prefix_penalty(t, game.penalties)))
    return annotated


def annotation_frame(game: RRGame, w: Sequence[int]) -> pd.DataFrame:
    rows = []
    for n, (v, (t, p)) in enumerate(zip(w, annotate_prefix(game, w))):
        row = {"position": n, "vertex": game.arena.name_of(v)}
        row.update({f"w{j + 1}": tj for j, tj in enumerate(t)})
        row["penalty"] = p
        rows.append(row)
    return pd.DataFrame(rows)


def lasso_value(game: RRGame, lasso: LassoPlay, start_cap: int | None = None) -> ValueResult:
    """Exact value of prefix · cycle^omega.

    Waiting vectors along the cycle are eventually periodic unless some
    waiting time passes `start_cap`, in which case a request stays open
    forever.
    """
    lasso = check_lasso(game.arena, lasso)
    cap = start_cap if start_cap is not None else len(lasso.prefix) + 2 * len(lasso.cycle)
    t = (0,) * game.k
    for v in lasso.prefix:
        t = waiting_step(t, v, game)
    seen = {}
    penalties = []
    n = 0
    while True:
        position = n % len(lasso.cycle)
        t = waiting_step(t, lasso.cycle[position], game)
        if any(tj > cap for tj in t):
            return INFINITE
        if (position, t) in seen:
            period = penalties[seen[(position, t)]:]
            return Fraction(sum(period), len(period))
        seen[(position, t)] = n
        penalties.append(prefix_penalty(t, game.penalties))
        n += 1
