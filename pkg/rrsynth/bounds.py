"""Dickson pairs, loop removal and the waiting-time thresholds that make memory finite."""

from __future__ import annotations

import logging
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from rrsynth.buchi import value_bound
from rrsynth.errors import BadParams, InvalidPair
from rrsynth.rrcore import RRGame, annotate_prefix, dominates

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def dickson_bound(s: int, k: int) -> int:
    """Length after which every play infix over s vertices and k conditions has a dickson pair."""
    if s < 1 or k < 0:
        raise BadParams(f"dickson bound needs s >= 1 and k >= 0, got s={s}, k={k}")
    if k == 0:
        return s + 1
    previous = [dickson_bound(s, j) for j in range(k)]
    return previous[-1] + s * factorial(k) * prod(previous) + 1


def dickson_bound_closed(s: int, k: int) -> int:
    """Closed-form upper estimate of dickson_bound(s, k) for k >= 1."""
    if s < 1 or k < 1:
        raise BadParams(f"closed form needs s >= 1 and k >= 1, got s={s}, k={k}")
    tail = prod(factorial(j) ** (2 ** (k - j - 1)) for j in range(1, k))
    return 2 ** (2 ** (k - 1)) * (s + 1) ** (2**k) * factorial(k) * tail


def find_dickson_pair(
    annotated: Sequence[tuple[int, Sequence[int]]], window: tuple[int, int] | None = None
) -> tuple[int, int] | None:
    """Lexicographically least (n1, n2) with equal vertices and dominated waiting vectors.

    `annotated` holds (vertex, waiting vector) per position; `window` is a
    half-open range of positions to search.
    """
    start, stop = window if window is not None else (0, len(annotated))
    for n1 in range(start, stop):
        v1, t1 = annotated[n1]
        for n2 in range(n1 + 1, stop):
            v2, t2 = annotated[n2]
            if v1 == v2 and dominates(t2, t1):
                return n1, n2
    return None


def _annotated_vertices(game, w):
    return [(v, t) for v, (t, _) in zip(w, annotate_prefix(game, w))]


def remove_loop(w: Sequence[int], pair: tuple[int, int], game: RRGame) -> tuple[int, ...]:
    """Cuts w_{n1+1} .. w_{n2} out of w."""
    w = tuple(w)
    n1, n2 = pair
    if not 0 <= n1 < n2 < len(w):
        raise InvalidPair(f"positions {pair} are not increasing positions of the prefix")
    annotated = _annotated_vertices(game, w)
    if w[n1] != w[n2] or not dominates(annotated[n2][1], annotated[n1][1]):
        raise InvalidPair(f"positions {pair} do not form a dickson pair")
    return w[: n1 + 1] + w[n2 + 1:]


def remove_all_loops(w: Sequence[int], game: RRGame) -> tuple[int, ...]:
    """Removes least dickson pairs until none remain."""
    w = tuple(w)
    while True:
        pair = find_dickson_pair(_annotated_vertices(game, w))
        if pair is None:
            return w
        w = remove_loop(w, pair, game)


def synthesis_thresholds(game: RRGame) -> tuple[int, ...]:
    """Per-condition waiting-time caps sufficient for optimal strategies."""
    if game.k == 0:
        return ()
    bound = value_bound(game)
    extra = dickson_bound(game.arena.size, game.k - 1)
    return tuple(f.pseudo_inverse(bound) + extra for f in game.penalties)


def nondickson_violations(
    annotated: Sequence[tuple[int, Sequence[int]]], start: int, s: int, k: int
) -> list[tuple[int, int]]:
    """Checks a dickson-free infix starting at `start` against the entry bounds.

    For every j < k and every offset n >= b(s, k-j-1) of the infix, at most j
    entries of the waiting vector may exceed b(s, k-j-1). Returns the violating
    (j, offset) pairs. Only k <= 2 is supported.
    """
    if k > 2:
        raise BadParams("the entry-bound checker supports k <= 2 only")
    violations = []
    length = len(annotated) - start
    for j in range(k):
        bound = dickson_bound(s, k - j - 1)
        for n in range(bound, length):
            _, t = annotated[start + n]
            if sum(1 for tj in t if tj > bound) > j:
                violations.append((j, n))
    return violations
