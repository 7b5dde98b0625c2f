"""Attractors, Büchi games and the reduction deciding request-response games."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

from rrsynth.arena import Arena, FiniteStateStrategy, MemoryStructure, ProductArena, product
from rrsynth.errors import BadParams
from rrsynth.rrcore import PenaltyFn, RRCondition, RRGame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuchiGame:
    arena: Arena
    accepting: frozenset[int]


@dataclass(frozen=True)
class SolveResult:
    winning_region_0: frozenset[int]
    winning_region_1: frozenset[int]
    strategy_0: Mapping[int, int]
    strategy_1: Mapping[int, int]


def attractor(
    arena: Arena, target: Iterable[int], player: int, within: Iterable[int] | None = None
) -> tuple[frozenset[int], dict[int, int]]:
    """Vertices from which `player` forces a visit to `target`.

    Computed rank by rank; every attracted vertex of `player` moves to its
    lowest-indexed successor of strictly smaller rank.
    """
    region = set(range(arena.size)) if within is None else set(within)
    rank = {v: 0 for v in target if v in region}
    # opponent vertices leave the attractor only when every successor inside the region is in it
    missing = {
        v: sum(1 for w in arena.successors(v) if w in region)
        for v in region
        if arena.owner_of(v) != player
    }
    frontier = sorted(rank)
    r = 0
    while frontier:
        r += 1
        layer = set()
        for u in frontier:
            for v in arena.predecessors(u):
                if v not in region or v in rank or v in layer:
                    continue
                if arena.owner_of(v) == player:
                    layer.add(v)
                else:
                    missing[v] -= 1
                    if missing[v] == 0:
                        layer.add(v)
        for v in layer:
            rank[v] = r
        frontier = sorted(layer)

    moves = {}
    for v, rv in rank.items():
        if rv > 0 and arena.owner_of(v) == player:
            moves[v] = min(w for w in arena.successors(v) if w in rank and rank[w] < rv)
    return frozenset(rank), moves


def _stay_move(arena, v, region):
    return next(w for w in arena.successors(v) if w in region)


def solve_buchi(game: BuchiGame) -> SolveResult:
    """Winning regions and positional strategies; Player 0 wants infinitely many accepting visits."""
    arena = game.arena
    remaining = set(range(arena.size))
    won_by_1 = set()
    strategy_1 = {}
    strategy_0 = {}
    while True:
        reach, reach_moves = attractor(arena, game.accepting & remaining, 0, remaining)
        avoid = remaining - reach
        if not avoid:
            strategy_0 = dict(reach_moves)
            for v in reach & game.accepting:
                if arena.owner_of(v) == 0:
                    strategy_0[v] = _stay_move(arena, v, remaining)
            break
        trapped, trap_moves = attractor(arena, avoid, 1, remaining)
        strategy_1.update(trap_moves)
        for v in avoid:
            if arena.owner_of(v) == 1:
                strategy_1[v] = _stay_move(arena, v, avoid)
        won_by_1 |= trapped
        remaining -= trapped
        logger.debug("Büchi iteration removed %d vertices, %d remain", len(trapped), len(remaining))
    return SolveResult(frozenset(remaining), frozenset(won_by_1), strategy_0, strategy_1)


def pad_conditions(game: RRGame) -> RRGame:
    """Adds empty conditions until k >= 2; empty conditions never constrain a play."""
    if game.k >= 2:
        return game
    missing = 2 - game.k
    return RRGame(
        game.arena,
        game.conditions + (RRCondition(frozenset(), frozenset()),) * missing,
        game.penalties + (PenaltyFn.identity(),) * missing,
    )


def rr_buchi_memory(game: RRGame) -> MemoryStructure:
    """Memory (R, c, f): open requests R, condition c currently awaited, flag f set when c advanced.

    Conditions are numbered from 1 in the state labels. Needs k >= 2.
    """
    k = game.k
    if k < 2:
        raise BadParams("the Büchi memory needs at least two conditions; use pad_conditions")
    arena = game.arena
    states = [
        (tuple(j + 1 for j in range(k) if mask >> j & 1), c, f)
        for mask, c, f in itertools.product(range(2**k), range(1, k + 1), (0, 1))
    ]

    def index(mask, c, f):
        return (mask * k + (c - 1)) * 2 + f

    requests = [sum(1 << j for j in range(k) if game.requests_at[v][j]) for v in range(arena.size)]
    responses = [sum(1 << j for j in range(k) if game.responses_at[v][j]) for v in range(arena.size)]

    def init_fn(v):
        return index(requests[v] & ~responses[v], 1, 0)

    def update_fn(m, v):
        mask, rest = divmod(m, 2 * k)
        c = rest // 2 + 1
        new_mask = (mask | requests[v]) & ~responses[v]
        bit = 1 << (c - 1)
        if mask & new_mask & bit:
            return index(new_mask, c, 0)
        return index(new_mask, c % k + 1, 1)

    return MemoryStructure.build(arena, states, init_fn, update_fn)


@dataclass(frozen=True)
class RRSolution:
    winning_region_0: frozenset[int]
    winning_region_1: frozenset[int]
    strategy: FiniteStateStrategy
    product: ProductArena
    product_result: SolveResult


def solve_rr(game: RRGame) -> RRSolution:
    """Decide the winner of every vertex and build a finite-state winning strategy for Player 0."""
    padded = pad_conditions(game)
    memory = rr_buchi_memory(padded)
    prod = product(game.arena, memory)
    accepting = frozenset(i for i, (_, m) in enumerate(prod.pairs) if memory.states[m][2] == 1)
    result = solve_buchi(BuchiGame(prod, accepting))

    arena = game.arena
    won_0 = frozenset(v for v in range(arena.size) if prod.start_of(v) in result.winning_region_0)
    next_move = {}
    for v in arena.vertices_of(0):
        for m in range(memory.size):
            chosen = result.strategy_0.get(prod.pair_index[(v, m)])
            next_move[(v, m)] = prod.pairs[chosen][0] if chosen is not None else arena.successors(v)[0]
    strategy = FiniteStateStrategy(memory, 0, next_move)
    logger.debug("Player 0 wins from %d of %d vertices", len(won_0), arena.size)
    return RRSolution(won_0, frozenset(range(arena.size)) - won_0, strategy, prod, result)


def value_bound(game: RRGame) -> int:
    """Upper bound on the value of any vertex won by Player 0."""
    n = game.arena.size * game.k * 2**game.k
    return sum(f(n) for f in game.penalties)
