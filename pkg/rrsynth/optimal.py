"""Optimal strategies for request-response games through capped waiting-time memory."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import networkx as nx
import pandas as pd

from rrsynth.arena import FiniteStateStrategy, MemoryStructure, check_strategy, product
from rrsynth.bounds import synthesis_thresholds
from rrsynth.buchi import attractor
from rrsynth.config import get_settings
from rrsynth.errors import BadParams, BudgetExceeded, IllegalScriptedMove, ScriptExhausted
from rrsynth.meanpayoff import MeanPayoffGame, karp_max_mean, max_cycle_mean, solve_mpg, weights_from_sources
from rrsynth.rrcore import (
    BOTTOM,
    INFINITE,
    RRGame,
    ValueResult,
    initial_vector,
    prefix_penalty,
    waiting_step,
)

logger = logging.getLogger(__name__)

_PROGRESS_EVERY = 10_000


@dataclass(frozen=True)
class Thresholds:
    """Per-condition waiting-time caps and where they came from.

    provenance is `theoretical` (the caps equal the synthesis thresholds),
    `user`, or `size-limit`.
    """

    caps: tuple[int, ...]
    provenance: str = "user"

    @property
    def theoretical(self):
        return self.provenance == "theoretical"


def _largest_uniform_cap(size, k, limit):
    cap = 1
    if k == 0:
        return cap
    while size * ((cap + 2) ** k + 1) <= limit:
        cap += 1
    return cap


def default_thresholds(
    game: RRGame,
    user_caps: Sequence[int] | None = None,
    theoretical: bool = False,
    solve_limit: int | None = None,
) -> Thresholds:
    """min(synthesis threshold, user cap, size-limit cap) per condition."""
    t_max = synthesis_thresholds(game)
    if theoretical:
        return Thresholds(t_max, "theoretical")
    if user_caps is not None:
        if len(user_caps) != game.k:
            raise BadParams(f"expected {game.k} caps, got {len(user_caps)}")
        caps = tuple(min(c, t) for c, t in zip(user_caps, t_max))
        return Thresholds(caps, "theoretical" if caps == t_max else "user")
    limit = solve_limit if solve_limit is not None else get_settings().solve_limit
    uniform = _largest_uniform_cap(game.arena.size, game.k, limit)
    caps = tuple(min(uniform, t) for t in t_max)
    return Thresholds(caps, "theoretical" if caps == t_max else "size-limit")


def _as_thresholds(game, caps):
    if caps is None:
        return default_thresholds(game)
    if isinstance(caps, Thresholds):
        return caps
    caps = tuple(caps)
    if len(caps) != game.k:
        raise BadParams(f"expected {game.k} caps, got {len(caps)}")
    return Thresholds(caps, "theoretical" if caps == synthesis_thresholds(game) else "user")


def waiting_memory(game: RRGame, caps: Sequence[int], size_limit: int | None = None) -> MemoryStructure:
    """Memory over waiting vectors bounded by `caps`, plus an absorbing BOTTOM state."""
    caps = tuple(caps)
    if len(caps) != game.k or any(c < 1 for c in caps):
        raise BadParams(f"need {game.k} caps, each at least 1, got {caps}")
    states = list(itertools.product(*(range(c + 1) for c in caps))) + [BOTTOM]
    index = {s: i for i, s in enumerate(states)}
    return MemoryStructure.build(
        game.arena,
        states,
        lambda v: index[initial_vector(game, v)],
        lambda m, v: index[waiting_step(states[m], v, game, caps)],
        size_limit,
    )


def rr_to_mpg(game: RRGame, caps: Sequence[int], reachable_only: bool = False) -> MeanPayoffGame:
    """Mean-payoff game on the product with the capped waiting memory.

    An edge weighs the penalty of its source's waiting vector; edges leaving
    BOTTOM weigh one more than any other edge.
    """
    caps = tuple(caps)
    memory = waiting_memory(game, caps)
    roots = range(game.arena.size) if reachable_only else None
    prod = product(game.arena, memory, roots=roots)
    sink_weight = 1 + sum(f(c) for f, c in zip(game.penalties, caps))
    source_weight = [
        sink_weight if memory.states[m] is BOTTOM else prefix_penalty(memory.states[m], game.penalties)
        for _, m in prod.pairs
    ]
    return MeanPayoffGame(prod, weights_from_sources(prod, source_weight), sink_weight)


@dataclass(frozen=True)
class SynthesisOutcome:
    values: tuple[ValueResult, ...]
    strategy: FiniteStateStrategy
    thresholds: Thresholds
    mpg_vertices: int
    mpg_max_weight: int

    @property
    def label(self):
        if self.thresholds.theoretical:
            return "optimal"
        return "optimal among cap-bounded strategies"


def synthesize_optimal(game: RRGame, caps: Thresholds | Sequence[int] | None = None) -> SynthesisOutcome:
    thresholds = _as_thresholds(game, caps)
    if not thresholds.theoretical:
        logger.warning("caps %s are below the synthesis thresholds; values are optimal among cap-bounded strategies",
                       thresholds.caps)
    mpg = rr_to_mpg(game, thresholds.caps, reachable_only=True)
    prod = mpg.arena
    logger.info("solving mean-payoff game with %d vertices, max weight %d", prod.size, mpg.max_weight)
    solution = solve_mpg(mpg)

    arena = game.arena
    values = []
    for v in range(arena.size):
        nu = solution.values[prod.start_of(v)]
        values.append(INFINITE if nu >= mpg.max_weight else nu)
    memory = prod.memory
    next_move = {}
    for v in arena.vertices_of(0):
        for m in range(memory.size):
            i = prod.pair_index.get((v, m))
            chosen = solution.strategy_0.get(i) if i is not None else None
            next_move[(v, m)] = prod.pairs[chosen][0] if chosen is not None else arena.successors(v)[0]
    strategy = FiniteStateStrategy(memory, 0, next_move)
    return SynthesisOutcome(tuple(values), strategy, thresholds, prod.size, mpg.max_weight)


def _strategy_state_graph(game, sigma, starts):
    """States (vertex, memory, waiting vector) reachable when Player 0 follows sigma.

    Waiting times are guarded at |V| * |M| + 1; passing the guard means some
    request can be kept open forever, and None is returned.
    """
    arena = game.arena
    sigma = check_strategy(arena, sigma, player=0)
    mem = sigma.memory
    caps = (arena.size * mem.size + 1,) * game.k
    graph = nx.DiGraph()
    roots = []
    queue = deque()
    for v in starts:
        node = (v, mem.init[v], initial_vector(game, v))
        roots.append(node)
        if node not in graph:
            graph.add_node(node)
            queue.append(node)
    while queue:
        node = queue.popleft()
        v, m, t = node
        targets = (sigma.move(v, m),) if arena.owner_of(v) == 0 else arena.successors(v)
        weight = prefix_penalty(t, game.penalties)
        for w in targets:
            t_next = waiting_step(t, w, game, caps)
            if t_next is BOTTOM:
                return None, roots
            nxt = (w, mem.update[m][w], t_next)
            if nxt not in graph:
                graph.add_node(nxt)
                queue.append(nxt)
            graph.add_edge(node, nxt, weight=weight)
    return graph, roots


def evaluate_strategy(game: RRGame, sigma: FiniteStateStrategy, from_vertex: int) -> ValueResult:
    """Worst-case value of sigma against every behaviour of Player 1."""
    graph, roots = _strategy_state_graph(game, sigma, [from_vertex])
    if graph is None:
        return INFINITE
    return karp_max_mean(graph, roots[0])


def waiting_time_profile(game: RRGame, sigma: FiniteStateStrategy, starts: Sequence[int]) -> tuple[int, ...] | None:
    """Largest waiting time per condition over plays consistent with sigma, None if unbounded."""
    graph, _ = _strategy_state_graph(game, sigma, starts)
    if graph is None:
        return None
    longest = [0] * game.k
    for _, _, t in graph:
        longest = [max(a, b) for a, b in zip(longest, t)]
    return tuple(longest)


def _positional_choices(arena, allowed, start):
    """Player 0 positional choices on the part reachable from start, branching lazily."""

    def extend(assign, seen, stack):
        while stack:
            u = stack.pop()
            if arena.owner_of(u) == 0:
                if u not in assign:
                    options = allowed[u]
                    if len(options) > 1:
                        for o in options:
                            branch = dict(assign)
                            branch[u] = o
                            seen_branch = set(seen)
                            stack_branch = list(stack)
                            if o not in seen_branch:
                                seen_branch.add(o)
                                stack_branch.append(o)
                            yield from extend(branch, seen_branch, stack_branch)
                        return
                    assign[u] = options[0]
                targets = (assign[u],)
            else:
                targets = arena.successors(u)
            for w in targets:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        yield assign, seen

    yield from extend({}, {start}, [start])


def rr_oracle_optimal(game: RRGame, caps: Sequence[int], budget: int | None = None) -> tuple[ValueResult, ...]:
    """Values among cap-bounded strategies by enumerating Player 0's product strategies."""
    limit = budget if budget is not None else get_settings().strategy_budget
    mpg = rr_to_mpg(game, caps, reachable_only=True)
    prod = mpg.arena
    sinks = [i for i, (_, m) in enumerate(prod.pairs) if prod.memory.states[m] is BOTTOM]
    forced, _ = attractor(prod, sinks, 1)
    allowed = {
        u: [w for w in prod.successors(u) if w not in forced]
        for u in range(prod.size)
        if prod.owner_of(u) == 0 and u not in forced
    }
    values = []
    enumerated = 0
    for v in range(game.arena.size):
        start = prod.start_of(v)
        if start in forced:
            values.append(INFINITE)
            continue
        best = None
        for assign, seen in _positional_choices(prod, allowed, start):
            enumerated += 1
            if enumerated > limit:
                raise BudgetExceeded(f"more than {limit} product strategies enumerated")
            if enumerated % _PROGRESS_EVERY == 0:
                logger.info("oracle: %d strategies enumerated, at vertex %s", enumerated, game.arena.name_of(v))
            succ = {u: (assign[u],) if prod.owner_of(u) == 0 else prod.successors(u) for u in seen}
            mean = max_cycle_mean(succ, mpg.weights)
            if best is None or mean < best:
                best = mean
        values.append(best)
    logger.debug("oracle enumerated %d strategies", enumerated)
    return tuple(values)


@dataclass(frozen=True)
class PlayState:
    """What an adversary callback sees before choosing Player 1's move."""

    game: RRGame
    prefix: tuple[int, ...]
    waiting: tuple[int, ...]

    @property
    def vertex(self):
        return self.prefix[-1]


@dataclass(frozen=True)
class PlayStep:
    position: int
    vertex: int
    memory: int
    waiting: tuple[int, ...]
    penalty: int


@dataclass(frozen=True)
class Playout:
    game: RRGame
    steps: tuple[PlayStep, ...]

    @property
    def vertices(self):
        return tuple(s.vertex for s in self.steps)

    @property
    def penalties(self):
        return tuple(s.penalty for s in self.steps)

    def to_frame(self):
        names = self.game.arena.names
        rows = []
        for s in self.steps:
            row = {"position": s.position, "vertex": names[s.vertex]}
            row.update({f"w{j + 1}": tj for j, tj in enumerate(s.waiting)})
            row["penalty"] = s.penalty
            rows.append(row)
        return pd.DataFrame(rows)

    def mean_penalty(self):
        return Fraction(sum(self.penalties), len(self.steps))


Adversary = FiniteStateStrategy | Sequence[int | str] | Callable[[PlayState], int | str]


def playout(
    game: RRGame, sigma0: FiniteStateStrategy, adversary: Adversary, start: int, steps: int
) -> Playout:
    """Plays `steps` positions from `start`.

    Scripts and callbacks are consulted only at Player 1 vertices with more
    than one successor.
    """
    arena = game.arena
    if steps < 1:
        raise BadParams("a playout needs at least one step")
    check_strategy(arena, sigma0, player=0)
    fsm = adversary if isinstance(adversary, FiniteStateStrategy) else None
    if fsm is not None:
        check_strategy(arena, fsm, player=1)
        m1 = fsm.memory.init[start]
    script = None if fsm is not None or callable(adversary) else iter(adversary)

    def resolve(target, v):
        if isinstance(target, str):
            target = arena.index_of(target)
        if not arena.has_edge(v, target):
            raise IllegalScriptedMove(f"{arena.name_of(v)} -> {arena.name_of(target)} is not a move")
        return target

    v = start
    m0 = sigma0.memory.init[v]
    t = initial_vector(game, v)
    prefix = [v]
    record = [PlayStep(0, v, m0, t, prefix_penalty(t, game.penalties))]
    for n in range(1, steps):
        if arena.owner_of(v) == 0:
            w = sigma0.move(v, m0)
        elif fsm is not None:
            w = fsm.move(v, m1)
        elif len(arena.successors(v)) == 1:
            w = arena.successors(v)[0]
        elif script is not None:
            try:
                w = resolve(next(script), v)
            except StopIteration:
                raise ScriptExhausted(f"script ran out at position {n}") from None
        else:
            w = resolve(adversary(PlayState(game, tuple(prefix), t)), v)
        m0 = sigma0.memory.update[m0][w]
        if fsm is not None:
            m1 = fsm.memory.update[m1][w]
        t = waiting_step(t, w, game)
        v = w
        prefix.append(v)
        record.append(PlayStep(n, v, m0, t, prefix_penalty(t, game.penalties)))
    return Playout(game, tuple(record))
