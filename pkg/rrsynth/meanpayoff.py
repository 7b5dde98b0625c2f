"""Mean-payoff games: exact values and optimal positional strategies.

Player 0 minimizes the limit superior of average weights, Player 1 maximizes
the limit inferior. Values are exact rationals throughout.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import networkx as nx
import numpy as np

from rrsynth.arena import Arena
from rrsynth.config import get_settings
from rrsynth.errors import BudgetExceeded, SemanticError, SolverError

logger = logging.getLogger(__name__)

_INT64_SAFE = 2**62
# below this size the pure-Python table beats numpy call overhead
_SMALL_COMPONENT = 24


@dataclass(frozen=True)
class MeanPayoffGame:
    arena: Arena
    weights: Mapping[tuple[int, int], int]
    max_weight: int

    def __post_init__(self):
        for edge in self.arena.edges:
            w = self.weights.get(edge)
            if w is None:
                raise SemanticError(f"edge {edge} has no weight")
            if abs(w) > self.max_weight:
                raise SemanticError(f"weight {w} on edge {edge} exceeds the declared bound {self.max_weight}")


@dataclass(frozen=True)
class MPGSolution:
    values: tuple[Fraction, ...]
    strategy_0: Mapping[int, int]
    strategy_1: Mapping[int, int]


# Karp's maximum mean cycle


def _karp_numpy(n, src, dst, wt, max_abs):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    wt = np.asarray(wt, dtype=np.int64)
    floor = -(n + 1) * (max_abs + 1)

    def advance(prev):
        live = prev[src] > floor
        nxt = np.full(n, floor, dtype=np.int64)
        np.maximum.at(nxt, dst[live], prev[src[live]] + wt[live])
        return nxt

    start = np.full(n, floor, dtype=np.int64)
    start[0] = 0
    d_n = start
    for _ in range(n):
        d_n = advance(d_n)

    # second pass recomputes D_k instead of storing the whole table
    reach_n = d_n > floor
    best_num = np.zeros(n, dtype=np.int64)
    best_den = np.ones(n, dtype=np.int64)
    have = np.zeros(n, dtype=bool)
    d_k = start
    for k in range(n):
        valid = reach_n & (d_k > floor)
        num = d_n - d_k
        den = n - k
        better = valid & (~have | (num * best_den < best_num * den))
        best_num = np.where(better, num, best_num)
        best_den = np.where(better, den, best_den)
        have |= valid
        d_k = advance(d_k)
    candidates = np.flatnonzero(have)
    if candidates.size == 0:
        return None
    return max(Fraction(int(best_num[v]), int(best_den[v])) for v in candidates)


def _karp_python(n, src, dst, wt):
    edges = list(zip(src, dst, wt))

    def advance(prev):
        nxt = [None] * n
        for u, v, w in edges:
            if prev[u] is not None and (nxt[v] is None or prev[u] + w > nxt[v]):
                nxt[v] = prev[u] + w
        return nxt

    start = [None] * n
    start[0] = 0
    d_n = start
    for _ in range(n):
        d_n = advance(d_n)
    best = [None] * n
    d_k = start
    for k in range(n):
        for v in range(n):
            if d_n[v] is not None and d_k[v] is not None:
                ratio = Fraction(d_n[v] - d_k[v], n - k)
                if best[v] is None or ratio < best[v]:
                    best[v] = ratio
        d_k = advance(d_k)
    found = [b for b in best if b is not None]
    return max(found) if found else None


def _component_mean(graph, members):
    index = {node: i for i, node in enumerate(members)}
    src, dst, wt = [], [], []
    for u in members:
        for v, data in graph[u].items():
            if v in index:
                src.append(index[u])
                dst.append(index[v])
                wt.append(data["weight"])
    return _edge_list_mean(len(members), src, dst, wt)


def _edge_list_mean(n, src, dst, wt):
    if not src:
        return None
    if n <= _SMALL_COMPONENT:
        return _karp_python(n, src, dst, wt)
    max_abs = max(abs(w) for w in wt)
    if 2 * (n + 1) ** 2 * (max_abs + 1) < _INT64_SAFE:
        return _karp_numpy(n, src, dst, wt, max_abs)
    return _karp_python(n, src, dst, wt)


def max_mean_by_vertex(graph: nx.DiGraph) -> dict[Hashable, Fraction | None]:
    """Largest mean weight of a cycle reachable from each node (None: no cycle reachable).

    Edges carry their weight in the `weight` attribute.
    """
    condensed = nx.condensation(graph)
    mapping = condensed.graph["mapping"]
    best = {}
    for c in reversed(list(nx.topological_sort(condensed))):
        members = list(condensed.nodes[c]["members"])
        candidates = [_component_mean(graph, members)]
        candidates.extend(best[d] for d in condensed.successors(c))
        candidates = [x for x in candidates if x is not None]
        best[c] = max(candidates) if candidates else None
    return {node: best[mapping[node]] for node in graph}


def min_mean_by_vertex(graph: nx.DiGraph) -> dict[Hashable, Fraction | None]:
    negated = nx.DiGraph()
    negated.add_nodes_from(graph)
    negated.add_weighted_edges_from((u, v, -w) for u, v, w in graph.edges(data="weight"))
    return {node: None if m is None else -m for node, m in max_mean_by_vertex(negated).items()}


def karp_max_mean(graph: nx.DiGraph, source: Hashable) -> Fraction | None:
    """Maximum mean of a cycle reachable from `source`, or None when there is none."""
    reachable = nx.descendants(graph, source) | {source}
    return max_mean_by_vertex(graph.subgraph(reachable))[source]


def max_cycle_mean(successors: Mapping[int, Sequence[int]], weights: Mapping[tuple[int, int], int]) -> Fraction | None:
    """Maximum mean of any cycle in a graph given as adjacency lists.

    Equals `karp_max_mean` from a source that reaches every listed node, without
    building the condensation.
    """
    graph = nx.DiGraph(successors)
    best = None
    for members in nx.strongly_connected_components(graph):
        if len(members) == 1:
            (u,) = members
            if u not in successors.get(u, ()):
                continue
        index = {node: i for i, node in enumerate(members)}
        src, dst, wt = [], [], []
        for u in members:
            for v in successors.get(u, ()):
                if v in index:
                    src.append(index[u])
                    dst.append(index[v])
                    wt.append(weights[(u, v)])
        mean = _edge_list_mean(len(members), src, dst, wt)
        if best is None or mean > best:
            best = mean
    return best


def restricted_graph(game: MeanPayoffGame, moves: Mapping[int, int], player: int) -> nx.DiGraph:
    """Weighted graph of the plays consistent with `player` following `moves`."""
    arena = game.arena
    graph = nx.DiGraph()
    graph.add_nodes_from(range(arena.size))
    for u in range(arena.size):
        targets = (moves[u],) if arena.owner_of(u) == player else arena.successors(u)
        for v in targets:
            graph.add_edge(u, v, weight=game.weights[(u, v)])
    return graph


# Threshold search


def estimate_values(game: MeanPayoffGame, horizon: int | None = None) -> list[Fraction] | None:
    """Finite-horizon value iteration: (v_2K - v_K) / K for every vertex.

    Only an estimate; returns None when int64 arithmetic could overflow.
    """
    K = horizon if horizon is not None else get_settings().horizon
    if 2 * K * (game.max_weight + 1) >= _INT64_SAFE:
        return None
    arena = game.arena
    degrees = [len(arena.successors(v)) for v in range(arena.size)]
    dst = np.array([v for _, v in arena.edges], dtype=np.int64)
    wt = np.array([game.weights[e] for e in arena.edges], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(degrees)[:-1])).astype(np.int64)
    minimizer = np.array(arena.owners) == 0
    value = np.zeros(arena.size, dtype=np.int64)
    middle = value
    for step in range(1, 2 * K + 1):
        totals = wt + value[dst]
        value = np.where(minimizer, np.minimum.reduceat(totals, offsets), np.maximum.reduceat(totals, offsets))
        if step == K:
            middle = value
    return [Fraction(int(x), K) for x in value - middle]


def _in_interval(x, lo, lo_closed, hi, hi_closed):
    return (lo < x or (lo_closed and x == lo)) and (x < hi or (hi_closed and x == hi))


def _pick_threshold(region, interval, estimates):
    size = len(region)
    if estimates is not None:
        guesses = sorted({estimates[u].limit_denominator(size) for u in region})
        guesses = [g for g in guesses if _in_interval(g, *interval)]
        if guesses:
            return guesses[len(guesses) // 2]
    lo, lo_closed, hi, hi_closed = interval
    for q in range(1, size + 1):
        p_min = math.ceil(lo * q)
        if not _in_interval(Fraction(p_min, q), *interval):
            p_min += 1
        p_max = math.floor(hi * q)
        if not _in_interval(Fraction(p_max, q), *interval):
            p_max -= 1
        if p_min <= p_max:
            return Fraction(min(max(round((lo + hi) * q / 2), p_min), p_max), q)
    raise SolverError(f"no candidate value with denominator <= {size} in {interval}")


def _minimal_credits(game, region, energy_player, t):
    """Least initial credit the energy player needs from each region vertex.

    Energy weights are a - b*w for Player 0 and b*w - a for Player 1, where
    t = a/b; `top` marks vertices where no finite credit suffices.
    """
    arena = game.arena
    a, b = t.numerator, t.denominator
    sign = -1 if energy_player == 0 else 1
    out = {}
    for u in region:
        out[u] = [(v, sign * (b * game.weights[(u, v)] - a)) for v in arena.successors(u) if v in region]
    top = sum(max(0, -min(e for _, e in edges)) for edges in out.values()) + 1
    credit = dict.fromkeys(region, 0)

    def needed(u):
        costs = []
        for v, e in out[u]:
            c = credit[v] - e if credit[v] < top else top
            costs.append(top if c >= top else max(0, c))
        return min(costs) if arena.owner_of(u) == energy_player else max(costs)

    queue = deque(sorted(region))
    queued = set(region)
    while queue:
        u = queue.popleft()
        queued.discard(u)
        new = needed(u)
        if new > credit[u]:
            credit[u] = new
            for p in arena.predecessors(u):
                if p in region and p not in queued:
                    queue.append(p)
                    queued.add(p)
    return credit, top, out


def _credit_move(credit, top, out, u):
    for v, e in out[u]:
        if credit[v] < top and max(0, credit[v] - e) <= credit[u]:
            return v
    raise SolverError(f"vertex {u} has no move respecting its credit")


def _mismatches(game, values, moves, player):
    graph = restricted_graph(game, moves, player)
    means = max_mean_by_vertex(graph) if player == 0 else min_mean_by_vertex(graph)
    return [u for u in range(game.arena.size) if means[u] != values[u]]


def _repair(game, values, moves, player):
    """Re-fixes moves among equally valued successors until every vertex is certified."""
    arena = game.arena
    bad = _mismatches(game, values, moves, player)
    while bad:
        improved = False
        for u in bad:
            if arena.owner_of(u) != player:
                continue
            for v in arena.successors(u):
                if v == moves[u] or values[v] != values[u]:
                    continue
                trial = dict(moves)
                trial[u] = v
                trial_bad = _mismatches(game, values, trial, player)
                if len(trial_bad) < len(bad):
                    moves, bad, improved = trial, trial_bad, True
                    break
            if improved:
                break
        if not improved:
            raise SolverError(f"could not certify Player {player}'s strategy at vertices {bad}")
    return moves


def solve_mpg(game: MeanPayoffGame, horizon: int | None = None) -> MPGSolution:
    """Values and optimal positional strategies for both players.

    Candidate values t split a region into {value < t}, {value = t} and
    {value > t} with two energy-game tests; each side is a subgame on which
    the search continues with a narrower interval.
    """
    arena = game.arena
    estimates = estimate_values(game, horizon)
    values = [None] * arena.size
    strategy_0, strategy_1 = {}, {}
    bound = Fraction(game.max_weight)
    tasks = [(frozenset(range(arena.size)), (-bound, True, bound, True))]
    while tasks:
        region, interval = tasks.pop()
        t = _pick_threshold(region, interval, estimates)
        credit_0, top_0, out_0 = _minimal_credits(game, region, 0, t)
        at_most = frozenset(u for u in region if credit_0[u] < top_0)
        above = region - at_most
        equal = frozenset()
        if at_most:
            credit_1, top_1, out_1 = _minimal_credits(game, at_most, 1, t)
            equal = frozenset(u for u in at_most if credit_1[u] < top_1)
        for u in equal:
            values[u] = t
            if arena.owner_of(u) == 0:
                strategy_0[u] = _credit_move(credit_0, top_0, out_0, u)
            else:
                strategy_1[u] = _credit_move(credit_1, top_1, out_1, u)
        logger.debug("threshold %s: %d below, %d equal, %d above", t, len(at_most - equal), len(equal), len(above))
        lo, lo_closed, hi, hi_closed = interval
        if at_most - equal:
            tasks.append((at_most - equal, (lo, lo_closed, t, False)))
        if above:
            tasks.append((above, (t, False, hi, hi_closed)))

    values = tuple(values)
    if _mismatches(game, values, strategy_0, 0):
        logger.warning("repairing Player 0's strategy")
        strategy_0 = _repair(game, values, strategy_0, 0)
    if _mismatches(game, values, strategy_1, 1):
        logger.warning("repairing Player 1's strategy")
        strategy_1 = _repair(game, values, strategy_1, 1)
    return MPGSolution(values, strategy_0, strategy_1)


def mpg_oracle(game: MeanPayoffGame, budget: int | None = None) -> tuple[Fraction, ...]:
    """Values by brute force over Player 0's positional strategies."""
    limit = budget if budget is not None else get_settings().strategy_budget
    arena = game.arena
    deciders = arena.vertices_of(0)
    count = math.prod(len(arena.successors(v)) for v in deciders)
    if count > limit:
        raise BudgetExceeded(f"{count} positional strategies exceed the budget of {limit}")
    best: list[Fraction | None] = [None] * arena.size
    for choice in itertools.product(*(arena.successors(v) for v in deciders)):
        means = max_mean_by_vertex(restricted_graph(game, dict(zip(deciders, choice)), 0))
        for u in range(arena.size):
            if best[u] is None or means[u] < best[u]:
                best[u] = means[u]
    return tuple(best)


def weights_from_sources(arena: Arena, source_weight: Sequence[int]) -> dict[tuple[int, int], int]:
    """Edge weights that only depend on the source vertex."""
    return {(u, v): source_weight[u] for u, v in arena.edges}
