"""Built-in example games and the reference strategies that go with them."""

from __future__ import annotations

from rrsynth.arena import FiniteStateStrategy, MemoryStructure, check_strategy, positional_strategy, validate_arena
from rrsynth.errors import BadParams
from rrsynth.optimal import Playout
from rrsynth.rrcore import PenaltyFn, RRCondition, RRGame

BUILTIN_GAMES = ("fig1", "fig2", "blades")


def _game(vertices, edges, conditions):
    arena = validate_arena(vertices, edges)
    conds = tuple(
        RRCondition(frozenset(arena.index_of(n) for n in q), frozenset(arena.index_of(n) for n in p))
        for q, p in conditions
    )
    return RRGame(arena, conds, (PenaltyFn.identity(),) * len(conds))


def two_request_game():
    """Player 1 requests one or both conditions, Player 0 answers one per round."""
    vertices = [("q", 1), ("r1", 1), ("r2", 1), ("r12", 1), ("p", 0), ("p1", 0), ("p2", 0), ("e", 0)]
    edges = [
        ("q", "r1"), ("q", "r2"), ("q", "r12"),
        ("r1", "p"), ("r2", "p"), ("r12", "p"),
        ("p", "p1"), ("p", "p2"), ("p", "e"),
        ("p1", "e"), ("p2", "e"), ("e", "q"),
    ]
    conditions = [(["r1", "r12"], ["p1"]), (["r2", "r12"], ["p2"])]
    return _game(vertices, edges, conditions)


def two_loop_game():
    """Solitaire game: a short loop answers condition 1, a long one answers condition 2."""
    vertices = [("v", 0), ("r", 0), ("lu", 0), ("l", 0), ("ld", 0)]
    edges = [("v", "r"), ("r", "v"), ("v", "lu"), ("lu", "l"), ("l", "ld"), ("ld", "v")]
    conditions = [(["v"], ["r"]), (["v"], ["ld"])]
    return _game(vertices, edges, conditions)


def blades_game(k):
    """Hub h with k blades; blade j answers condition j but re-requests 1..j-1."""
    if k < 2:
        raise BadParams(f"blades needs k >= 2, got {k}")
    vertices = [("i", 0), ("h", 0)]
    edges = [("i", "h")]
    for j in range(1, k + 1):
        vertices += [(f"c{j}", 1), (f"s{j}", 1), (f"v{j}", 1)]
        edges += [("h", f"c{j}"), (f"c{j}", f"s{j}"), (f"c{j}", f"v{j}"), (f"v{j}", "h"), (f"s{j}", f"s{j}")]
    conditions = []
    for j in range(1, k + 1):
        request = ["i"] + [f"v{b}" for b in range(j + 1, k + 1)]
        response = [f"c{j}"] + [f"s{b}" for b in range(1, j)]
        conditions.append((request, response))
    return _game(vertices, edges, conditions)


def gen_builtin(name: str, k: int | None = None) -> RRGame:
    if name == "blades":
        return blades_game(4 if k is None else k)
    if k is not None:
        raise BadParams(f"'{name}' takes no k parameter")
    if name == "fig1":
        return two_request_game()
    if name == "fig2":
        return two_loop_game()
    raise BadParams(f"unknown built-in game '{name}'; choose from {', '.join(BUILTIN_GAMES)}")


def alternating_strategy(game: RRGame) -> FiniteStateStrategy:
    """At p, answer the condition not answered last time, starting with condition 1."""
    arena = game.arena
    p, p1, p2 = (arena.index_of(n) for n in ("p", "p1", "p2"))

    def after(m, v):
        if v == p1:
            return 1
        if v == p2:
            return 0
        return m

    memory = MemoryStructure.build(arena, ("answer-1", "answer-2"), lambda v: after(0, v), after)
    next_move = {}
    for v in arena.vertices_of(0):
        for m in range(2):
            next_move[(v, m)] = (p1, p2)[m] if v == p else arena.successors(v)[0]
    return check_strategy(arena, FiniteStateStrategy(memory, 0, next_move))


def right_loop_strategy(game: RRGame) -> FiniteStateStrategy:
    """Always take the short loop; condition 2 then stays open forever."""
    arena = game.arena
    return positional_strategy(arena, 0, {arena.index_of("v"): arena.index_of("r")})


def open_request_memory(game: RRGame) -> MemoryStructure:
    """States are the sets of open requests, as bitmasks over the conditions."""
    arena, k = game.arena, game.k
    requests = [sum(1 << j for j in range(k) if game.requests_at[v][j]) for v in range(arena.size)]
    responses = [sum(1 << j for j in range(k) if game.responses_at[v][j]) for v in range(arena.size)]
    states = [tuple(j + 1 for j in range(k) if mask >> j & 1) for mask in range(2**k)]
    return MemoryStructure.build(
        arena,
        states,
        lambda v: requests[v] & ~responses[v],
        lambda m, v: (m | requests[v]) & ~responses[v],
    )


def smallest_open_blade_strategy(game: RRGame) -> FiniteStateStrategy:
    """From the hub, enter the blade of the smallest open condition (blade 1 if none is open)."""
    arena = game.arena
    memory = open_request_memory(game)
    hub = arena.index_of("h")
    blades = [arena.index_of(f"c{j}") for j in range(1, game.k + 1)]
    next_move = {}
    for v in arena.vertices_of(0):
        for mask in range(memory.size):
            if v == hub:
                smallest = (mask & -mask).bit_length() - 1 if mask else 0
                next_move[(v, mask)] = blades[smallest]
            else:
                next_move[(v, mask)] = arena.successors(v)[0]
    return check_strategy(arena, FiniteStateStrategy(memory, 0, next_move))


def always_revisit_adversary(game: RRGame) -> FiniteStateStrategy:
    """Player 1 always returns to the hub, re-requesting the lower conditions."""
    arena = game.arena
    moves = {arena.index_of(f"c{j}"): arena.index_of(f"v{j}") for j in range(1, game.k + 1)}
    return positional_strategy(arena, 1, moves)


def reference_strategies(name: str, game: RRGame) -> dict[str, FiniteStateStrategy]:
    """Named strategies shipped with each built-in game."""
    if name == "fig1":
        return {"strategy": alternating_strategy(game)}
    if name == "fig2":
        return {"strategy": right_loop_strategy(game)}
    if name == "blades":
        return {"strategy": smallest_open_blade_strategy(game), "adversary": always_revisit_adversary(game)}
    raise BadParams(f"unknown built-in game '{name}'")


def hub_visits(play: Playout) -> list[int]:
    """Positions of hub visits made while at least one request is open."""
    hub = play.game.arena.index_of("h")
    return [s.position for s in play.steps if s.vertex == hub and any(s.waiting)]
