"""Game arenas, play prefixes, lassos, memory structures and arena products."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from rrsynth.config import get_settings
from rrsynth.errors import (
    DanglingEdge,
    DeadEndVertex,
    DuplicateVertex,
    IncompatibleStrategy,
    InvalidLasso,
    InvalidPrefix,
    SemanticError,
    SizeLimit,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

PlayPrefix = tuple[int, ...]


class Arena:
    """Finite directed graph whose vertices are split between Player 0 and Player 1.

    Vertices are addressed by their index in declaration order. Successor
    lists are kept sorted so that "lowest-indexed successor" is simply the
    first entry.
    """

    def __init__(self, names: Sequence[str], owners: Sequence[int], successors: Sequence[Iterable[int]]):
        self._names = tuple(names)
        self._owners = tuple(owners)
        self._succ = tuple(tuple(sorted(set(s))) for s in successors)
        if not (len(self._names) == len(self._owners) == len(self._succ)):
            raise SemanticError("names, owners and successor lists differ in length")
        for i, succ in enumerate(self._succ):
            if not succ:
                raise DeadEndVertex(self._names[i])
        self._index = {name: i for i, name in enumerate(self._names)}

    @property
    def size(self):
        return len(self._names)

    @property
    def names(self):
        return self._names

    @property
    def owners(self):
        return self._owners

    def successors(self, v):
        return self._succ[v]

    @cached_property
    def _pred(self):
        pred = [[] for _ in range(self.size)]
        for u, succ in enumerate(self._succ):
            for v in succ:
                pred[v].append(u)
        return tuple(tuple(p) for p in pred)

    def predecessors(self, v):
        return self._pred[v]

    @cached_property
    def edges(self):
        return tuple((u, v) for u, succ in enumerate(self._succ) for v in succ)

    def has_edge(self, u, v):
        return v in self._succ[u]

    def owner_of(self, v):
        return self._owners[v]

    def name_of(self, v):
        return self._names[v]

    def index_of(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVertex(name) from None

    def vertices_of(self, player):
        return tuple(v for v in range(self.size) if self._owners[v] == player)

    def __eq__(self, other):
        if not isinstance(other, Arena):
            return NotImplemented
        return (self._names, self._owners, self._succ) == (other._names, other._owners, other._succ)

    def __hash__(self):
        return hash((self._names, self._owners, self._succ))

    def __repr__(self):
        return f"Arena({self.size} vertices, {len(self.edges)} edges)"


def validate_arena(vertices: Iterable[tuple[str, int]], edges: Iterable[tuple[str, str]]) -> Arena:
    """Build an arena from named vertices and edges, checking well-formedness."""
    names, owners, index = [], [], {}
    for name, owner in vertices:
        if name in index:
            raise DuplicateVertex(name)
        if owner not in (0, 1):
            raise SemanticError(f"vertex '{name}' has owner {owner}; owners are 0 or 1")
        index[name] = len(names)
        names.append(name)
        owners.append(owner)
    successors = [set() for _ in names]
    for source, target in edges:
        if source not in index or target not in index:
            raise DanglingEdge(source, target)
        successors[index[source]].add(index[target])
    return Arena(names, owners, successors)


def check_prefix(arena: Arena, w: Sequence[int]) -> PlayPrefix:
    w = tuple(w)
    if not w:
        raise InvalidPrefix("a play prefix needs at least one vertex")
    for v in w:
        if not 0 <= v < arena.size:
            raise InvalidPrefix(f"vertex index {v} is not in the arena")
    for n in range(1, len(w)):
        if not arena.has_edge(w[n - 1], w[n]):
            raise InvalidPrefix(
                f"no edge {arena.name_of(w[n - 1])} -> {arena.name_of(w[n])} at position {n}"
            )
    return w


@dataclass(frozen=True)
class LassoPlay:
    """The play prefix · cycle^omega."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def vertex_at(self, n):
        if n < len(self.prefix):
            return self.prefix[n]
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]


def check_lasso(arena: Arena, lasso: LassoPlay) -> LassoPlay:
    if not lasso.cycle:
        raise InvalidLasso("the cycle of a lasso must be nonempty")
    walk = lasso.prefix + lasso.cycle + lasso.cycle[:1]
    try:
        check_prefix(arena, walk)
    except InvalidPrefix as e:
        raise InvalidLasso(str(e)) from None
    return lasso


@dataclass(frozen=True)
class MemoryStructure:
    """Deterministic memory: `init[v]` and `update[m][v]` are state indices."""

    states: tuple[Hashable, ...]
    init: tuple[int, ...]
    update: tuple[tuple[int, ...], ...]

    @property
    def size(self):
        return len(self.states)

    @classmethod
    def build(
        cls,
        arena: Arena,
        states: Sequence[Hashable],
        init_fn: Callable[[int], int],
        update_fn: Callable[[int, int], int],
        size_limit: int | None = None,
    ) -> MemoryStructure:
        limit = size_limit if size_limit is not None else get_settings().size_limit
        if arena.size * len(states) > limit:
            raise SizeLimit(
                f"memory with {len(states)} states over {arena.size} vertices exceeds the limit of {limit} product vertices"
            )
        init = tuple(init_fn(v) for v in range(arena.size))
        update = tuple(tuple(update_fn(m, v) for v in range(arena.size)) for m in range(len(states)))
        return cls(tuple(states), init, update)

    @classmethod
    def trivial(cls, arena: Arena) -> MemoryStructure:
        return cls(("*",), (0,) * arena.size, ((0,) * arena.size,))

    def update_star(self, w: Sequence[int]) -> int:
        m = self.init[w[0]]
        for v in w[1:]:
            m = self.update[m][v]
        return m


def extend_prefix(arena: Arena, mem: MemoryStructure, w: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs (w_n, update*(w_0..w_n)) for every position of w."""
    w = check_prefix(arena, w)
    m = mem.init[w[0]]
    extended = [(w[0], m)]
    for v in w[1:]:
        m = mem.update[m][v]
        extended.append((v, m))
    return extended


def project(pairs: Iterable[tuple[int, int]]) -> PlayPrefix:
    return tuple(v for v, _ in pairs)


class ProductArena(Arena):
    """Arena over pairs (vertex, memory state); names are `name@state`."""

    def __init__(self, base: Arena, memory: MemoryStructure, pairs, successors):
        self.base = base
        self.memory = memory
        self.pairs = tuple(pairs)
        self.pair_index = {pair: i for i, pair in enumerate(self.pairs)}
        super().__init__(
            [f"{base.name_of(v)}@{m}" for v, m in self.pairs],
            [base.owner_of(v) for v, _ in self.pairs],
            successors,
        )

    def start_of(self, v):
        """Index of (v, init(v)), or None when the restriction dropped it."""
        return self.pair_index.get((v, self.memory.init[v]))


def product(
    arena: Arena,
    mem: MemoryStructure,
    roots: Iterable[int] | None = None,
    size_limit: int | None = None,
) -> ProductArena:
    """Product arena; with `roots`, only the part reachable from (r, init(r))."""
    limit = size_limit if size_limit is not None else get_settings().size_limit
    total = arena.size * mem.size
    if total > limit:
        raise SizeLimit(f"product would have {total} vertices, above the limit of {limit}")

    if roots is None:
        pairs = [(v, m) for v in range(arena.size) for m in range(mem.size)]
        successors = [
            [w * mem.size + mem.update[m][w] for w in arena.successors(v)] for v, m in pairs
        ]
        return ProductArena(arena, mem, pairs, successors)

    pairs, index = [], {}
    queue = deque()
    for r in sorted(set(roots)):
        start = (r, mem.init[r])
        if start not in index:
            index[start] = len(pairs)
            pairs.append(start)
            queue.append(start)
    successors = {}
    while queue:
        v, m = queue.popleft()
        succ = []
        for w in arena.successors(v):
            nxt = (w, mem.update[m][w])
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
                queue.append(nxt)
            succ.append(index[nxt])
        successors[index[(v, m)]] = succ
    logger.debug("reachable product: %d of %d vertices", len(pairs), total)
    return ProductArena(arena, mem, pairs, [successors[i] for i in range(len(pairs))])


@dataclass(frozen=True)
class FiniteStateStrategy:
    """Strategy of `player` implemented by `memory`: next_move[(v, m)] is a successor of v."""

    memory: MemoryStructure
    player: int
    next_move: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def move(self, v, m):
        return self.next_move[(v, m)]


def check_strategy(arena: Arena, sigma: FiniteStateStrategy, player: int | None = None) -> FiniteStateStrategy:
    if player is not None and sigma.player != player:
        raise IncompatibleStrategy(f"expected a strategy for Player {player}, got Player {sigma.player}")
    mem = sigma.memory
    if len(mem.init) != arena.size or any(len(row) != arena.size for row in mem.update):
        raise IncompatibleStrategy("the strategy's memory was built for a different arena")
    for v in arena.vertices_of(sigma.player):
        for m in range(mem.size):
            target = sigma.next_move.get((v, m))
            if target is None:
                raise IncompatibleStrategy(f"no move for vertex '{arena.name_of(v)}' in memory state {m}")
            if not arena.has_edge(v, target):
                raise IncompatibleStrategy(
                    f"move {arena.name_of(v)} -> {arena.name_of(target)} is not an edge of the arena"
                )
    return sigma


def positional_strategy(arena: Arena, player: int, moves: Mapping[int, int]) -> FiniteStateStrategy:
    """One-state strategy; vertices missing from `moves` take their lowest-indexed successor."""
    next_move = {(v, 0): moves.get(v, arena.successors(v)[0]) for v in arena.vertices_of(player)}
    return check_strategy(arena, FiniteStateStrategy(MemoryStructure.trivial(arena), player, next_move))
