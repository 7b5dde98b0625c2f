import networkx as nx
import pytest
from hypothesis import given

from rrsynth.arena import (
    Arena,
    FiniteStateStrategy,
    LassoPlay,
    MemoryStructure,
    check_lasso,
    check_prefix,
    check_strategy,
    extend_prefix,
    positional_strategy,
    product,
    project,
    validate_arena,
)
from rrsynth.buchi import rr_buchi_memory
from rrsynth.errors import (
    DanglingEdge,
    DeadEndVertex,
    DuplicateVertex,
    IncompatibleStrategy,
    InvalidLasso,
    InvalidPrefix,
    SizeLimit,
    UnknownVertex,
)
from rrsynth.optimal import waiting_memory

from .strategies import arenas

Q, R1, R2, R12, P, P1, P2, E = range(8)


def test_fig1_arena_shape(fig1):
    arena = fig1.arena
    assert arena.size == 8
    assert len(arena.edges) == 12
    assert arena.vertices_of(1) == (Q, R1, R2, R12)
    assert arena.successors(P) == (P1, P2, E)
    assert arena.predecessors(P) == (R1, R2, R12)


def test_validate_rejects_dead_end():
    with pytest.raises(DeadEndVertex) as info:
        validate_arena([("a", 0), ("b", 1)], [("a", "b")])
    assert info.value.name == "b"
    assert "no outgoing edge" in str(info.value)


def test_validate_rejects_dangling_edge():
    with pytest.raises(DanglingEdge):
        validate_arena([("a", 0)], [("a", "a"), ("a", "z")])


def test_validate_rejects_duplicate_vertex():
    with pytest.raises(DuplicateVertex):
        validate_arena([("a", 0), ("a", 1)], [("a", "a")])


def test_index_of_unknown_name(fig1):
    with pytest.raises(UnknownVertex):
        fig1.arena.index_of("nowhere")


def test_check_prefix(fig1):
    assert check_prefix(fig1.arena, [Q, R12, P]) == (Q, R12, P)
    with pytest.raises(InvalidPrefix):
        check_prefix(fig1.arena, [Q, P])
    with pytest.raises(InvalidPrefix):
        check_prefix(fig1.arena, [])


def test_check_lasso(fig1):
    check_lasso(fig1.arena, LassoPlay((Q, R12, P), (P1, E, Q, R12, P)))
    with pytest.raises(InvalidLasso):
        # the cycle does not close: p1 is not a successor of e
        check_lasso(fig1.arena, LassoPlay((), (P1, E)))
    with pytest.raises(InvalidLasso):
        check_lasso(fig1.arena, LassoPlay((Q,), ()))


def test_extend_prefix_with_waiting_memory(fig1):
    mem = waiting_memory(fig1, (3, 3))
    extended = extend_prefix(fig1.arena, mem, [Q, R12, P])
    assert [mem.states[m] for _, m in extended] == [(0, 0), (1, 1), (2, 2)]
    assert project(extended) == (Q, R12, P)


def test_product_with_buchi_memory_has_all_pairs(fig1):
    mem = rr_buchi_memory(fig1)
    prod = product(fig1.arena, mem)
    assert mem.size == 16
    assert prod.size == 128
    assert prod.name_of(prod.pair_index[(Q, 3)]) == "q@3"


def test_product_edges_follow_memory_updates(fig1):
    mem = rr_buchi_memory(fig1)
    prod = product(fig1.arena, mem)
    for u in range(prod.size):
        v, m = prod.pairs[u]
        targets = {prod.pairs[w] for w in prod.successors(u)}
        assert targets == {(w, mem.update[m][w]) for w in fig1.arena.successors(v)}


def test_reachable_product_is_closed(fig1):
    mem = waiting_memory(fig1, (4, 4))
    prod = product(fig1.arena, mem, roots=range(8))
    assert prod.size < 8 * mem.size
    for v in range(8):
        assert prod.start_of(v) is not None
    for u in range(prod.size):
        assert prod.successors(u)


def test_product_size_limit(fig1):
    mem = rr_buchi_memory(fig1)
    with pytest.raises(SizeLimit):
        product(fig1.arena, mem, size_limit=100)


def test_update_star_matches_extension(fig1):
    mem = waiting_memory(fig1, (5, 5))
    w = [Q, R1, P, P2, E, Q]
    assert mem.update_star(w) == extend_prefix(fig1.arena, mem, w)[-1][1]


def test_positional_strategy_defaults_to_lowest_successor(fig1):
    sigma = positional_strategy(fig1.arena, 0, {P: P2})
    assert sigma.move(P, 0) == P2
    assert sigma.move(E, 0) == Q


def test_check_strategy_rejects_non_edges(fig1):
    arena = fig1.arena
    moves = {(v, 0): arena.successors(v)[0] for v in arena.vertices_of(0)}
    moves[(P, 0)] = Q
    with pytest.raises(IncompatibleStrategy):
        check_strategy(arena, FiniteStateStrategy(MemoryStructure.trivial(arena), 0, moves))


def test_check_strategy_rejects_wrong_player(fig1):
    sigma = positional_strategy(fig1.arena, 0, {})
    with pytest.raises(IncompatibleStrategy):
        check_strategy(fig1.arena, sigma, player=1)


@given(arenas())
def test_rooted_product_is_the_reachable_part(arena: Arena) -> None:
    reachable = nx.descendants(nx.DiGraph(arena.edges), 0) | {0}
    prod = product(arena, MemoryStructure.trivial(arena), roots=[0])
    assert {v for v, _ in prod.pairs} == reachable
    for i, (v, _) in enumerate(prod.pairs):
        assert {prod.pairs[j][0] for j in prod.successors(i)} == set(arena.successors(v))


@given(arenas())
def test_arena_equality_is_structural(arena: Arena) -> None:
    copy = Arena(arena.names, arena.owners, [arena.successors(v) for v in range(arena.size)])
    assert copy == arena
    assert hash(copy) == hash(arena)
