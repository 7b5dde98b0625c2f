import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrsynth.arena import Arena, validate_arena
from rrsynth.buchi import (
    BuchiGame,
    attractor,
    pad_conditions,
    rr_buchi_memory,
    solve_buchi,
    solve_rr,
    value_bound,
)
from rrsynth.errors import BadParams
from rrsynth.optimal import evaluate_strategy, waiting_time_profile
from rrsynth.rrcore import INFINITE, PenaltyFn, RRCondition, RRGame

from .strategies import arenas, rr_games


def test_attractor_to_blade_sinks(blades4):
    arena = blades4.arena
    sinks = [arena.index_of(f"s{j}") for j in range(1, 5)]
    region, moves = attractor(arena, sinks, 1)
    for j in range(1, 5):
        c = arena.index_of(f"c{j}")
        assert c in region
        assert moves[c] == arena.index_of(f"s{j}")


def test_attractor_moves_decrease_rank():
    # a -> b -> c, player 0 owns everything
    arena = validate_arena([("a", 0), ("b", 0), ("c", 0)], [("a", "b"), ("a", "a"), ("b", "c"), ("c", "c")])
    region, moves = attractor(arena, [2], 0)
    assert region == {0, 1, 2}
    assert moves == {0: 1, 1: 2}


@given(arenas())
def test_attractor_of_everything_is_everything(arena: Arena) -> None:
    for player in (0, 1):
        region, _ = attractor(arena, range(arena.size), player)
        assert region == set(range(arena.size))


@given(arenas(), st.data(), st.integers(0, 1))
def test_attractor_grows_with_its_target(arena: Arena, data, player: int) -> None:
    vertices = st.frozensets(st.integers(0, arena.size - 1))
    small = data.draw(vertices)
    large = small | data.draw(vertices)
    assert attractor(arena, small, player)[0] <= attractor(arena, large, player)[0]


def test_solve_buchi_two_cycle():
    arena = validate_arena([("a", 0), ("b", 0)], [("a", "b"), ("b", "a")])
    result = solve_buchi(BuchiGame(arena, frozenset({1})))
    assert result.winning_region_0 == {0, 1}
    assert result.winning_region_1 == frozenset()


def test_solve_buchi_player_one_escapes():
    # player 1 at x can avoid the accepting self-loop forever
    arena = validate_arena([("x", 1), ("acc", 0), ("dull", 0)], [("x", "acc"), ("x", "dull"), ("acc", "acc"), ("dull", "dull")])
    result = solve_buchi(BuchiGame(arena, frozenset({1})))
    assert result.winning_region_0 == {1}
    assert result.winning_region_1 == {0, 2}
    assert result.strategy_1[0] == 2


@given(arenas())
def test_buchi_regions_partition(arena: Arena) -> None:
    result = solve_buchi(BuchiGame(arena, frozenset(range(0, arena.size, 2))))
    assert result.winning_region_0 | result.winning_region_1 == set(range(arena.size))
    assert not result.winning_region_0 & result.winning_region_1
    for v in result.winning_region_0:
        if arena.owner_of(v) == 0:
            assert result.strategy_0[v] in result.winning_region_0
        else:
            assert set(arena.successors(v)) <= result.winning_region_0


def test_buchi_memory_update_advances_counter(fig1):
    mem = rr_buchi_memory(fig1)
    start = mem.states.index(((), 1, 0))
    after = mem.update[start][fig1.arena.index_of("e")]
    assert mem.states[after] == ((), 2, 1)


def test_buchi_memory_keeps_counter_while_request_open(fig1):
    arena = fig1.arena
    mem = rr_buchi_memory(fig1)
    m = mem.init[arena.index_of("r12")]
    assert mem.states[m] == ((1, 2), 1, 0)
    m = mem.update[m][arena.index_of("p")]
    assert mem.states[m] == ((1, 2), 1, 0)
    m = mem.update[m][arena.index_of("p1")]
    assert mem.states[m] == ((2,), 2, 1)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_buchi_memory_size(k):
    arena = validate_arena([("a", 0)], [("a", "a")])
    conditions = tuple(RRCondition(frozenset(), frozenset()) for _ in range(k))
    game = RRGame(arena, conditions, (PenaltyFn.identity(),) * k)
    assert rr_buchi_memory(game).size == k * 2 ** (k + 1)


def test_pad_conditions_single_condition():
    arena = validate_arena([("a", 0)], [("a", "a")])
    game = RRGame(arena, (RRCondition(frozenset({0}), frozenset({0})),), (PenaltyFn.identity(),))
    padded = pad_conditions(game)
    assert padded.k == 2
    assert padded.conditions[1] == RRCondition(frozenset(), frozenset())


def test_solve_rr_two_request_game(fig1):
    solution = solve_rr(fig1)
    assert solution.winning_region_0 == set(range(8))
    assert solution.product.size == 128


def test_solve_rr_blades(blades4):
    solution = solve_rr(blades4)
    assert blades4.arena.index_of("i") in solution.winning_region_0


def test_solve_rr_unanswerable_request():
    arena = validate_arena([("v", 0)], [("v", "v")])
    game = RRGame(arena, (RRCondition(frozenset({0}), frozenset()),), (PenaltyFn.identity(),))
    solution = solve_rr(game)
    assert solution.winning_region_1 == {0}


def test_solve_rr_player_one_choice():
    arena = validate_arena(
        [("x", 1), ("good", 0), ("bad", 0)],
        [("x", "good"), ("x", "bad"), ("good", "good"), ("bad", "bad")],
    )
    game = RRGame(arena, (RRCondition(frozenset({2}), frozenset()),), (PenaltyFn.identity(),))
    solution = solve_rr(game)
    assert solution.winning_region_0 == {1}
    assert solution.winning_region_1 == {0, 2}


def test_value_bound_examples(fig1):
    arena = validate_arena([("a", 0)], [("a", "a")])
    single = RRGame(arena, (RRCondition(frozenset({0}), frozenset({0})),), (PenaltyFn.identity(),))
    assert value_bound(single) == 2
    assert value_bound(fig1) == 128
    assert value_bound(RRGame(arena, (), ())) == 0


@pytest.mark.slow
def test_winning_strategy_respects_value_bound(fig1):
    solution = solve_rr(fig1)
    profile = waiting_time_profile(fig1, solution.strategy, range(8))
    assert profile is not None
    assert max(profile) <= 8 * 2 * 2**2
    value = evaluate_strategy(fig1, solution.strategy, fig1.arena.index_of("q"))
    assert value is not INFINITE
    assert value <= value_bound(fig1)


@given(rr_games(max_size=3, k=2))
def test_winning_strategy_wins_from_winning_region(game: RRGame) -> None:
    solution = solve_rr(game)
    for v in solution.winning_region_0:
        assert evaluate_strategy(game, solution.strategy, v) is not INFINITE


def test_buchi_memory_needs_two_conditions(fig1):
    single = RRGame(fig1.arena, fig1.conditions[:1], fig1.penalties[:1])
    with pytest.raises(BadParams):
        rr_buchi_memory(single)
    assert rr_buchi_memory(pad_conditions(single)).size == 16
