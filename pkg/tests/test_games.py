import pytest

from rrsynth.errors import BadParams
from rrsynth.games import (
    always_revisit_adversary,
    gen_builtin,
    hub_visits,
    open_request_memory,
    reference_strategies,
    smallest_open_blade_strategy,
)
from rrsynth.optimal import evaluate_strategy, playout


def test_builtin_shapes(fig1, fig2, blades4):
    assert (fig1.arena.size, len(fig1.arena.edges), fig1.k) == (8, 12, 2)
    assert (fig2.arena.size, len(fig2.arena.edges), fig2.k) == (5, 6, 2)
    assert (blades4.arena.size, blades4.k) == (14, 4)


def test_blade_labels(blades4):
    arena = blades4.arena
    s1, v4 = arena.index_of("s1"), arena.index_of("v4")
    answered_at_s1 = [j + 1 for j, c in enumerate(blades4.conditions) if s1 in c.response]
    requested_at_v4 = [j + 1 for j, c in enumerate(blades4.conditions) if v4 in c.request]
    assert answered_at_s1 == [2, 3, 4]
    assert requested_at_v4 == [1, 2, 3]


def test_gen_builtin_rejects_bad_parameters():
    with pytest.raises(BadParams):
        gen_builtin("blades", 1)
    with pytest.raises(BadParams):
        gen_builtin("fig1", 3)
    with pytest.raises(BadParams):
        gen_builtin("fig3")


def test_open_request_memory_tracks_open_set(blades4):
    arena = blades4.arena
    mem = open_request_memory(blades4)
    m = mem.init[arena.index_of("i")]
    assert mem.states[m] == (1, 2, 3, 4)
    m = mem.update[m][arena.index_of("c3")]
    assert mem.states[m] == (1, 2, 4)
    m = mem.update[m][arena.index_of("v3")]
    assert mem.states[m] == (1, 2, 4)


def _blades_play(k, steps):
    game = gen_builtin("blades", k)
    return game, playout(
        game,
        smallest_open_blade_strategy(game),
        always_revisit_adversary(game),
        game.arena.index_of("i"),
        steps,
    )


@pytest.mark.parametrize("k", [2, 3, 4])
def test_blades_needs_exponentially_many_hub_visits(k):
    game, play = _blades_play(k, 3 * 2**k + 10)
    assert len(hub_visits(play)) == 2**k - 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_blades_last_condition_answered_at_hub_visit(k):
    game, play = _blades_play(k, 3 * 2**k + 10)
    arena = game.arena
    hub, last_blade = arena.index_of("h"), arena.index_of(f"c{k}")
    first_entry = play.vertices.index(last_blade)
    assert play.vertices[:first_entry].count(hub) == 2 ** (k - 1)


def test_smallest_open_blade_strategy_wins(blades4):
    sigma = smallest_open_blade_strategy(blades4)
    i = blades4.arena.index_of("i")
    assert evaluate_strategy(blades4, sigma, i) == 0


def test_reference_strategies_are_named():
    assert set(reference_strategies("blades", gen_builtin("blades", 2))) == {"strategy", "adversary"}
    assert set(reference_strategies("fig1", gen_builtin("fig1"))) == {"strategy"}
