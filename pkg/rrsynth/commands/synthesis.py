"""solve, optimal, eval and oracle: deciding games and building or checking strategies."""

import json
import logging

import pandas as pd

from rrsynth.buchi import solve_rr
from rrsynth.commands.common import (
    load_game,
    load_strategy,
    parse_caps,
    print_frame,
    value_table,
    write_text,
)
from rrsynth.errors import ComparisonMismatch
from rrsynth.formats import format_value, serialize_strategy, values_document
from rrsynth.optimal import (
    default_thresholds,
    evaluate_strategy,
    rr_oracle_optimal,
    synthesize_optimal,
    waiting_time_profile,
)

logger = logging.getLogger(__name__)


def run_solve(args):
    game = load_game(args.game)
    arena = game.arena
    solution = solve_rr(game)
    if args.output:
        write_text(args.output, serialize_strategy(arena, solution.strategy))
    profile = None
    if args.profile and solution.winning_region_0:
        profile = waiting_time_profile(game, solution.strategy, sorted(solution.winning_region_0))

    if args.json:
        doc = {
            "winning_region_0": [arena.name_of(v) for v in sorted(solution.winning_region_0)],
            "winning_region_1": [arena.name_of(v) for v in sorted(solution.winning_region_1)],
            "memory_states": solution.strategy.memory.size,
        }
        if args.profile:
            doc["max_waiting_times"] = None if profile is None else list(profile)
        print(json.dumps(doc, indent=2))
        return 0

    table = pd.DataFrame({
        "vertex": list(arena.names),
        "owner": list(arena.owners),
        "winner": [0 if v in solution.winning_region_0 else 1 for v in range(arena.size)],
    })
    print_frame(table)
    print(f"memory states: {solution.strategy.memory.size}")
    if args.profile:
        print("max waiting times: " + ("unbounded" if profile is None else ", ".join(map(str, profile))))
    return 0


def run_optimal(args):
    game = load_game(args.game)
    thresholds = default_thresholds(game, parse_caps(args.cap, game.k), theoretical=args.theoretical)
    outcome = synthesize_optimal(game, thresholds)
    if args.output:
        write_text(args.output, serialize_strategy(game.arena, outcome.strategy))

    if args.json:
        print(json.dumps({
            "caps": list(outcome.thresholds.caps),
            "provenance": outcome.thresholds.provenance,
            "label": outcome.label,
            "values": values_document(game.arena, outcome.values),
            "mpg": {"vertices": outcome.mpg_vertices, "max_weight": outcome.mpg_max_weight},
        }, indent=2))
        return 0

    print(f"caps: {', '.join(map(str, outcome.thresholds.caps))} ({outcome.thresholds.provenance})")
    print(f"values are {outcome.label}")
    print_frame(value_table(game.arena, outcome.values))
    print(f"mean-payoff game: {outcome.mpg_vertices} vertices, max weight {outcome.mpg_max_weight}")
    return 0


def run_eval(args):
    game = load_game(args.game)
    arena = game.arena
    sigma = load_strategy(args.strategy, arena)
    vertices = [arena.index_of(args.start)] if args.start else list(range(arena.size))
    values = {v: evaluate_strategy(game, sigma, v) for v in vertices}
    if args.json:
        print(json.dumps({arena.name_of(v): format_value(x) for v, x in values.items()}, indent=2))
        return 0
    print_frame(value_table(arena, values, vertices))
    return 0


def run_oracle(args):
    game = load_game(args.game)
    arena = game.arena
    thresholds = default_thresholds(game, parse_caps(args.cap, game.k))
    values = rr_oracle_optimal(game, thresholds.caps, budget=args.budget)
    table = value_table(arena, values, column="oracle")

    mismatched = []
    if args.compare:
        synthesized = synthesize_optimal(game, thresholds).values
        table["synthesized"] = [format_value(x) for x in synthesized]
        mismatched = [arena.name_of(v) for v in range(arena.size) if synthesized[v] != values[v]]

    if args.json:
        print(json.dumps({
            "caps": list(thresholds.caps),
            "values": values_document(arena, values),
            "mismatches": mismatched,
        }, indent=2))
    else:
        print(f"caps: {', '.join(map(str, thresholds.caps))}")
        print_frame(table)
    if mismatched:
        raise ComparisonMismatch(f"oracle and synthesis disagree at {', '.join(mismatched)}")
    return 0
