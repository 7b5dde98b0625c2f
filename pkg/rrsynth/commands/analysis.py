"""check, value, dickson, gen and dot: inspecting games without solving them."""

import json
import logging

from rrsynth.bounds import dickson_bound, dickson_bound_closed, synthesis_thresholds
from rrsynth.buchi import pad_conditions, rr_buchi_memory, value_bound
from rrsynth.arena import product
from rrsynth.commands.common import load_game, parse_caps, print_frame, short_number, write_text
from rrsynth.formats import export_dot, format_value, parse_lasso, serialize_game, serialize_strategy
from rrsynth.games import gen_builtin, reference_strategies
from rrsynth.optimal import default_thresholds, rr_to_mpg
from rrsynth.rrcore import annotation_frame, lasso_value

logger = logging.getLogger(__name__)


def run_check(args):
    game = load_game(args.game)
    arena = game.arena
    thresholds = synthesis_thresholds(game)
    if args.json:
        print(json.dumps({
            "vertices": arena.size,
            "edges": len(arena.edges),
            "conditions": game.k,
            "value_bound": str(value_bound(game)),
            "thresholds": [str(t) for t in thresholds],
        }, indent=2))
        return 0
    print(f"vertices: {arena.size}  edges: {len(arena.edges)}  conditions: {game.k}")
    print(f"Player 0 vertices: {len(arena.vertices_of(0))}  Player 1 vertices: {len(arena.vertices_of(1))}")
    print(f"value bound: {short_number(value_bound(game))}")
    print("synthesis thresholds: " + ", ".join(short_number(t) for t in thresholds))
    return 0


def run_value(args):
    game = load_game(args.game)
    lasso = parse_lasso(game.arena, args.lasso)
    value = lasso_value(game, lasso)
    if args.show:
        # prefix and two traversals of the cycle
        print_frame(annotation_frame(game, lasso.prefix + lasso.cycle * 2))
    print(format_value(value))
    return 0


def run_dickson(args):
    exact = dickson_bound(args.s, args.k)
    print(f"b({args.s},{args.k}) = {short_number(exact, keep=args.digits)}")
    print(f"digits: {len(str(exact))}")
    if args.closed:
        closed = dickson_bound_closed(args.s, args.k)
        print(f"closed form = {short_number(closed, keep=args.digits)}")
        print(f"closed form digits: {len(str(closed))}")
    return 0


def run_gen(args):
    game = gen_builtin(args.name, args.k)
    text = serialize_game(game)
    if args.output:
        write_text(args.output, text)
        logger.info("wrote %s", args.output)
    else:
        print(text, end="")
    strategies = reference_strategies(args.name, game)
    if args.strategy_out:
        write_text(args.strategy_out, serialize_strategy(game.arena, strategies["strategy"]))
    if args.adversary_out:
        if "adversary" not in strategies:
            logger.warning("'%s' ships no adversary strategy", args.name)
        else:
            write_text(args.adversary_out, serialize_strategy(game.arena, strategies["adversary"]))
    return 0


def run_dot(args):
    game = load_game(args.game)
    if args.product == "buchi":
        padded = pad_conditions(game)
        target = product(game.arena, rr_buchi_memory(padded))
    elif args.product == "mpg":
        caps = default_thresholds(game, parse_caps(args.cap, game.k)).caps
        target = rr_to_mpg(game, caps, reachable_only=True)
    else:
        target = game
    text = export_dot(target)
    if args.output:
        write_text(args.output, text)
    else:
        print(text, end="")
    return 0
