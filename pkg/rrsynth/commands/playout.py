"""play: step a strategy against a scripted, stored or interactive adversary."""

import json
import logging

from rrsynth.arena import positional_strategy
from rrsynth.charts import playout_figure
from rrsynth.commands.common import load_game, load_strategy, print_frame
from rrsynth.errors import ScriptExhausted
from rrsynth.formats import format_value
from rrsynth.optimal import playout

logger = logging.getLogger(__name__)


def _ask_user(state):
    arena = state.game.arena
    options = [arena.name_of(w) for w in arena.successors(state.vertex)]
    waiting = ", ".join(map(str, state.waiting))
    prompt = f"[{len(state.prefix) - 1}] at {arena.name_of(state.vertex)} (waiting {waiting}); move to {'/'.join(options)}: "
    while True:
        try:
            answer = input(prompt).strip()
        except EOFError:
            raise ScriptExhausted(f"input ended at position {len(state.prefix) - 1}") from None
        if answer in options:
            return answer
        print(f"choose one of {', '.join(options)}")


def _adversary(args, arena):
    if args.adversary:
        return load_strategy(args.adversary, arena)
    if args.script is not None:
        return [m.strip() for m in args.script.split(",") if m.strip()]
    if args.interactive:
        return _ask_user
    logger.info("no adversary given; Player 1 takes lowest-indexed successors")
    return positional_strategy(arena, 1, {})


def run_play(args):
    game = load_game(args.game)
    arena = game.arena
    sigma = load_strategy(args.strategy, arena)
    play = playout(game, sigma, _adversary(args, arena), arena.index_of(args.start), args.steps)

    if args.chart:
        playout_figure(play).write_html(args.chart)
        logger.info("wrote chart to %s", args.chart)

    if args.json:
        print(json.dumps({
            "vertices": [arena.name_of(v) for v in play.vertices],
            "penalties": list(play.penalties),
            "mean_penalty": format_value(play.mean_penalty()),
        }, indent=2))
        return 0
    print_frame(play.to_frame())
    print(f"mean penalty over {len(play.steps)} positions: {format_value(play.mean_penalty())}")
    return 0
