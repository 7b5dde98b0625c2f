"""Command-line entry point: `rrsynth <command> ...`.

Exit codes: 0 success, 1 usage or parse error, 2 semantic error,
3 size or budget limit exceeded, 4 oracle comparison mismatch.
"""

import argparse
import logging
import sys

from rrsynth import __version__
from rrsynth.commands.analysis import run_check, run_dickson, run_dot, run_gen, run_value
from rrsynth.commands.playout import run_play
from rrsynth.commands.synthesis import run_eval, run_oracle, run_optimal, run_solve
from rrsynth.config import get_settings
from rrsynth.errors import RRSynthError
from rrsynth.games import BUILTIN_GAMES

GAME_HELP = "game file, or builtin:NAME[:K] for a built-in game"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_caps(parser):
    parser.add_argument(
        "--cap",
        action="append",
        metavar="N|J=N",
        help="waiting-time cap for every condition (N) or for condition J (J=N); repeatable",
    )


def build_parser():
    parser = _Parser(prog="rrsynth", description="Solve request-response games.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a game and print its bounds")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_check)

    p = sub.add_parser("solve", help="decide winners and write a winning strategy")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("-o", "--output", help="strategy file to write")
    p.add_argument("--profile", action="store_true", help="also report the largest waiting times under the strategy")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_solve)

    p = sub.add_parser("optimal", help="synthesize a strategy of least value")
    p.add_argument("game", help=GAME_HELP)
    _add_caps(p)
    p.add_argument("--theoretical", action="store_true", help="use the synthesis thresholds as caps")
    p.add_argument("-o", "--output", help="strategy file to write")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_optimal)

    p = sub.add_parser("eval", help="worst-case value of a stored strategy")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("--strategy", required=True)
    p.add_argument("--from", dest="start", help="start vertex (default: every vertex)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_eval)

    p = sub.add_parser("value", help="value of a lasso play")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("--lasso", required=True, help="'v1,v2;c1,c2' for v1 v2 (c1 c2)^omega")
    p.add_argument("--show", action="store_true", help="print waiting times along the lasso")
    p.set_defaults(handler=run_value)

    p = sub.add_parser("oracle", help="brute-force values among cap-bounded strategies")
    p.add_argument("game", help=GAME_HELP)
    _add_caps(p)
    p.add_argument("--budget", type=int, help="maximum number of enumerated strategies")
    p.add_argument("--compare", action="store_true", help="compare with the synthesized values")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_oracle)

    p = sub.add_parser("dickson", help="print the dickson bound b(s, k)")
    p.add_argument("s", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--closed", action="store_true", help="also print the closed-form estimate")
    p.add_argument("--digits", type=int, default=80, help="print numbers up to this many digits in full")
    p.set_defaults(handler=run_dickson)

    p = sub.add_parser("gen", help="write a built-in game")
    p.add_argument("name", choices=BUILTIN_GAMES)
    p.add_argument("--k", type=int, help="number of blades")
    p.add_argument("-o", "--output")
    p.add_argument("--strategy-out", help="also write the game's reference strategy")
    p.add_argument("--adversary-out", help="also write the game's reference adversary")
    p.set_defaults(handler=run_gen)

    p = sub.add_parser("dot", help="export Graphviz text")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("--product", choices=("buchi", "mpg"), help="export a product arena instead")
    _add_caps(p)
    p.add_argument("-o", "--output")
    p.set_defaults(handler=run_dot)

    p = sub.add_parser("play", help="play a strategy against an adversary")
    p.add_argument("game", help=GAME_HELP)
    p.add_argument("--strategy", required=True)
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--steps", type=int, default=20)
    who = p.add_mutually_exclusive_group()
    who.add_argument("--adversary", help="Player 1 strategy file")
    who.add_argument("--script", help="comma-separated Player 1 moves")
    who.add_argument("--interactive", action="store_true", help="ask for Player 1 moves")
    p.add_argument("--chart", help="write an HTML chart of the play")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=run_play)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = get_settings()
        level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level, logging.WARNING)
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        return args.handler(args)
    except RRSynthError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
