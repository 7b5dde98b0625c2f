"""Helpers shared by the command handlers."""

from pathlib import Path

import pandas as pd

from rrsynth.errors import BadParams, ParseError
from rrsynth.formats import format_value, parse_game, parse_strategy
from rrsynth.games import gen_builtin

BUILTIN_PREFIX = "builtin:"


def load_game(source):
    """Reads a game file, or builds a built-in game from `builtin:NAME[:K]`."""
    if source.startswith(BUILTIN_PREFIX):
        name, _, k = source[len(BUILTIN_PREFIX):].partition(":")
        try:
            return gen_builtin(name, int(k) if k else None)
        except ValueError:
            raise BadParams(f"bad built-in parameter in '{source}'") from None
    return parse_game(read_source(source))


def load_strategy(path, arena):
    return parse_strategy(read_source(path), arena)


def read_source(path):
    """Reads a UTF-8 file; undecodable bytes become a ParseError at their position."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        line = data.count(b"\n", 0, e.start) + 1
        raise ParseError(line, e.start - line_start + 1, f"not valid UTF-8 (byte 0x{data[e.start]:02x})") from None


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")


def parse_caps(values, k):
    """`--cap N` sets every condition, `--cap J=N` (J counted from 1) sets one."""
    if not values:
        return None
    caps = [None] * k
    for value in values:
        target, sep, amount = value.partition("=")
        try:
            if sep:
                j, n = int(target), int(amount)
                if not 1 <= j <= k:
                    raise BadParams(f"--cap {value}: conditions are numbered 1..{k}")
                caps[j - 1] = n
            else:
                n = int(target)
                caps = [n if c is None else c for c in caps]
        except ValueError:
            raise BadParams(f"--cap expects N or J=N, got '{value}'") from None
    if any(c is None for c in caps):
        missing = [j + 1 for j, c in enumerate(caps) if c is None]
        raise BadParams(f"no cap given for condition(s) {missing}")
    if any(c < 1 for c in caps):
        raise BadParams("caps must be at least 1")
    return tuple(caps)


def value_table(arena, values, vertices=None, column="value"):
    chosen = range(arena.size) if vertices is None else vertices
    return pd.DataFrame(
        {"vertex": [arena.name_of(v) for v in chosen], column: [format_value(values[v]) for v in chosen]}
    )


def print_frame(df):
    print(df.to_string(index=False))


def short_number(n, keep=40):
    text = str(n)
    if len(text) <= keep:
        return text
    return f"{text[:12]}... ({len(text)} digits)"
