"""Text formats: game files, strategy files, lassos, values and DOT export.

Game files are line oriented:

    # comment
    [vertices]
    q 1
    p 0
    [edges]
    q -> p
    p -> q
    [conditions]
    request: q; response: p; penalty: identity
    [defaults]
    penalty: affine:2:1

Strategy files are JSON documents (see `serialize_strategy`).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from rrsynth.arena import (
    Arena,
    FiniteStateStrategy,
    LassoPlay,
    MemoryStructure,
    check_lasso,
    check_strategy,
    validate_arena,
)
from rrsynth.errors import IncompatibleStrategy, ParseError, SemanticError
from rrsynth.meanpayoff import MeanPayoffGame
from rrsynth.rrcore import INFINITE, PenaltyFn, RRCondition, RRGame

SECTIONS = ("vertices", "edges", "conditions", "defaults")
CONDITION_KEYS = ("request", "response", "penalty")


def _column(raw, needle):
    found = raw.find(needle)
    return found + 1 if found >= 0 else 1


def parse_game(text: str) -> RRGame:
    section = None
    vertices, edges, conditions = [], [], []
    default_penalty = PenaltyFn.identity()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            name = stripped[1:-1].strip() if stripped.endswith("]") else None
            if name not in SECTIONS:
                raise ParseError(lineno, col, f"unknown section header '{stripped}'")
            section = name
            continue
        if section is None:
            raise ParseError(lineno, col, "content before the first section header")

        if section == "vertices":
            parts = stripped.split()
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ParseError(lineno, col, "expected '<name> <owner>' with owner 0 or 1")
            vertices.append((parts[0], int(parts[1])))
        elif section == "edges":
            source, arrow, rest = stripped.partition("->")
            source = source.strip()
            targets = rest.split()
            if not arrow or not source or len(source.split()) != 1 or not targets:
                raise ParseError(lineno, col, "expected '<source> -> <target> [<target> ...]'")
            edges.extend((source, t) for t in targets)
        elif section == "conditions":
            fields = {}
            for part in stripped.split(";"):
                key, sep, value = part.partition(":")
                key = key.strip()
                if not sep or key not in CONDITION_KEYS:
                    raise ParseError(lineno, _column(raw, part.strip()), f"expected 'request:', 'response:' or 'penalty:', got '{part.strip()}'")
                if key in fields:
                    raise ParseError(lineno, _column(raw, part.strip()), f"'{key}' given twice")
                fields[key] = value
            missing = [k for k in ("request", "response") if k not in fields]
            if missing:
                raise ParseError(lineno, col, f"condition lacks '{missing[0]}:'")
            penalty = None
            if "penalty" in fields:
                penalty = PenaltyFn.parse(fields["penalty"], lineno, _column(raw, fields["penalty"].strip()))
            conditions.append((lineno, fields["request"].split(), fields["response"].split(), penalty))
        else:
            key, sep, value = stripped.partition(":")
            if not sep or key.strip() != "penalty":
                raise ParseError(lineno, col, "the only default is 'penalty: <descriptor>'")
            default_penalty = PenaltyFn.parse(value, lineno, _column(raw, value.strip()))

    if not vertices:
        raise SemanticError("the game declares no vertices")
    arena = validate_arena(vertices, edges)

    def indices(lineno, names):
        out = set()
        for n in names:
            if n not in arena.names:
                raise SemanticError(f"line {lineno}: condition mentions unknown vertex '{n}'")
            out.add(arena.index_of(n))
        return frozenset(out)

    conds, penalties = [], []
    for lineno, request, response, penalty in conditions:
        conds.append(RRCondition(indices(lineno, request), indices(lineno, response)))
        penalties.append(penalty if penalty is not None else default_penalty)
    return RRGame(arena, tuple(conds), tuple(penalties))


def serialize_game(game: RRGame) -> str:
    arena = game.arena
    lines = ["[vertices]"]
    lines += [f"{name} {owner}" for name, owner in zip(arena.names, arena.owners)]
    lines += ["", "[edges]"]
    for v in range(arena.size):
        lines.append(f"{arena.name_of(v)} -> " + " ".join(arena.name_of(w) for w in arena.successors(v)))
    lines += ["", "[conditions]"]
    for cond, f in zip(game.conditions, game.penalties):
        request = " ".join(arena.name_of(v) for v in sorted(cond.request))
        response = " ".join(arena.name_of(v) for v in sorted(cond.response))
        lines.append(f"request: {request}; response: {response}; penalty: {f.describe()}")
    return "\n".join(lines) + "\n"


def parse_lasso(arena: Arena, text: str) -> LassoPlay:
    """`v1,v2;c1,c2` is the prefix v1 v2 followed by (c1 c2)^omega; the prefix may be omitted."""
    prefix_text, sep, cycle_text = text.partition(";")
    if not sep:
        prefix_text, cycle_text = "", prefix_text

    def names(part):
        return tuple(arena.index_of(n.strip()) for n in part.split(",") if n.strip())

    return check_lasso(arena, LassoPlay(names(prefix_text), names(cycle_text)))


def format_value(value) -> str:
    if value is INFINITE:
        return "inf"
    if value is None:
        return "none"
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def values_document(arena: Arena, values: Sequence) -> dict[str, str]:
    return {arena.name_of(v): format_value(x) for v, x in enumerate(values)}


def _state_label(state):
    return state if isinstance(state, str) else str(state)


def serialize_strategy(arena: Arena, sigma: FiniteStateStrategy) -> str:
    names = arena.names
    mem = sigma.memory
    deciders = arena.vertices_of(sigma.player)
    doc = {
        "player": sigma.player,
        "vertices": list(names),
        "memory": {
            "states": [_state_label(s) for s in mem.states],
            "init": {names[v]: mem.init[v] for v in range(arena.size)},
            "update": [{names[v]: row[v] for v in range(arena.size)} for row in mem.update],
        },
        "next_move": [
            {names[v]: names[sigma.next_move[(v, m)]] for v in deciders} for m in range(mem.size)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _locate(text, needle):
    at = text.find(needle)
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    return line, at - (text.rfind("\n", 0, at) + 1) + 1


def parse_strategy(text: str, arena: Arena | None = None) -> FiniteStateStrategy:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from None

    def fail(key, message):
        raise ParseError(*_locate(text, f'"{key}"'), message)

    if not isinstance(doc, dict):
        raise ParseError(1, 1, "a strategy file holds one JSON object")
    for key in ("player", "vertices", "memory", "next_move"):
        if key not in doc:
            raise ParseError(1, 1, f"missing key '{key}'")
    names = doc["vertices"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        fail("vertices", "'vertices' must be a list of names")
    if doc["player"] not in (0, 1):
        fail("player", "'player' must be 0 or 1")
    if arena is not None and tuple(names) != arena.names:
        raise IncompatibleStrategy("the strategy was written for a different arena")
    index = {n: i for i, n in enumerate(names)}

    memory = doc["memory"]
    if not isinstance(memory, dict) or any(k not in memory for k in ("states", "init", "update")):
        fail("memory", "'memory' needs 'states', 'init' and 'update'")
    states = memory["states"]
    size = len(states) if isinstance(states, list) else 0
    if size == 0:
        fail("states", "'states' must be a nonempty list")

    def state_row(row, key):
        if not isinstance(row, dict) or set(row) != set(names):
            fail(key, f"'{key}' must map every vertex to a memory state")
        if not all(isinstance(row[n], int) and 0 <= row[n] < size for n in names):
            fail(key, f"'{key}' refers to a memory state outside 0..{size - 1}")
        return tuple(row[n] for n in names)

    init = state_row(memory["init"], "init")
    if not isinstance(memory["update"], list) or len(memory["update"]) != size:
        fail("update", "'update' needs one row per memory state")
    update = tuple(state_row(row, "update") for row in memory["update"])

    moves = doc["next_move"]
    if not isinstance(moves, list) or len(moves) != size:
        fail("next_move", "'next_move' needs one row per memory state")
    next_move = {}
    for m, row in enumerate(moves):
        if not isinstance(row, dict):
            fail("next_move", "'next_move' rows map vertices to successors")
        for source, target in row.items():
            if source not in index or target not in index:
                fail("next_move", f"unknown vertex in move {source} -> {target}")
            next_move[(index[source], m)] = index[target]

    sigma = FiniteStateStrategy(MemoryStructure(tuple(states), init, update), doc["player"], next_move)
    if arena is not None:
        check_strategy(arena, sigma)
    return sigma


def _quote(name):
    return '"' + name.replace('"', '\\"') + '"'


def export_dot(obj: Arena | RRGame | MeanPayoffGame) -> str:
    """Graphviz text; Player 1 vertices are boxes, Player 0 vertices circles."""
    weights = None
    annotations = {}
    if isinstance(obj, RRGame):
        arena = obj.arena
        for j, cond in enumerate(obj.conditions, start=1):
            for v in sorted(cond.request):
                annotations.setdefault(v, []).append(f"Q{j}")
            for v in sorted(cond.response):
                annotations.setdefault(v, []).append(f"P{j}")
    elif isinstance(obj, MeanPayoffGame):
        arena = obj.arena
        weights = obj.weights
    else:
        arena = obj

    lines = ["digraph G {"]
    for v in range(arena.size):
        attrs = ["shape=box" if arena.owner_of(v) == 1 else "shape=circle"]
        if v in annotations:
            label = arena.name_of(v) + "\\n" + " ".join(annotations[v])
            attrs.append(f"label={_quote(label)}")
        lines.append(f"  {_quote(arena.name_of(v))} [{', '.join(attrs)}];")
    for u, v in arena.edges:
        edge = f"  {_quote(arena.name_of(u))} -> {_quote(arena.name_of(v))}"
        if weights is not None:
            edge += f' [label="{weights[(u, v)]}"]'
        lines.append(edge + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"
