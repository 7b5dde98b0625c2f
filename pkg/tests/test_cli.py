import json

import pytest

from rrsynth.cli import main
from rrsynth.config import get_settings, load_settings
from rrsynth.errors import ConfigError
from rrsynth.formats import parse_game, parse_strategy
from rrsynth.games import gen_builtin


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dickson(capsys):
    code, out, _ = _run(capsys, "dickson", "2", "2", "--closed")
    assert code == 0
    assert "b(2,2) = 131" in out
    assert "closed form = 648" in out


def test_dickson_bad_parameters(capsys):
    code, _, err = _run(capsys, "dickson", "0", "1")
    assert code == 2
    assert err.startswith("error:")


def test_gen_writes_parseable_game(tmp_path, capsys):
    game_path = tmp_path / "blades.rrg"
    strategy_path = tmp_path / "sigma.json"
    code, _, _ = _run(
        capsys, "gen", "blades", "--k", "3", "-o", str(game_path), "--strategy-out", str(strategy_path)
    )
    assert code == 0
    game = parse_game(game_path.read_text())
    assert game == gen_builtin("blades", 3)
    assert parse_strategy(strategy_path.read_text(), game.arena).player == 0


def test_check_json(fixtures_dir, capsys):
    code, out, _ = _run(capsys, "check", str(fixtures_dir / "fig1.rrg"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert (doc["vertices"], doc["edges"], doc["conditions"]) == (8, 12, 2)
    assert doc["thresholds"] == ["210", "210"]


def test_value_of_alternating_lasso(fixtures_dir, capsys):
    code, out, _ = _run(
        capsys, "value", str(fixtures_dir / "fig1.rrg"), "--lasso", "q,r12,p;p1,e,q,r12,p,p2,e,q,r12,p"
    )
    assert code == 0
    assert out.strip() == "28/5"


def test_value_rejects_broken_lasso(capsys):
    code, _, _ = _run(capsys, "value", "builtin:fig1", "--lasso", "q,p")
    assert code == 2


def test_eval_stored_strategy(fixtures_dir, capsys):
    code, out, _ = _run(
        capsys,
        "eval",
        str(fixtures_dir / "fig1.rrg"),
        "--strategy",
        str(fixtures_dir / "fig1_alternating.json"),
        "--from",
        "q",
        "--json",
    )
    assert code == 0
    assert json.loads(out) == {"q": "28/5"}


def test_eval_right_loop_is_infinite(fixtures_dir, capsys):
    code, out, _ = _run(
        capsys,
        "eval",
        "builtin:fig2",
        "--strategy",
        str(fixtures_dir / "fig2_right_loop.json"),
        "--from",
        "v",
        "--json",
    )
    assert code == 0
    assert json.loads(out) == {"v": "inf"}


def test_solve_json(capsys):
    code, out, _ = _run(capsys, "solve", "builtin:fig1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["winning_region_0"]) == 8
    assert doc["winning_region_1"] == []


def test_dot_export(fixtures_dir, capsys):
    code, out, _ = _run(capsys, "dot", str(fixtures_dir / "fig1.rrg"))
    assert code == 0
    assert out.startswith("digraph")
    assert out.count("->") == 12


def test_play_against_script(fixtures_dir, capsys):
    code, out, _ = _run(
        capsys,
        "play",
        "builtin:fig1",
        "--strategy",
        str(fixtures_dir / "fig1_alternating.json"),
        "--from",
        "q",
        "--steps",
        "8",
        "--script",
        "r12,r12",
        "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["vertices"][:5] == ["q", "r12", "p", "p1", "e"]
    assert doc["penalties"][:3] == [0, 2, 4]


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.rrg"
    path.write_text("[vertices]\na 0\n[arcs]\n")
    code, _, err = _run(capsys, "check", str(path))
    assert code == 1
    assert "line 3" in err


def test_dead_end_exit_code(tmp_path, capsys):
    path = tmp_path / "dead.rrg"
    path.write_text("[vertices]\na 0\nb 0\n[edges]\na -> b\n")
    code, _, _ = _run(capsys, "check", str(path))
    assert code == 2


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = _run(capsys, "check", str(tmp_path / "nope.rrg"))
    assert code == 1


def test_oracle_budget_exit_code(capsys):
    code, _, _ = _run(capsys, "oracle", "builtin:fig1", "--cap", "7", "--budget", "1")
    assert code == 3


def test_bad_cap_exit_code(capsys):
    code, _, _ = _run(capsys, "optimal", "builtin:fig1", "--cap", "3=4")
    assert code == 2


def test_usage_error_exits_with_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 1


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("RRSYNTH_SOLVE_LIMIT", "1_000")
    monkeypatch.setenv("RRSYNTH_LOG_LEVEL", "debug")
    settings = load_settings()
    assert settings.solve_limit == 1000
    assert settings.log_level == "DEBUG"


def test_bad_setting_is_config_error(monkeypatch, capsys):
    monkeypatch.setenv("RRSYNTH_BUDGET", "lots")
    with pytest.raises(ConfigError):
        load_settings()
    get_settings.cache_clear()
    try:
        assert main(["dickson", "2", "1"]) == 2
    finally:
        monkeypatch.delenv("RRSYNTH_BUDGET")
        get_settings.cache_clear()


def test_optimal_json_records_provenance(capsys):
    code, out, _ = _run(capsys, "optimal", "builtin:fig1", "--cap", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["caps"] == [2, 2]
    assert doc["provenance"] == "user"
    assert doc["label"] == "optimal among cap-bounded strategies"
    assert set(doc["values"]) == {"q", "r1", "r2", "r12", "p", "p1", "p2", "e"}
    assert doc["mpg"]["max_weight"] == 5


def test_undecodable_game_file_is_parse_error(tmp_path, capsys):
    path = tmp_path / "latin1.rrg"
    path.write_bytes(b"[vertices]\nq\xff 0\n")
    code, _, err = _run(capsys, "check", str(path))
    assert code == 1
    assert "line 2, column 2" in err
    assert "UTF-8" in err


def test_utf8_vertex_names_are_read(tmp_path, capsys):
    path = tmp_path / "utf8.rrg"
    path.write_bytes("[vertices]\nqü 0\n[edges]\nqü -> qü\n".encode("utf-8"))
    code, out, _ = _run(capsys, "check", str(path), "--json")
    assert code == 0
    assert json.loads(out)["vertices"] == 1


def _interactive_play(fixtures_dir, capsys, steps):
    return _run(
        capsys,
        "play",
        "builtin:fig1",
        "--strategy",
        str(fixtures_dir / "fig1_alternating.json"),
        "--from",
        "q",
        "--steps",
        str(steps),
        "--interactive",
        "--json",
    )


def test_interactive_play_reads_moves(fixtures_dir, monkeypatch, capsys):
    answers = iter(["r9", "r2"])
    monkeypatch.setattr("builtins.input", lambda prompt: next(answers))
    code, out, _ = _interactive_play(fixtures_dir, capsys, 3)
    assert code == 0
    assert out.startswith("choose one of r1, r2, r12")
    assert json.loads(out[out.index("{"):])["vertices"] == ["q", "r2", "p"]


def test_interactive_play_stops_at_end_of_input(fixtures_dir, monkeypatch, capsys):
    def closed(prompt):
        raise EOFError

    monkeypatch.setattr("builtins.input", closed)
    code, _, err = _interactive_play(fixtures_dir, capsys, 5)
    assert code == 2
    assert "input ended" in err
