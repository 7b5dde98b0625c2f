from pathlib import Path

import pytest

from rrsynth.formats import parse_game
from rrsynth.games import gen_builtin

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def fig1():
    return gen_builtin("fig1")


@pytest.fixture
def fig2():
    return gen_builtin("fig2")


@pytest.fixture
def blades4():
    return gen_builtin("blades", 4)


@pytest.fixture
def fig1_file():
    return parse_game((FIXTURES / "fig1.rrg").read_text())
