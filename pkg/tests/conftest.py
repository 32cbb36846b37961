"""Pytest configuration and fixtures for ppres tests."""

import logging
import os

import pytest

# Set test environment variables before importing app modules
os.environ.setdefault("PPRES_THREADS", "1")
os.environ.setdefault("PPRES_T_MIN", "0")
os.environ.setdefault("PPRES_T_MAX", "4")
os.environ.setdefault("PPRES_BOX_RADIUS", "5")
os.environ.setdefault("PPRES_WINDOW_MULTIPLIER", "10")
os.environ.setdefault("PPRES_SIMPLIFY_EXPANSION_LIMIT", "4")
os.environ.setdefault("PPRES_QFREE_EXPANSION_LIMIT", "1000000")
os.environ.setdefault("PPRES_LOG_LEVEL", "WARNING")
os.environ.setdefault("PPRES_LOG_FORMAT", "json")

from app.logic.formula import VarId  # noqa: E402
from app.logic.parser import parse  # noqa: E402


@pytest.fixture(autouse=True)
def restore_app_logger():
    """Undo configure_logging so caplog keeps seeing `app.*` records."""
    yield
    root = logging.getLogger("app")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.propagate = True
    root.setLevel(logging.NOTSET)


@pytest.fixture
def x():
    return VarId("x")


@pytest.fixture
def y():
    return VarId("y")


@pytest.fixture
def intervals_text():
    """Union of [2ti, 2ti + t] over 0 <= i <= t - 1."""
    return "Eb i <= t - 1 . (2t)*i <= x /\\ x <= (2t)*i + t"


@pytest.fixture
def intervals(intervals_text):
    return parse(intervals_text)


@pytest.fixture
def cooper_example_text():
    return "E x. 2*x <= a1 /\\ D[5](3*x - a2)"


@pytest.fixture
def formula_file(tmp_path):
    """Write formula text to a file and return its path."""

    def write(text: str, name: str = "input.pp") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
