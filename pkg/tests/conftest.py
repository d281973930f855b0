import pytest

from tmlg.graph import Theory


@pytest.fixture
def theory1() -> Theory:
    """Three vertices, one loop, one chain a -> b -> c."""
    return Theory("G", ("a", "b", "c"),
                  {"f": ("a", "b"), "e": ("a", "a"), "g": ("b", "c")})


@pytest.fixture
def loop_theory() -> Theory:
    return Theory("G", ("a", "b"), {"e": ("a", "a"), "f": ("a", "b")})
