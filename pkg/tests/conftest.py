import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from finsite import validate_category

SITES_DIR = Path(__file__).resolve().parent.parent / "sites"
THEORIES_DIR = Path(__file__).resolve().parent.parent / "theories"


@pytest.fixture
def terminal_cat():
    return validate_category({"objects": ["*"], "arrows": [], "compose": []})


@pytest.fixture
def arrow_cat():
    return validate_category({
        "objects": ["a", "b"],
        "arrows": [{"id": "f", "dom": "a", "cod": "b"}],
        "compose": [],
    })


@pytest.fixture
def discrete2_cat():
    return validate_category({"objects": ["a", "b"], "arrows": [], "compose": []})


@pytest.fixture
def c2_cat():
    return validate_category({
        "objects": ["*"],
        "arrows": [{"id": "s", "dom": "*", "cod": "*"}],
        "compose": [{"first": "s", "then": "s", "equals": "id:*"}],
    })


@pytest.fixture
def parallel_cat():
    # two parallel arrows a => b; presheaves on it are directed graphs
    return validate_category({
        "objects": ["a", "b"],
        "arrows": [
            {"id": "s", "dom": "a", "cod": "b"},
            {"id": "t", "dom": "a", "cod": "b"},
        ],
        "compose": [],
    })


@pytest.fixture
def cospan_cat():
    # a -> c <- b
    return validate_category({
        "objects": ["a", "b", "c"],
        "arrows": [
            {"id": "f", "dom": "a", "cod": "c"},
            {"id": "g", "dom": "b", "cod": "c"},
        ],
        "compose": [],
    })


@pytest.fixture
def chain3_cat():
    # a -> b -> c
    return validate_category({
        "objects": ["a", "b", "c"],
        "arrows": [
            {"id": "f", "dom": "a", "cod": "b"},
            {"id": "g", "dom": "b", "cod": "c"},
            {"id": "gf", "dom": "a", "cod": "c"},
        ],
        "compose": [{"first": "f", "then": "g", "equals": "gf"}],
    })
