import json
from importlib import resources

import pytest

from dynspatial.geometry import ScenePair, gen_scene, load_scene
from dynspatial.scenarios import canonical_script, crossing_pair, entering_pair


def load_fixture(name: str) -> str:
    return resources.files("dynspatial.data").joinpath(name).read_text("utf-8")


@pytest.fixture(scope="session")
def canonical():
    return load_scene(load_fixture("canonical.json"))


def _pair(family, seed=3):
    import random

    a, b = family(random.Random(seed))
    return ScenePair(gen_scene(a), gen_scene(b), family.__name__)


@pytest.fixture(scope="session")
def crossing():
    return _pair(crossing_pair)


@pytest.fixture(scope="session")
def entering():
    return _pair(entering_pair)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed in the terminal summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(label: str, ok: bool, detail: str = ""):
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
