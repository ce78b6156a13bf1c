import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / f"{name}.json"


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))


def pytest_configure(config):
    sys.path.insert(0, str(Path(__file__).resolve().parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
