import json
import sys

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def write_spec(tmp_path):
    """Write a problem-spec dict to tmp_path and return its path."""

    def _write(doc, name=None):
        name = name or doc.get("name", "spec")
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        return path

    return _write


@pytest.fixture
def inverter_doc():
    return {
        "schema_version": 1,
        "name": "inv2",
        "inputs": [
            {"name": "Leff", "family": "normal", "params": {"mean": 0.18, "std": 0.036}, "truncation": 3},
            {"name": "Tox", "family": "normal", "params": {"mean": 4.0, "std": 0.4}, "truncation": 3},
        ],
        "model": {"kind": "inverter", "params": {"d0": 65.1}, "binding": {"Leff": "L", "Tox": "Tox"}},
        "degree": 2,
        "seed": 3,
        "mc": {"sample_count": 2000},
    }


@pytest.fixture
def python_exe():
    return sys.executable


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
