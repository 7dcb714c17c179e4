import json
from pathlib import Path

import pytest

from basiclab.core import PointSet

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "basiclab" / "schemas"

_acceptance = []


@pytest.fixture
def cycle4():
    """Corners of the unit square in cyclic order."""
    return PointSet(2, ((0, 0), (0, 1), (1, 1), (1, 0)))


@pytest.fixture
def tree3():
    return PointSet(2, ((0, 0), (0, 1), (1, 1)))


@pytest.fixture(scope="session")
def schema_validator():
    from jsonschema import Draft202012Validator
    from referencing import Registry, Resource

    docs = {p.name: json.loads(p.read_text()) for p in SCHEMA_DIR.glob("*.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc)) for name, doc in docs.items()
    )

    def validate(instance, name):
        Draft202012Validator(docs[f"{name}.json"], registry=registry).validate(instance)

    return validate


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    # parametrized cases of one criterion collapse into a single line
    merged = {}
    for name, outcome in _acceptance:
        key = name.split("[")[0]
        merged[key] = merged.get(key, True) and outcome == "passed"
    for key, ok in merged.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}")
