"""Shared fixtures."""

import json

import pytest

from tests.helpers import SATURATED, ltr_instance


@pytest.fixture
def e1_instance():
    """Three period-2 streams on four switches; loads (2, 2, 2)."""
    return ltr_instance(4, [(1, 4, 2), (1, 2, 2), (2, 4, 2)])


@pytest.fixture
def overloaded_instance():
    """Infeasible at link 2: load 4 against capacity 2."""
    return ltr_instance(4, [(1, 4, 2), (1, 3, 2), (2, 4, 1)])


@pytest.fixture
def saturated_instance():
    return ltr_instance(*SATURATED)


@pytest.fixture
def empty_instance():
    return ltr_instance(4, [])


@pytest.fixture
def e1_document():
    return {
        "switches": 4,
        "streams": [
            {"id": "s1", "src_switch": 1, "dst_switch": 4, "period": 2},
            {"id": "s2", "src_switch": 1, "dst_switch": 2, "period": 2},
            {"id": "s3", "src_switch": 2, "dst_switch": 4, "period": 2},
        ],
    }


@pytest.fixture
def write_json(tmp_path):
    """Write a document under tmp_path and return its path as a string."""

    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return _write
