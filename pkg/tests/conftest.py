import json

import pytest

from frogfilter.config import load_config

TINY_DOC = {
    "problem": {
        "kind": "fir",
        "numerator_order": 6,
        "grid_points": 64,
        "target": {"type": "ideal", "band": "lowpass", "pass_edge": 0.25},
    },
    "engine": {"max_iterations": 30, "population": 12, "num_memeplexes": 3},
    "run": {"repetitions": 2, "base_seed": 0},
    "baseline": {},
    "quoted": {"fitness elsewhere": 0.98},
}


def write_config(tmp_path, doc=None, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc or TINY_DOC, indent=1))
    return path


@pytest.fixture
def tiny_config(tmp_path):
    return load_config(write_config(tmp_path))
