import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from curvatura import LocalQuadraticMap

ROOT = Path(__file__).resolve().parents[1]
SURFACES = ROOT / "surfaces"

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def frozen() -> dict:
    return json.loads((Path(__file__).parent / "oracles" / "frozen_values.json").read_text())


@pytest.fixture
def elliptic() -> LocalQuadraticMap:
    # phi = ((2s^2 + 4st + t^2/2)/2, (2s^2 - t^2/2)/2)
    return LocalQuadraticMap([2.0, 2.0], [2.0, 0.0], [0.5, -0.5])


@pytest.fixture
def r5_diag() -> LocalQuadraticMap:
    # Q1 = (s^2 - t^2)/2, Q2 = st, Q3 = (s^2 + t^2)/2
    return LocalQuadraticMap([1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 1.0])


@pytest.fixture
def zero_map():
    def make(codim: int) -> LocalQuadraticMap:
        return LocalQuadraticMap(np.zeros(codim), np.zeros(codim), np.zeros(codim))
    return make
