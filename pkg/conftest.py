"""Shared fixtures: the worked-example frames, seeded generators and light search settings."""

from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from src.golden import GOLDEN_EXAMPLES
from src.models import SearchConfig

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

FRAMES_DIR = Path(__file__).parent / "frames"


def _example(name):
    example = GOLDEN_EXAMPLES[name]
    return example.frame(), example.model()


@pytest.fixture
def split_axis():
    return _example("split-axis")


@pytest.fixture
def normalized_diagonal():
    return _example("normalized-diagonal")


@pytest.fixture
def unnormalized_diagonal():
    return _example("unnormalized-diagonal")


@pytest.fixture
def mercedes():
    return _example("mercedes")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def fast_search():
    return SearchConfig(max_iterations=5000, restarts=3, patience=500, seed=0)


@pytest.fixture
def frames_dir():
    return FRAMES_DIR
