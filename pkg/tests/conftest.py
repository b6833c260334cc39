"""Shared fixtures: small codes and designs, and a session-wide sample of extremal codes."""

from pathlib import Path

import numpy as np
import pytest

from qsdesign.construct import WalkConfig, sample_extremal_40, seed_code
from qsdesign.designs import bordered_code, load_design
from qsdesign.search import SearchConfig

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def e8():
    return seed_code("e8")


@pytest.fixture
def e8_file() -> Path:
    return FIXTURES / "e8.txt"


@pytest.fixture
def fano():
    return load_design(FIXTURES / "fano.design")


@pytest.fixture
def fano2():
    return load_design(FIXTURES / "fano2.design")


@pytest.fixture
def pairs4():
    return load_design(FIXTURES / "pairs4.design")


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture(scope="session")
def extremal_codes():
    """25 extremal [40,20,8] codes from one fixed-seed walk."""
    return sample_extremal_40(WalkConfig(seed=1, steps=200, max_restarts=5, count=25))


@pytest.fixture
def fano_search_config():
    """Block size 3, lines meeting in one point: the Fano plane is a 2-(7,3,1) fit."""
    return SearchConfig(
        clique_size=1,
        adjacent_intersection=1,
        compatible_intersections={1},
        candidate_weight=6,
        excluded_weight=4,
    )


@pytest.fixture
def bordered_fano(fano):
    """[A | 1 1 1] for the Fano plane; its weight-6 words through 8, 9, 10 are the lines."""
    return bordered_code(fano, 3)
