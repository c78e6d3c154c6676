import numpy as np
import pytest

from ising_teleport.ising import CouplingConfig

FIXTURES = None  # resolved lazily so the tests run from any cwd


def fixtures_dir():
    from pathlib import Path

    return Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_config(rng, h=None, span=5.0):
    h = int(rng.integers(1, 4)) if h is None else h
    J = rng.uniform(-span, span, 3)
    b1, b2 = rng.uniform(-span, span, 2)
    return CouplingConfig.with_fields(J, h, b1, b2)
