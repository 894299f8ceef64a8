from pathlib import Path

import numpy as np
import pytest

from rmae.gf2 import BitMatrix

GOLDEN = Path(__file__).parent / "golden"


def golden_matrix(name: str) -> BitMatrix:
    return BitMatrix.from_text((GOLDEN / f"{name}.txt").read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(20240816)
