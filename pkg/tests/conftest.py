import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from discotec import Ensemble  # noqa: E402

# the worked 4-point, 3-model ensemble used throughout
PI1 = [0, 0, 1, 1]
PI3 = [0, 1, 0, 1]


@pytest.fixture
def fixture_ensemble():
    return Ensemble([PI1, PI1, PI3])


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "partitions.csv"
    path.write_text("model_0,model_1,model_2\n0,0,0\n0,0,1\n1,1,0\n1,1,1\n")
    return path
