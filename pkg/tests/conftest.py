import os
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]


def diamonds_csv_path():
    """User-supplied 537-row diamonds subset, if present."""
    env = os.environ.get("ORDSCORE_DIAMONDS_CSV")
    candidates = [Path(env)] if env else []
    candidates.append(REPO_ROOT / "data" / "diamonds537.csv")
    for candidate in candidates:
        if candidate.exists():
            return candidate
    return None


@pytest.fixture
def diamonds_csv():
    path = diamonds_csv_path()
    if path is None:
        pytest.skip(
            "diamonds subset CSV not provided "
            "(set ORDSCORE_DIAMONDS_CSV or add data/diamonds537.csv)"
        )
    return path
