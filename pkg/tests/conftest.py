import os
from pathlib import Path

import pytest

from admitcast.dataio import load_csv

REPO_ROOT = Path(__file__).resolve().parent.parent
BUNDLED_CSV = REPO_ROOT / "data" / "synthetic_admissions.csv"

# Criteria 1-3 are dataset-dependent; they run against the real export when
# ADMITCAST_REAL_DATA points at it, otherwise against the bundled sample.
REAL_DATA_ENV = "ADMITCAST_REAL_DATA"


def dataset_path() -> Path:
    override = os.environ.get(REAL_DATA_ENV)
    if override:
        return Path(override)
    return BUNDLED_CSV


@pytest.fixture(scope="session")
def admissions_series():
    return load_csv(dataset_path())


@pytest.fixture(scope="session")
def bundled_series():
    return load_csv(BUNDLED_CSV)
