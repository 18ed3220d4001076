import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import helpers  # noqa: E402


@pytest.fixture(scope="session")
def blob64():
    return helpers.blob_image()


@pytest.fixture(scope="session")
def disk_clean():
    return helpers.disk_fixture()


@pytest.fixture(scope="session")
def disk_noisy():
    return helpers.disk_fixture(noise_sd=25.0)
