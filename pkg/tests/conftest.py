import pytest

from entropy_lab.acceptance import _lps_sample


@pytest.fixture(scope="session")
def lps_cache():
    """Shared spectrum cache so the dense eigensolves run once per session."""
    return {}


@pytest.fixture(scope="session")
def lps_r20(lps_cache):
    return _lps_sample(lps_cache, sigma=1.0, r=20.0, nodes=600)


@pytest.fixture(scope="session")
def lps_r10(lps_cache):
    return _lps_sample(lps_cache, sigma=1.0, r=10.0, nodes=300)


@pytest.fixture(scope="session")
def lps_r40(lps_cache):
    return _lps_sample(lps_cache, sigma=1.0, r=40.0, nodes=800)
