import pytest

from wpcurv.wp_tensor import compute_block


@pytest.fixture(scope="session")
def cache3():
    cache, _ = compute_block(3)
    return cache


@pytest.fixture(scope="session")
def cache4():
    cache, _ = compute_block(4)
    return cache


@pytest.fixture(scope="session")
def cache8():
    cache, _ = compute_block(8)
    return cache
