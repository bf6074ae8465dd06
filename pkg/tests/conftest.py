import pytest

from sympreg.region import lobatto_elliptic_endpoint


@pytest.fixture(scope="session")
def lobatto_endpoints():
    """Elliptic endpoints of the Lobatto pairs, shared across test modules."""
    return {s: lobatto_elliptic_endpoint(s) for s in range(2, 11)}
