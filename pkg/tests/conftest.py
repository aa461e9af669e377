import pytest

from maxnorm import catalog


@pytest.fixture(scope="session")
def build_group():
    """Catalog builder that hands out one group object per name, so lattice caches are shared."""
    built = {}

    def _build(name: str):
        if name not in built:
            built[name] = catalog.build(name)
        return built[name]

    return _build
