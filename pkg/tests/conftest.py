import pytest

from realdeligne import catalog


@pytest.fixture(scope="session")
def spaces():
    """Every catalog space, built once so per-cover caches are shared."""
    return {catalog.entry_label(e): e.build() for e in catalog.ENTRIES}


@pytest.fixture(scope="session")
def entries():
    return {catalog.entry_label(e): e for e in catalog.ENTRIES}
