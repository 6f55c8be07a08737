import pytest

from akhodge import catalog


@pytest.fixture(scope="session")
def entries():
    return {key: catalog.get(key) for key in catalog.keys()}


@pytest.fixture(scope="session")
def cc_entries(entries):
    """Constant-coefficient unitary entries (theorem-mode catalog)."""
    return {k: e for k, e in entries.items()
            if e.spec.constant_coefficient and
            e.spec.unitary_scale is not None}
