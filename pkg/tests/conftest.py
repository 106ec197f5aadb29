import pytest


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    """Node tables go to a per-session temporary directory."""
    monkeypatch.setenv("MINREP_CACHE", str(tmp_path_factory.getbasetemp() / "cache"))
