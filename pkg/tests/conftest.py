import pytest

from superjets import config
from superjets.superalg import Algebra, even, odd


@pytest.fixture
def mixed_algebra():
    """Two even and two odd generators of degree 0 and 1"""
    return Algebra((even("x"), even("y"), odd("theta"), odd("eta")))


@pytest.fixture
def history_file(tmp_path, monkeypatch):
    path = tmp_path / "reports.json"
    monkeypatch.setattr(config, "HISTORY_FILE", str(path))
    monkeypatch.setattr(config, "DATA_DIR", str(tmp_path))
    return path
