import pytest


@pytest.fixture(scope="session")
def acceptance_results():
    """One full acceptance run shared by the per-criterion tests."""
    from tropcount.selftest import run

    lines = []
    results = run(echo=lines.append)
    return results, lines
