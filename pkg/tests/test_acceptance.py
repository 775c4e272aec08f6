import pytest

from conftest import ACCEPTANCE
from fanostab.acceptance import TITLES, run_all


@pytest.fixture(scope="session")
def results(request):
    got = {r.number: r for r in run_all(out=None)}
    request.config.stash[ACCEPTANCE] = [got[k] for k in sorted(got)]
    return got


@pytest.mark.parametrize("number", sorted(TITLES), ids=[f"criterion{k}" for k in sorted(TITLES)])
def test_criterion(results, number):
    r = results[number]
    print(r.line())
    assert r.passed, r.line()
