"""The nine acceptance criteria at their stated tolerances; one PASS/FAIL line each."""
import pytest

from minrep import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    result = acceptance.CRITERIA[number]()
    print("\n" + result.line())
    assert result.passed, result.to_json()["details"]
