import pytest

from tensor_gorenstein.selftest import FIXTURES, run_selftest


@pytest.mark.parametrize("module, name", [(m, n) for m, n, _ in FIXTURES],
                         ids=[f"{m}:{n}" for m, n, _ in FIXTURES])
def test_fixture(module, name):
    [result] = run_selftest(names=[name])
    assert result.ok, result.detail


def test_every_module_has_fixtures():
    assert {m for m, _, _ in FIXTURES} >= {"exact-linalg", "algebra-core", "module-cat",
                                            "tensor-ring", "gorenstein", "verify-cli"}
