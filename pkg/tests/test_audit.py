import json

import pytest

from tensor_gorenstein.audit import (CHECKS, FAIL, INCONCLUSIVE, PASS, AuditReport, CheckResult,
                                     combine, emit_report, module_data, run_audit)
from tensor_gorenstein.enumeration import enumerate_modules
from tensor_gorenstein.modcat import Module, is_isomorphic
from tensor_gorenstein.scenario import ALL_CHECKS, builtin
from tensor_gorenstein.selftest import three_cycle

FAST = ["nilpotency", "perfectness", "gorenstein-R", "gorenstein-T", "thm3-sandwich",
        "cor1-sandwich", "ind-dual", "adjunction", "standard-sequence"]


def _report(*verdicts):
    r = AuditReport("synthetic", "GF(2)", 0)
    r.results = [CheckResult(f"c{i}", v, {}) for i, v in enumerate(verdicts)]
    return r


@pytest.mark.parametrize("verdicts, code", [
    ((), 0), ((PASS, PASS), 0), ((PASS, INCONCLUSIVE), 3), ((FAIL, INCONCLUSIVE), 1),
    ((INCONCLUSIVE, FAIL, PASS), 1),
])
def test_exit_codes(verdicts, code):
    r = _report(*verdicts)
    assert r.exit_code == code
    assert emit_report(r, "json")[1] == code


def test_combine():
    assert combine([_report(PASS), _report(INCONCLUSIVE)]) == 3
    assert combine([_report(INCONCLUSIVE), _report(FAIL)]) == 1
    assert combine([_report(PASS), _report()]) == 0


def test_check_registry_matches_scenario_checks():
    assert sorted(CHECKS) == sorted(ALL_CHECKS)


def test_json_is_byte_identical_for_same_seed():
    s = builtin("paper-example-1").with_overrides(seed=11, checks=FAST)
    a, code_a = emit_report(run_audit(s), "json")
    b, code_b = emit_report(run_audit(s), "json")
    assert a == b and code_a == code_b == 0
    body = json.loads(a)
    assert body["schema_version"] == 1 and "elapsed" not in a.decode()
    assert [r["name"] for r in body["checks"]] == sorted(FAST)


def test_checks_draw_independent_samples():
    s = builtin("paper-example-1").with_overrides(seed=5)
    alone = run_audit(s, ["adjunction"]).result("adjunction").evidence
    together = run_audit(s, ["adjunction", "standard-sequence"]).result("adjunction").evidence
    assert alone == together


def test_example_verdicts():
    r = run_audit(builtin("paper-example-1"), FAST)
    assert r.exit_code == 0
    assert r.result("nilpotency").evidence == {"N": 1, "dim_M": 4, "grade_dims": [6, 4],
                                               "dim_T": 10}
    assert r.result("thm3-sandwich").evidence["sandwich"] == "0 <= 1 <= 1"
    with pytest.raises(KeyError):
        r.result("thm2-equality")


def test_non_nilpotent_is_inconclusive():
    r = run_audit(builtin("dual-numbers-k"))
    assert r.exit_code == 3
    nil = r.result("nilpotency")
    assert nil.verdict == INCONCLUSIVE and nil.evidence["nilpotency"] == "NotNilpotentUpTo(16)"
    assert r.result("gorenstein-R").verdict == PASS
    assert FAIL not in {x.verdict for x in r.results}


def test_unknown_check():
    with pytest.raises(KeyError):
        run_audit(builtin("formal-matrix-A2"), ["thm9"])


def test_text_report_lines():
    out = emit_report(run_audit(builtin("formal-matrix-A2"), ["nilpotency"]), "text",
                      timings=False)[0].decode()
    assert out.splitlines()[1].startswith("PASS") and out.endswith("exit 0\n")
    with pytest.raises(ValueError):
        emit_report(_report(), "yaml")


def test_module_data_rebuilds_witness():
    a = three_cycle()
    for x in enumerate_modules(a, 3):
        d = module_data(x)
        stack = a.field.array(d["actions"]).reshape(x.stack.shape)
        rebuilt = Module(a, d["side"], stack)
        assert is_isomorphic(rebuilt, x).verdict == "yes"
        assert d["dimension_vector"] == list(x.dimension_vector)
