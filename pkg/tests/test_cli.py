import json

import pytest

from tensor_gorenstein.cli import main
from tensor_gorenstein.scenario import builtin, save_scenario


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_audit_json(capsys):
    code, out, _ = run(capsys, "audit", "--builtin", "paper-example-1",
                       "--checks", "nilpotency,thm3-sandwich", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["exit_code"] == 0
    assert [r["verdict"] for r in body["checks"]] == ["PASS", "PASS"]


def test_audit_is_reproducible(capsys):
    argv = ("audit", "--builtin", "paper-example-1", "--checks", "adjunction", "--seed", "3",
            "--format", "json")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_non_nilpotent_exits_3(capsys):
    code, out, _ = run(capsys, "audit", "--builtin", "dual-numbers-k")
    assert code == 3 and "INCONCLUSIVE" in out


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "audit", "--builtin", "no-such")[0] == 2
    assert run(capsys, "audit", "--scenario", str(tmp_path / "none.txt"))[0] == 2
    assert run(capsys, "audit")[0] == 2
    assert run(capsys, "audit", "--builtin", "formal-matrix-A2", "--checks", "thm9")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("[field]\nGF(2)\n[algebra]\nvertices: 2\na1: 1 -> 2\nrelations: a9\n"
                   "[bimodule]\nzero\n")
    code, _, err = run(capsys, "audit", "--scenario", str(bad))
    assert code == 2 and "line 6" in err


def test_scenario_file(capsys, tmp_path):
    path = tmp_path / "a2.json"
    save_scenario(builtin("formal-matrix-A2"), path)
    code, out, _ = run(capsys, "gorenstein", "--scenario", str(path), "--format", "json")
    body = json.loads(out)
    assert code == 0
    assert body["R"]["gdim"] == "Finite(0)" and body["T"]["gdim"] == "Finite(1)"


def test_tensor_ring(capsys):
    code, out, _ = run(capsys, "tensor-ring", "--builtin", "paper-example-1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["dim_T"] == 10 and body["grade_dims"] == [6, 4]


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--builtin", "paper-example-1", "--over", "T",
                       "--dim-cap", "1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["count"] == 4


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--module", "exact-linalg")
    assert code == 0 and out.strip().endswith("fixtures pass")


def test_bad_subcommand():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
