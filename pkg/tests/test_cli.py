import json
import subprocess
import sys

import pytest

from waringlab.cli import main

M2 = "x0*(x0+x1)*(x0^2+x0*x2+x1*x2+x3^2+x4^2)"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_classify_macaulay2_example(capsys):
    code, out, _ = run(capsys, "classify", "-f", M2, "-n", "4")
    assert code == 0
    assert "rank q = 5" in out and "rank q|l0 = 4" in out and "rank q|l1 = 3" in out
    assert out.strip().endswith("tag: F9")


def test_classify_json(capsys):
    code, data = run_json(capsys, "classify", "-f", M2, "-n", "4")
    assert data["quadric_rank"] == 5 and data["restricted_ranks"] == [4, 3]
    assert data["tag"] == {"family": "F9", "n": 4}


def test_classify_needs_factored_input(capsys):
    code, _, err = run(capsys, "classify", "-f", "x0^3*x1+x0*x1*x2^2+x0*x1*x3^2")
    assert code == 3 and "factored" in err


def test_ann(capsys):
    code, data = run_json(capsys, "ann", "-f", "x0*x1*(x2^2+x3^2)", "-t", "2")
    assert code == 0 and data["pieces"][0]["dim_ann"] == 4 and data["concise"]


def test_rank_of_monomial(capsys):
    code, out, _ = run(capsys, "rank", "-f", "x0*x1*x2^2")
    assert code == 0 and out.startswith("rank = 6")


def test_rank_of_binary_form(capsys):
    code, data = run_json(capsys, "rank", "-f", "x0^3*(x0^2+x1^2)")
    assert data["lower"] == data["upper"] == 4


def test_bound_for_family_member(capsys):
    code, data = run_json(capsys, "bound", "-f", "x0*x1*(x1*x2+x3^2+x4^2)")
    assert data["lower"] == 12 and data["upper"] == 14


def test_bound_for_high_multiplicity(capsys):
    code, data = run_json(capsys, "bound", "-f", "x0^3*(x0*x1+x2^2+x3^2)")
    assert data["lower"] == data["upper"] == 4 * 3 + 1


def test_table(capsys):
    code, data = run_json(capsys, "table", "-n", "5")
    rows = {r["family"]: r for r in data}
    assert rows["F3"]["lower"] == 16 and rows["F9"]["upper"] == 18


def test_decompose_then_verify(tmp_path, capsys):
    out = tmp_path / "f4.json"
    code, _, _ = run(capsys, "decompose", "--family", "F4", "-n", "3", "--lambda", "2",
                     "--format", "json", "-o", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["points"]) == 8
    code, text, _ = run(capsys, "verify", "--file", str(out))
    assert code == 0 and text.startswith("verified")
    code, text, _ = run(capsys, "verify", "--file", str(out), "--partial")
    assert code == 0


def test_verify_rejects_wrong_form(tmp_path, capsys):
    out = tmp_path / "f4.json"
    run(capsys, "decompose", "--family", "F4", "-n", "3", "--format", "json", "-o", str(out))
    code, text, _ = run(capsys, "verify", "--file", str(out), "-f", "x0*x1*(x2^2+2*x3^2)")
    assert code == 1 and text.startswith("failed")


def test_decompose_binary(capsys):
    code, data = run_json(capsys, "decompose", "-f", "x0^3*x1")
    assert code == 0 and len(data["points"]) == 4


def test_falsify(capsys):
    code, data = run_json(capsys, "falsify", "--family", "F10", "-n", "3", "--lambda", "2", "--trials", "100")
    assert data["condition_a"]["status"] == "no-counterexample"
    assert data["condition_b"] == {"status": "holds"}


@pytest.mark.parametrize("argv,code", [
    (["rank", "-f", "x0 +* x1"], 2),
    (["classify", "-f", "x0*x1*(x0^2+x1^2)", "-n", "1"], 3),
    (["decompose", "--family", "F5"], 2),
    (["verify"], 2),
    (["ann", "-f", "x0^2", "-t", "5"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "waringlab", "table", "-n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "F10" in proc.stdout
