import contextlib
import io
import json
import shutil
import subprocess

import pytest

from golden_cases import CASES, golden_path
from ltphi import multivar as mv
from ltphi.cli import main
from ltphi.monodromy import Connection
from ltphi.padic import BaseFieldSpec


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name):
    code, text = run(CASES[name])
    assert code == 0
    assert text == golden_path(name).read_text(encoding="utf-8")


def test_tower_polynomial_example():
    code, text = run(["fg", "qk", "--p", "3", "--k", "1"])
    assert code == 0
    assert json.loads(text)["coeffs"] == {"0": "3", "2": "1"}


def test_deep_norm_example():
    assert run(["ring", "deep-norm", "--p", "3", "--n", "5", "--level", "2"]) == (0, "5/6 == 5/6: PASS\n")


def test_zero_connection_solution():
    code, text = run(["mono", "solve", "--p", "3", "--d", "2", "--deg", "3"])
    data = json.loads(text)
    assert code == 0
    assert data["defect_val"] == "+inf"
    H = data["H"]
    assert H[0][0] == [{"exp": [0, 0], "coeff": "(1,0)"}] and H[0][1] == []


def test_domain_error_is_json():
    code, text = run(["fg", "log", "--p", "4"])
    assert code == 1
    record = json.loads(text)
    assert set(record) == {"error", "message"}


def test_missing_input_file_is_domain_error(tmp_path):
    code, text = run(["multi", "antider", "--p", "3", "--in", str(tmp_path / "absent.json")])
    assert code == 1
    assert json.loads(text)["error"] == "FileNotFoundError"


def test_usage_errors():
    assert run(["fg", "nonsense"])[0] == 2
    assert run(["fg", "qk", "--p", "3"])[0] == 2
    assert run([])[0] == 2


def test_out_flag_and_input_file(tmp_path):
    spec = BaseFieldSpec.unramified(3, 2)
    x = mv.MultiElement.variable(spec, 0) * mv.MultiElement.variable(spec, 1) + mv.MultiElement.variable(spec, 1) ** 2
    src = tmp_path / "x.json"
    src.write_text(json.dumps(x.to_json()))
    dest = tmp_path / "parts.json"
    code, text = run(["multi", "decompose", "--p", "3", "--h", "2", "--in", str(src), "--out", str(dest)])
    assert code == 0 and text == ""
    data = json.loads(dest.read_text())
    assert data["routes_agree"]
    indices = [part["index"] for part in data["parts"]]
    assert [2] in indices and [1] in indices


def test_antiderivative_over_qp_is_domain_error(tmp_path):
    spec = BaseFieldSpec.qp(3)
    src = tmp_path / "one.json"
    src.write_text(json.dumps(mv.MultiElement.constant(spec, 1).to_json()))
    code, text = run(["multi", "antider", "--p", "3", "--in", str(src)])
    assert code == 1
    assert "requires F ≠ Q_p" in json.loads(text)["message"]


def test_connection_from_file(tmp_path):
    spec = BaseFieldSpec.unramified(3, 2)
    conn = Connection(spec, 1, {1: [[mv.MultiElement.variable(spec, 1)]]}, 6)
    src = tmp_path / "conn.json"
    src.write_text(json.dumps(conn.to_json()))
    code, text = run(["mono", "check", "--p", "3", "--h", "2", "--in", str(src)])
    assert code == 0 and json.loads(text)["flat"] is True
    code, text = run(["mono", "solve", "--p", "3", "--h", "2", "--in", str(src)])
    assert code == 0 and json.loads(text)["defect_zero"] is True


@pytest.mark.skipif(shutil.which("ltp") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ltp", "ring", "mahler", "--q", "3", "--n", "81", "--level", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["weight"] == 4
