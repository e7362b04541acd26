import contextlib
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fundop.cli import main, parse_matrix, serialize_matrix
from fundop.errors import InputError

GOLDEN = Path(__file__).parent / "golden"
sys.path.insert(0, str(GOLDEN))
from cases import CASES  # noqa: E402


def run(argv, cwd=GOLDEN):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.chdir(cwd) if hasattr(contextlib, "chdir") else _chdir(cwd):
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(argv)
    return code, out.getvalue(), err.getvalue()


@contextlib.contextmanager
def _chdir(path):
    import os

    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    argv, expected_code = CASES[name]
    code, out, _ = run(argv)
    assert code == expected_code
    assert out == (GOLDEN / "expected" / f"{name}.json").read_text()


def test_exit_code_partition():
    codes = {code for _, code in CASES.values()}
    assert codes == {0, 1, 2}


def test_report_shape_and_pass_is_conjunction():
    code, out, _ = run(["extract", "gamma_S.json", "gamma_P.json"])
    rep = json.loads(out)
    assert set(rep) >= {"command", "inputs", "checks", "outputs", "pass"}
    assert rep["pass"] == all(c["pass"] for c in rep["checks"])
    assert all({"name", "residual", "tolerance", "pass"} <= set(c) for c in rep["checks"])
    f = parse_matrix(rep["outputs"]["F"])
    g = parse_matrix(rep["outputs"]["G"])
    y = 0.5 + 0.2j
    assert f[0, 0] == pytest.approx(np.conj(y)) and g[0, 0] == pytest.approx(y)


def test_analyze_values():
    rep = json.loads(run(["analyze", "J3.json"])[1])
    v = rep["values"]
    assert v["pure"] and v["defect_rank"] == 1 and v["defect_rank_adjoint"] == 1
    rep = json.loads(run(["analyze", "zero2.json"])[1])
    assert rep["values"]["defect_rank"] == 2
    rep = json.loads(run(["analyze", "unitary2.json"])[1])
    assert rep["values"]["unitary_part_dim"] == 2 and not rep["values"]["pure"]


def test_synthesize_outputs_closed_form():
    rep = json.loads(run(["synthesize", "gamma_P.json", "F.json", "G.json"])[1])
    s = parse_matrix(rep["outputs"]["S"])
    y = 0.5 + 0.2j
    j = np.diag(np.ones(2), -1)
    assert np.abs(s - (np.conj(y) * np.eye(3) + y * j)).max() <= 1e-12


def test_inadmissible_reports_first_failing_index():
    code, out, err = run(["synthesize", "gamma_P.json", "F.json", "G_bad.json"])
    assert code == 1
    assert json.loads(out)["values"]["first_failing_index"] == 3
    assert "coefficient 3" in err


def test_verify_suite_byte_identical_across_runs_and_workers():
    argv = ["verify-suite", "--seed", "42", "--cases", "10", "--dim-max", "4"]
    a = run(argv)[1]
    b = run(argv)[1]
    c = run(argv + ["--workers", "4"])[1]
    assert a == b == c


def test_console_entry_points():
    for cmd in (["fundop"], [sys.executable, "-m", "fundop"]):
        proc = subprocess.run(cmd + ["membership", "2", "0", "0", "0", "0", "0"], capture_output=True, text=True)
        assert proc.returncode == 1
        assert json.loads(proc.stdout)["values"]["member"] is False


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_matrix_round_trip_is_bit_exact(m, n, data):
    re = data.draw(st.lists(finite, min_size=m * n, max_size=m * n))
    im = data.draw(st.lists(finite, min_size=m * n, max_size=m * n))
    mat = (np.array(re) + 1j * np.array(im)).reshape(m, n)
    back = parse_matrix(json.loads(json.dumps(serialize_matrix(mat))))
    assert back.tobytes() == mat.tobytes()


@pytest.mark.parametrize(
    "obj",
    [
        {},
        {"rows": "x"},
        {"rows": []},
        {"rows": [[[1, 0]], [[1, 0], [2, 0]]]},
        {"rows": [[[1]]]},
        {"rows": [[["1", 0]]]},
        {"rows": [[[True, 0]]]},
        {"rows": [[[float("inf"), 0]]]},
    ],
)
def test_parse_rejects(obj):
    with pytest.raises(InputError):
        parse_matrix(obj)
