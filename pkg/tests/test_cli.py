import json
import subprocess
import sys
from pathlib import Path

import pytest

from fieldcarpet.cli import main

from conftest import GF361_HOLE_LIST, M2_P3_M1


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("method", ["recurrence", "tensor", "stream"])
def test_generate_nine_by_nine(capsys, method):
    code, out, _ = run(capsys, "generate", "--field", "3", "--m", "1", "--depth", "2", "--method", method)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "3 1 0,1 1 2"
    assert [[int(x) for x in line.split()] for line in lines[1:]] == M2_P3_M1


def test_methods_agree_over_extension(tmp_path):
    outputs = []
    for method in ("recurrence", "tensor", "stream"):
        path = tmp_path / f"{method}.txt"
        assert main(["generate", "--field", "19^2/1,0,1", "--m", "21", "--depth", "2",
                     "--method", method, "-o", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--field", "19^2/1,0,1")
    assert code == 0 and json.loads(out)["scan"] == GF361_HOLE_LIST


def test_classify_and_zeros(capsys):
    code, out, _ = run(capsys, "classify", "--field", "7", "--m", "3")
    data = json.loads(out)
    assert code == 0 and data["symmetry"]["label"] == "KLEIN_K4"
    code, out, _ = run(capsys, "zeros", "--field", "13", "--m", "1")
    data = json.loads(out)
    assert sorted(map(tuple, data["sporadic"])) == [(2, 2), (2, 10), (10, 2), (10, 10)]
    assert data["regular_rule"] == "cross" and data["edge_adjacent"] == []


def test_negative_m_is_negation(capsys):
    _, a, _ = run(capsys, "zeros", "--field", "7", "--m", "-2")
    _, b, _ = run(capsys, "zeros", "--field", "7", "--m", "5")
    assert json.loads(a)["zeros"] == json.loads(b)["zeros"]


def test_dimension(capsys):
    code, out, _ = run(capsys, "dimension", "--field", "3", "--m", "1")
    dim = json.loads(out)["dimension"]
    assert code == 0 and dim["count"] == 8


def test_tiles(capsys, tmp_path):
    code, out, _ = run(capsys, "tiles", "--field", "3", "--m", "1", "--assemble", "2")
    data = json.loads(out)
    assert code == 0 and len(data["tiles"]) == 29 == data["bound"] and data["ambiguous_cells"] == []
    rows = data["assembly"].splitlines()[1:]
    assert [[int(x) for x in r.split()] for r in rows] == M2_P3_M1
    code, _, err = run(capsys, "tiles", "--field", "2", "--m", "1")
    assert code == 2 and "no zeros" in err


def test_render(tmp_path):
    pbm = tmp_path / "c.pbm"
    assert main(["render", "--field", "3", "--m", "1", "--depth", "3", "-o", str(pbm)]) == 0
    assert pbm.read_bytes() == (Path(__file__).parent / "data" / "sierpinski_d3.pbm").read_bytes()
    ppm = tmp_path / "c.ppm"
    assert main(["render", "--field", "5", "--m", "1", "--depth", "2", "--format", "ppm",
                 "--symmetric", "-o", str(ppm)]) == 0
    assert ppm.read_bytes().startswith(b"P6\n25 25\n255\n") and len(ppm.read_bytes()) == 13 + 25 * 25 * 3


def test_exit_codes(capsys):
    assert run(capsys, "generate", "--field", "4", "--m", "1", "--depth", "1")[0] == 2
    assert run(capsys, "generate", "--field", "3", "--m", "9", "--depth", "1")[0] == 2
    assert run(capsys, "generate", "--field", "3", "--m", "1", "--depth", "0")[0] == 2
    code, _, err = run(capsys, "generate", "--field", "5", "--m", "1", "--depth", "8", "--method", "tensor")
    assert code == 3 and err
    assert run(capsys, "scan", "--field", "2^20")[0] == 3
    assert run(capsys, "render", "--field", "2", "--m", "1", "--depth", "13", "-o", "/dev/null")[0] == 3
    assert run(capsys, "verify", "--check", "nonsense")[0] == 2
    with pytest.raises(SystemExit):
        main(["generate", "--field", "3"])


def test_verify(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--check", "tensor", "--check", "delannoy", "--p", "5", "--dmax", "2",
                     "-o", str(out))
    data = json.loads(out.read_text())
    assert code == 0 and data["passed"] and [c["name"] for c in data["checks"]] == ["tensor", "delannoy"]
    first = out.read_bytes()
    run(capsys, "verify", "--check", "tensor", "--check", "delannoy", "--p", "5", "--dmax", "2", "-o", str(out))
    assert out.read_bytes() == first


def test_verify_reports_failure(capsys, monkeypatch):
    from fieldcarpet import verify

    def broken(bounds, rec):
        rec.case(False, reason="forced")

    monkeypatch.setitem(verify.CHECKS, "tensor", verify.Check("tensor", "forced failure", broken))
    code, out, _ = run(capsys, "verify", "--check", "tensor")
    data = json.loads(out)
    assert code == 1 and not data["passed"] and data["checks"][0]["counterexample"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fieldcarpet", "classify", "--field", "5", "--m", "0"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["symmetry"]["label"] == "PASCAL_S2"
