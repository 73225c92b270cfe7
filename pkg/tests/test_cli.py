import json

import numpy as np
import pytest

from latpack.cli import main, packing_translations
from latpack.io import parse_off


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "tetrahedron" in out and "18/49" in out


def test_solve_cube(capsys):
    code, rep, err = run_json(capsys, "solve", "--solid", "cube", "--threads", "1", "--verify-exact")
    assert code == 0
    assert rep["density"] == pytest.approx(1.0)
    assert rep["reference_density"] == 1.0
    assert rep["exact"]["ok"] and rep["exact"]["density"] == "1/1"
    assert rep["verified"] and "warnings" not in rep
    assert len(rep["basis"]) == 3
    assert set(rep["counts"]) >= {"selections_enumerated", "pruned_by_G", "pruned_by_S0"}


def test_partial_cases_warn(capsys):
    code, rep, err = run_json(capsys, "solve", "--solid", "cube", "--case", "I,II", "--threads", "1")
    assert code == 0
    assert rep["cases_searched"] == ["I", "II"]
    assert "partial-cases" in err and rep["warnings"]


def test_input_file_and_outputs(tmp_path, capsys):
    h = tmp_path / "box.txt"
    h.write_text("1 0 0 1\n-1 0 0 1\n0 1 0 2\n0 -1 0 2\n0 0 1 1\n0 0 -1 1\n")
    out, pack = tmp_path / "r.json", tmp_path / "pack.off"
    code = main(["solve", "--input", str(h), "--threads", "1", "-o", str(out),
                 "--emit-packing", str(pack), "--shells", "1"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["density"] == pytest.approx(1.0)
    assert "reference_density" not in rep
    V, faces = parse_off(pack.read_text())
    assert len(V) == 27 * 8


@pytest.mark.parametrize("argv", [
    ["solve", "--solid", "hypercube"],
    ["solve", "--solid", "cube", "--case", "V"],
    ["solve", "--solid", "cube", "--threads", "0"],
    ["solve", "--solid", "cube", "--shells", "-1"],
    ["solve"],
    ["solve", "--input", "/nonexistent/file.off"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_degenerate_input_exit_2(tmp_path, capsys):
    f = tmp_path / "flat.off"
    f.write_text("OFF\n4 0 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n")
    assert main(["solve", "--input", str(f)]) == 2
    assert "input error" in capsys.readouterr().err


def test_packing_translations():
    T = packing_translations(np.eye(3) * 2, 1)
    assert T.shape == (27, 3)
    assert np.abs(T).max() == 2
