from __future__ import annotations

import io
import json

import pytest

from foldopt.cli import run_cli

PETERSEN = """graph 10 sym
o0 o1 o2 o3 o4 i0 i1 i2 i3 i4
o0 o1 1
o1 o2 1
o2 o3 1
o3 o4 1
o4 o0 1
o0 i0 1
o1 i1 1
o2 i2 1
o3 i3 1
o4 i4 1
i0 i2 1
i2 i4 1
i4 i1 1
i1 i3 1
i3 i0 1
"""
PATH = "graph 3\ns a t\ns a 1\na t 1\n"
BOX = "lp 2 4\nx y\n1 0 <= 1\n0 1 <= 1\n-1 0 <= 0\n0 -1 <= 0\nmax 1 1\n"


def run(tmp_path, name, text, *args):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([args[0], str(path), *args[1:]], out, err)
    return code, out.getvalue(), err.getvalue()


def test_matching_petersen(tmp_path):
    code, out, _ = run(tmp_path, "petersen.graph", PETERSEN, "matching")
    assert code == 0
    assert out.splitlines() == ["max_matching_value = 5", "perfect = true"]


def test_mincut_path(tmp_path):
    code, out, _ = run(tmp_path, "g.graph", PATH, "mincut", "--source", "s", "--sink", "t")
    assert code == 0
    assert out.splitlines() == ["cut = {s}", "value = 1"]


@pytest.mark.parametrize("backend", ["opt", "lp"])
def test_optimize_box(tmp_path, backend):
    code, out, _ = run(tmp_path, "box.lp", BOX, "optimize", "--backend", backend)
    assert code == 0
    assert out.splitlines() == ["optimal value = 2", "point: x = 1, y = 1"]


def test_maxflow_lists_flow(tmp_path):
    code, out, _ = run(tmp_path, "g.graph", PATH, "maxflow", "-s", "s", "-t", "t", "--backend", "aug")
    assert code == 0
    assert out.splitlines() == ["value = 1", "flow s -> a = 1", "flow a -> t = 1"]


def test_oddcut_and_parity_error(tmp_path):
    text = "graph 4 sym\na b c d\na b 1\nb c 1\nc d 1\nd a 1\nmarked a b c d\n"
    code, out, _ = run(tmp_path, "c4.graph", text, "oddcut")
    assert code == 0 and out.splitlines()[-1] == "value = 2"
    code, out, _ = run(tmp_path, "odd.graph", text.replace("marked a b c d", "marked a b c"), "oddcut")
    assert code == 1 and "marking parity" in out


def test_infeasible_lp_exit_code(tmp_path):
    text = "lp 1 2\nx\n1 <= 0\n-1 <= -1\nmax 1\n"
    code, out, _ = run(tmp_path, "empty.lp", text, "optimize")
    assert code == 1 and out.strip() == "infeasible: the polytope is empty"


def test_unbounded_lp(tmp_path):
    code, out, _ = run(tmp_path, "ray.lp", "lp 1 1\nx\n-1 <= 0\nmax 1\n", "optimize")
    assert code == 0 and out.strip() == "unbounded"


def test_malformed_input_exit_code(tmp_path):
    code, out, err = run(tmp_path, "bad.lp", "lp 2 1\nx y\n1 1 1\nmax 1 1\n", "optimize")
    assert code == 2 and out == ""
    assert "bad.lp: line 3:" in err


def test_missing_file_and_unknown_terminal(tmp_path):
    out, err = io.StringIO(), io.StringIO()
    assert run_cli(["optimize", str(tmp_path / "nope.lp")], out, err) == 2
    code, _, err_text = run(tmp_path, "g.graph", PATH, "mincut", "-s", "s", "-t", "q")
    assert code == 2 and "'q' is not a vertex" in err_text


def test_json_schema(tmp_path):
    code, out, _ = run(tmp_path, "box.lp", BOX, "optimize", "--json", "--trace")
    data = json.loads(out)
    assert code == 0
    assert data["outcome"] == "optimal" and data["value"] == "2"
    assert data["point"] == {"x": "1", "y": "1"}
    assert all(set(item) == {"iteration", "event", "classes"} for item in data["trace"])
    code, out, _ = run(tmp_path, "g.graph", PATH, "mincut", "-s", "s", "-t", "t", "--json")
    assert json.loads(out) == {"outcome": "optimal", "cut": ["s"], "value": "1"}


def test_approx_flag_keeps_exact_value(tmp_path):
    lp = "lp 1 1\nx\n3 <= 1\nmax 1\n"
    code, out, _ = run(tmp_path, "third.lp", lp, "optimize", "--approx")
    assert out.splitlines()[0] == "optimal value = 1/3  (approx 0.333333)"


def test_trace_lines(tmp_path):
    code, out, _ = run(tmp_path, "box.lp", BOX, "optimize", "--trace")
    lines = out.splitlines()
    assert lines[0].startswith("trace 1 ")
    assert lines[-2] == "optimal value = 2"
