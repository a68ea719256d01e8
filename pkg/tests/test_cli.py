"""CLI behaviour and golden output.

Golden files live in fixtures/golden; regenerate with
``UPDATE_GOLDEN=1 pytest tests/test_cli.py`` and review the diff.
"""

import io
import json
import os
import subprocess
import sys

import pytest

from hfktorsion.cli import main, read_table_csv, render_table

from conftest import FIXTURES

GOLDEN = FIXTURES / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


GOLDEN_CASES = {
    "knot_t34": ["knot", "T(3,4)"],
    "knot_unknot": ["knot", "U"],
    "knot_sum_bigraded": ["knot", "T(2,3) # m(T(2,3))", "--bigraded"],
    "knot_t56_json": ["knot", "T(5,6)", "--format", "json-lines"],
    "knot_t34_md": ["knot", "T(3,4)", "--format", "md"],
    "dist_t23_t45": ["dist", "T(2,3)", "T(4,5)"],
    "dist_sum_unknot": ["dist", "T(3,5) # m(T(3,5))", "U"],
    "check_cobordism": ["check", "cobordism", "--ord0", "5", "--ord1", "0", "-M", "1", "-g", "0"],
    "check_movie": ["check", "movie", "-m", "0", "-b", "0", "-M", "0", "-g", "0"],
    "check_ribbon": ["check", "ribbon-concordance", "--ord0", "1", "--ord1", "3", "-b", "5"],
    "table_torus_6_text": ["table", "torus", "--max", "6"],
    "table_torus_6_md": ["table", "torus", "--max", "6", "--format", "md"],
    "table_torus_6_csv": ["table", "torus", "--max", "6", "--format", "csv"],
    "table_torus_6_jsonl": ["table", "torus", "--max", "6", "--format", "json-lines"],
    "table_ingest_mixed": ["table", "ingest", str(FIXTURES / "mixed.csv")],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    code, out, err = run(*GOLDEN_CASES[name])
    path = GOLDEN / f"{name}.txt"
    text = f"exit: {code}\n{out}".replace(str(FIXTURES), "<fixtures>")
    if os.environ.get("UPDATE_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8")


def test_knot_examples():
    code, out, _ = run("knot", "T(3,4)")
    assert code == 0
    assert "ord_v: 2\n" in out and "bridge >= 3" in out
    code, out, _ = run("knot", "U")
    assert code == 0 and "ord_v: 0\n" in out


def test_knot_bigraded_sum():
    code, out, _ = run("knot", "T(2,3) # m(T(2,3))", "--bigraded")
    assert code == 0
    assert "c_ord_v: 1\n" in out
    assert "chain interval: [1, 1] exact\n" in out


def test_knot_graded_distance_flag():
    _, out, _ = run("knot", "T(3,4)", "--graded-distance")
    assert "d_t(K, U), graded: 2\n" in out


def test_knot_json_is_parseable():
    _, out, _ = run("knot", "T(2,3) # m(T(2,3))", "--bigraded", "--format", "json-lines")
    doc = json.loads(out)
    assert doc["ord_v"] == 1 and doc["chain"] == {"lo": 1, "hi": 1, "exact": True}


def test_parse_error_has_caret_and_exit_1():
    code, out, err = run("knot", "T(2,3) # m(T(2,3)")
    assert code == 1 and out == ""
    lines = err.splitlines()
    assert lines[0].startswith("error: expected )")
    assert lines[2] == "  " + " " * len("T(2,3) # m(T(2,3)") + "^"


def test_bad_torus_is_a_parse_error():
    code, _, err = run("knot", "T(4,6)")
    assert code == 1 and "not coprime" in err


def test_missing_file_leaf():
    code, _, err = run("knot", "file:/nonexistent/x.json")
    assert code == 1 and err.startswith("error:")


def test_file_leaf_with_base_dir():
    code, out, _ = run("knot", "file:trefoil_bigraded.json", "--base-dir", str(FIXTURES))
    assert code == 0 and "ord_v: 1" in out


def test_dist_infinite_rendering(tmp_path):
    doc = {"kind": "graded", "generators": [{"name": "a", "alexander": 0}, {"name": "b", "alexander": 0}],
           "arrows": []}
    (tmp_path / "two.json").write_text(json.dumps(doc))
    code, out, _ = run("dist", "file:two.json", "U", "--base-dir", str(tmp_path))
    assert code == 0 and "ribbon distance >= inf" in out


def test_dist_unknots():
    _, out, _ = run("dist", "U", "U")
    assert "refined cobordism distance >= 0" in out and "ribbon distance >= 0" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "cobordism", "--ord0", "1"],
        ["check", "movie", "-m", "0", "-M", "0"],
        ["check", "cobordism", "--ord0", "-1", "--ord1", "0", "-M", "0", "-g", "0"],
        ["check", "teleport"],
        ["table", "ingest"],
        ["table", "torus"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert "usage:" in err


def test_movie_euler_mismatch_exit_1():
    code, _, err = run("check", "movie", "-m", "1", "-b", "1", "-M", "1", "-g", "1")
    assert code == 1 and "2g != b - m - M" in err


def test_ribbon_cobordism_check():
    code, out, _ = run("check", "ribbon-cobordism", "--ord0", "5", "--ord1", "1", "-g", "1")
    assert code == 2 and out.startswith("obstructed")


def test_table_ingest_published_table():
    code, out, _ = run("table", "ingest", str(FIXTURES / "table1.csv"))
    assert code == 0
    assert out.strip().endswith("summary: 105 rows, 105 pass, 0 fail, 0 errors")


def test_table_ingest_empty_file():
    code, out, _ = run("table", "ingest", str(FIXTURES / "empty.csv"))
    assert code == 0
    assert out == "name  ord_v  bridge  verdict\nsummary: 0 rows, 0 pass, 0 fail, 0 errors\n"


def test_table_ingest_failures_exit_2():
    code, out, _ = run("table", "ingest", str(FIXTURES / "mixed.csv"))
    assert code == 2
    assert "errors:" in out and "too_big" in out


def test_read_table_csv_header_check():
    rows, errors = read_table_csv("knot,order\nx,1\n")
    assert rows == [] and errors and "header" in errors[0]
    rows, errors = read_table_csv("name,ord_v,bridge\n4_1,1,\n")
    assert rows[0].bridge is None and rows[0].verdict == "n/a" and not errors


def test_torus_table_rows():
    code, out, _ = run("table", "torus", "--max", "6", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [(int(p), int(q), int(k)) for p, q, k, *_ in rows] == [
        (2, 3, 1), (2, 5, 1), (3, 4, 2), (3, 5, 2), (4, 5, 3), (5, 6, 4)
    ]


def test_render_table_alignment():
    assert render_table(("a", "bb"), [(1, None), (22, True)], "text") == "a   bb\n1\n22  yes\n"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hfktorsion.cli", "knot", "T(2,3)"], capture_output=True, text=True)
    assert proc.returncode == 0 and "ord_v: 1" in proc.stdout


def test_help_exits_zero():
    code, _, _ = run("--help")
    assert code == 0
