import json

import pytest

from simptree.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_path_complex(tmp_path, capsys):
    f = write(tmp_path, "path.json", {"n": 4, "facets": [[1, 2], [2, 3], [3, 4]]})
    code, out, _ = run(capsys, "analyze-complex", f)
    rep = json.loads(out)
    assert code == 0
    assert rep["forest"] and rep["intersection"] and rep["reg"] == 2
    assert rep["version"] and rep["seed"] == 1 and rep["characteristic"] == 0 and "caps" in rep


def test_analyze_triangle(tmp_path, capsys):
    f = write(tmp_path, "tri.json", {"facets": [[1, 2], [2, 3], [1, 3]]})
    code, out, _ = run(capsys, "analyze-complex", f)
    assert code == 0 and json.loads(out)["forest"] is False


def test_nested_facets_rejected(tmp_path, capsys):
    f = write(tmp_path, "nest.json", {"facets": [[1, 2], [1, 2, 3]]})
    code, _, err = run(capsys, "analyze-complex", f)
    assert code == 2 and "nested" in err and "[1, 2]" in err


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"facets": [[1, 2],\n  oops]}')
    code, _, err = run(capsys, "analyze-complex", str(p))
    assert code == 2 and "line 2" in err


def test_analyze_perfect_tree(tmp_path, capsys):
    f = write(tmp_path, "bin.json", {"n": 7, "root": 0, "parent": [-1, 0, 0, 1, 1, 2, 2]})
    code, out, _ = run(capsys, "analyze-tree", f, "--t", "3")
    rep = json.loads(out)
    assert code == 0
    assert rep["closed_forms"]["perfect"] == rep["recursion"] == rep["oracle"] == 3


def test_analyze_tree_above_height(tmp_path, capsys):
    f = write(tmp_path, "bin.json", {"n": 3, "root": 0, "parent": [-1, 0, 0]})
    code, out, _ = run(capsys, "analyze-tree", f, "--t", "5")
    rep = json.loads(out)
    assert code == 0 and rep["generators"] == [] and rep["oracle"] == 0 == rep["recursion"]


def test_analyze_broom_tree(tmp_path, capsys):
    # every level of this broom is below h - t + 1, so the closed form holds
    f = write(tmp_path, "broom.json", {"n": 4, "root": 0, "parent": [-1, 0, 1, 1]})
    code, out, _ = run(capsys, "analyze-tree", f, "--t", "2")
    rep = json.loads(out)
    assert code == 0 and rep["closed_forms"]["broom"] == rep["oracle"]


def test_analyze_broom_counterexample_exits_one(tmp_path, capsys):
    f = write(tmp_path, "p5.json", {"n": 5, "root": 0, "parent": [-1, 0, 1, 2, 0]})
    code, out, _ = run(capsys, "analyze-tree", f, "--t", "2")
    rep = json.loads(out)
    assert code == 1 and rep["checks"]["broom_eq_oracle"] is False


def test_analyze_tree_needs_t(tmp_path, capsys):
    f = write(tmp_path, "bin.json", {"n": 3, "root": 0, "parent": [-1, 0, 0]})
    code, _, _ = run(capsys, "analyze-tree", f)
    assert code == 2


def test_bad_characteristic(tmp_path, capsys):
    f = write(tmp_path, "path.json", {"facets": [[1, 2]]})
    code, _, err = run(capsys, "analyze-complex", f, "--char", "6")
    assert code == 2 and "prime" in err


def test_verify_fixtures(capsys):
    code, out, _ = run(capsys, "verify", "fixtures", "--count", "5")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert [r["id"] for r in rep["records"] if r["part"] == "fixtures"] == list(range(6))


def test_verify_is_reproducible(capsys):
    args = ("verify", "recursionOracle", "--seed", "7", "--t", "2")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and "timings" not in a


def test_verify_jobs_matches_serial(capsys):
    args = ("verify", "theoremA", "--count", "12", "--seed", "3")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--jobs", "2")
    assert a == b


def test_verify_theoremA_small(capsys):
    code, _, _ = run(capsys, "verify", "theoremA", "--max-facets", "6", "--s", "2", "--count", "20")
    assert code == 0


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "broomFormula", "--t", "2", "--format", "tsv")
    assert code == 1 and "\tfail\t" in out


def test_verify_resource_exit_code(capsys):
    code, _, _ = run(capsys, "verify", "fixtures", "--max-lattice", "3", "--count", "1")
    assert code == 2


def test_conjecture_scan_single_input(tmp_path, capsys):
    f = write(tmp_path, "gap.json", {"facets": [[1, 2, 3], [3, 4, 5]]})
    code, out, _ = run(capsys, "conjecture-scan", f, "--s", "3", "--format", "tsv")
    rows = [ln for ln in out.splitlines() if ln and not ln.startswith("#") and not ln.startswith("id\t")]
    assert code == 0 and len(rows) == 3


def test_conjecture_scan_ip_mode_is_tight(capsys):
    code, out, _ = run(capsys, "conjecture-scan", "--mode", "ip", "--count", "15")
    rep = json.loads(out)
    assert code == 0
    assert all(row["slack"] == 0 for r in rep["records"] for row in r["rows"])


def test_tsv_truncates_and_json_does_not(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "fixtures", "--count", "2", "--out", str(out_path))
    rep = json.loads(out_path.read_text())
    assert code == 0 and not any("..." in json.dumps(r) for r in rep["records"])
    _, tsv, _ = run(capsys, "verify", "fixtures", "--count", "2", "--format", "tsv")
    assert any(ln.endswith("...") for ln in tsv.splitlines())


def test_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "nope"])
