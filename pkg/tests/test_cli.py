import json
import subprocess
import sys

import pytest

from hyperuni.cli import main


@pytest.fixture
def tree_file(tmp_path):
    f = tmp_path / "space.json"
    assert main(["generate", "--kind", "tree", "--b", "2", "--depth", "8", "-o", str(f)]) == 0
    return f


def test_generate_verify_round(tree_file, tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "-i", str(tree_file), "--ray", "spineL", "--basepoint", "root",
                 "--h", "0.0714", "--auto-epsilon", "-o", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert set(report) >= {"space", "ledger", "checks"}
    assert {"name", "holds", "theory_bound", "empirical_worst", "witness", "slack_used"} <= set(report["checks"][0])


def test_verify_is_byte_identical(tree_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert main(["verify", "-i", str(tree_file), "--ray", "spineR", "--seed", "7", "-o", str(f)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_failure_exit_code(tmp_path):
    f = tmp_path / "grid.json"
    main(["generate", "--kind", "grid", "--rows", "9", "--cols", "9", "-o", str(f)])
    # pretending the grid is a tree makes the slim-triangle check fail
    code = main(["verify", "-i", str(f), "--ray", "row", "--delta", "0", "--checks", "rips_slimness"])
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--ray", "nope"],
        ["verify", "--h", "0.2"],
        ["verify", "--basepoint", "zz"],
    ],
)
def test_config_errors_exit_2(tree_file, argv, capsys):
    assert main(argv[:1] + ["-i", str(tree_file)] + argv[1:]) == 2
    assert "error:" in capsys.readouterr().err


def test_schema_error_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"vertices": ["a"], "edges": []}')
    assert main(["analyze", "-i", str(f)]) == 2
    assert "missing required key" in capsys.readouterr().err


def test_invalid_tiling_exit_2(capsys):
    assert main(["generate", "--kind", "tessellation_disk", "--p", "4", "--q", "4"]) == 2


def test_thread_variable_is_validated(tree_file, monkeypatch):
    monkeypatch.setenv("TOOL_THREADS", "many")
    assert main(["analyze", "-i", str(tree_file)]) == 2
    monkeypatch.setenv("TOOL_THREADS", "4")
    assert main(["analyze", "-i", str(tree_file), "-o", "/dev/null"]) == 0


def test_other_verbs(tree_file, tmp_path, capsys):
    assert main(["analyze", "-i", str(tree_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["delta"] == 0.0 and out["method"] == "exact" and out["rays"]["spineL"]["valid"]

    assert main(["boundary", "-i", str(tree_file), "--ray", "spineL", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "vertex,b" and "root,0.0" in lines

    assert main(["uniformize", "-i", str(tree_file), "--ray", "spineL", "--epsilon", "0.1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ledger"]["epsilon"] == 0.1 and len(out["edges"]) == 510


def test_verify_csv(tree_file, capsys):
    assert main(["verify", "-i", str(tree_file), "--format", "csv", "--checks", "harnack,lemma_3_1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("name,holds")
    assert lines[1].startswith("harnack,true") and lines[2].startswith("lemma_3_1,inconclusive")


def test_module_entry_point(tmp_path):
    f = tmp_path / "p.json"
    r = subprocess.run([sys.executable, "-m", "hyperuni", "generate", "--kind", "path", "--n", "3", "-o", str(f)])
    assert r.returncode == 0 and json.loads(f.read_text())["basepoint"] == "0"
