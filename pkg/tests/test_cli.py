import json
import subprocess
import sys

import pytest

from gdpkit.cli import EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_PARSE, main, write_atomic


def _load(path):
    return json.loads(path.read_text())


@pytest.fixture
def counts_x2(tmp_path):
    out = tmp_path / "x2.json"
    assert main(["count", "--poly", "x^2", "--primes", "2,3,5", "--depth", "6", "--out", str(out)]) == EXIT_OK
    return out


def test_count_is_byte_identical(tmp_path, counts_x2):
    again = tmp_path / "again.json"
    main(["count", "--poly", "x^2", "--primes", "2,3,5", "--depth", "6", "--out", str(again)])
    assert counts_x2.read_bytes() == again.read_bytes()
    assert counts_x2.with_suffix(".csv").exists()
    assert _load(counts_x2)["schema_version"] == 1
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


def test_fit_then_uniform(tmp_path, counts_x2):
    fits = tmp_path / "fits"
    assert main(["fit", "--counts", str(counts_x2), "--out", str(fits / "x2.json")]) == EXIT_OK
    out = tmp_path / "uniform.json"
    assert main(["uniform", "--fits", str(fits), "--out", str(out)]) == EXIT_OK
    doc = _load(out)
    assert doc["uniform"] and doc["pairs"] == [[-1, -2]]


def test_rejected_candidate_is_negative(tmp_path, counts_x2):
    out = tmp_path / "bad.json"
    assert main(["fit", "--counts", str(counts_x2), "--pairs", "(-2,-1)", "--out", str(out)]) == EXIT_NEGATIVE
    assert _load(out)["error"] == "NoFit"


def test_parse_error_exit_code(capsys):
    assert main(["count", "--poly", "x^^2", "--primes", "2", "--depth", "2"]) == EXIT_PARSE
    assert "error" in capsys.readouterr().err


def test_budget_exit_code():
    assert main(["count", "--poly", "x*y - 1", "--primes", "2", "--depth", "6", "--budget", "100"]) == EXIT_BUDGET


def test_qe_with_model_check(tmp_path):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"formula": r"EX y:vg. (0 <= y /\ y <= ord(4) /\ cross[4](y) = xi)", "context": {"xi": "rf[4]"}}))
    out = tmp_path / "out.json"
    assert main(["qe", "--in", str(src), "--out", str(out), "--check", "2,3"]) == EXIT_OK
    doc = _load(out)
    assert doc["equivalent"] is True
    assert "EX y" not in doc["output"] and doc["trace"]


def test_sum_of_geometric_series(tmp_path):
    src = tmp_path / "f.txt"
    src.write_text("q^(-y)*[0 <= y]\n")
    out = tmp_path / "sum.json"
    assert main(["sum", "--in", str(src), "--out", str(out)]) == EXIT_OK
    doc = _load(out)
    assert doc["kind"] == "sum" and doc["result"] and doc["locus"] is not None


def test_loci_of_growing_function(tmp_path):
    src = tmp_path / "f.json"
    src.write_text(json.dumps({"function": "x*q^(y)", "vars": ["y"]}))
    out = tmp_path / "loci.json"
    assert main(["loci", "--in", str(src), "--mode", "int", "--out", str(out)]) == EXIT_OK
    assert _load(out)["mode"] == "INT"


def test_naturality_table(capsys, tmp_path):
    out = tmp_path / "nat.json"
    assert main(["verify-naturality", "--prime", "3", "--cases", "geom,count", "--out", str(out)]) == EXIT_OK
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert lines and all(l.startswith("PASS") for l in lines)
    assert all(r["pass"] for r in _load(out)["rows"])


def test_atomic_write_keeps_old_file_on_failure(tmp_path):
    target = tmp_path / "keep.json"
    target.write_text("old")
    with pytest.raises(TypeError):
        write_atomic(target, 42)
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["keep.json"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gdpkit.cli", "count", "--poly", "x", "--primes", "3", "--depth", "4"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["counts"] == {"3": [1, 1, 1, 1, 1]}
