import json

import pytest

from wrig_lab.bipartization import weak_bipartization
from wrig_lab.cli import main
from wrig_lab.core import RepresentationMatrix
from wrig_lab.textio import format_matrix, read_coloring, read_matrix

STRONG_MIX = RepresentationMatrix.from_label_sets(4, [[0, 1, 3], [1, 2], [0, 2]])


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "weak.wrig"
    path.write_text("WRIG 1 3 3\n1 2 1 2\n2 2 2 3\n3 2 1 3\n")
    return path


def test_sample_writes_reproducible_matrix(tmp_path, capsys):
    out = tmp_path / "R.wrig"
    args = ["sample", "--n", "8", "--m", "5", "--p", "0.3", "--seed", "4"]
    assert main(args + ["--out", str(out)]) == 0
    R = read_matrix(out)
    assert (R.m, R.n) == (5, 8)
    assert main(args) == 0
    assert capsys.readouterr().out == format_matrix(R)


def test_sample_alpha_and_c_modes(tmp_path):
    out = tmp_path / "R.wrig"
    assert main(["sample", "--n", "256", "--alpha", "0.5", "--p", "0.02",
                 "--seed", "1", "--out", str(out)]) == 0
    assert read_matrix(out).m == 16
    assert main(["sample", "--n", "50", "--c", "0.5", "--seed", "1", "--out", str(out)]) == 0
    assert read_matrix(out).m == 50
    # --p conflicts with --c
    assert main(["sample", "--n", "50", "--c", "0.5", "--p", "0.1", "--out", str(out)]) == 1


def test_solve_json_and_coloring_file(matrix_file, tmp_path, capsys):
    coloring_path = tmp_path / "x.txt"
    assert main([
        "solve", "--algo", "exact", "--in", str(matrix_file),
        "--coloring-out", str(coloring_path), "--json",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {
        "algorithm": "exact", "weight": 2, "discrepancy": 2, "n": 3, "m": 3, "seed": 0,
    }
    assert len(read_coloring(coloring_path)) == 3


def test_solve_all_algorithms_run(matrix_file, capsys):
    for algo in ("random", "majority", "exact", "mindisc"):
        assert main(["solve", "--algo", algo, "--in", str(matrix_file), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["algorithm"] == algo
        assert payload["weight"] <= 2


def test_bipartize_json(matrix_file, capsys):
    assert main(["bipartize", "--in", str(matrix_file), "--seed", "3", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["terminated"] is True
    assert payload["iterations"] == 0
    assert payload["cut_weight"] == 2
    [cycle] = payload["zero_strong_cycles"]
    assert cycle["vertices"] == [1, 2, 3]
    assert cycle["labels"] == [1, 2, 3]


def test_bipartize_strict_exit_code(tmp_path, capsys):
    # Pick a seed whose first matching closes the odd triangle, then forbid
    # re-matching: the run cannot terminate and --strict must exit 3.
    stuck_seed = next(
        s for s in range(100) if weak_bipartization(STRONG_MIX, seed=s).iterations > 0
    )
    path = tmp_path / "strong.wrig"
    path.write_text(format_matrix(STRONG_MIX))
    base = ["bipartize", "--in", str(path), "--seed", str(stuck_seed),
            "--max-rematch", "0", "--json"]
    assert main(base) == 0
    assert json.loads(capsys.readouterr().out)["terminated"] is False
    assert main(base + ["--strict"]) == 3


def test_count_sequences_exact_and_expected(matrix_file, capsys):
    assert main(["count-sequences", "--in", str(matrix_file), "--k", "3"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert main(["count-sequences", "--expect", "--n", "5", "--m", "5",
                 "--p", "0.2", "--k", "3"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.0768, abs=1e-12)
    assert main(["count-sequences", "--k", "3"]) == 1  # neither --in nor --expect


def test_experiment_subcommand(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "name": "cli", "regime": "fixed", "n": 8, "m": 8, "p": 0.2,
        "trials": 2, "algorithms": ["random", "bipartize"], "seed": 5,
    }))
    csv_path = tmp_path / "out.csv"
    summary_path = tmp_path / "sum.json"
    assert main(["experiment", "--spec", str(spec_path), "--workers", "1",
                 "--out", str(csv_path), "--summary", str(summary_path)]) == 0
    assert csv_path.read_text().startswith("# wrig-lab schema 1\n")
    assert json.loads(summary_path.read_text())["grid"][0]["trials"] == 2
    assert "grid 0" in capsys.readouterr().out


def test_experiment_strict_exit_code(tmp_path, capsys):
    spec_path = tmp_path / "strict.json"
    spec_path.write_text(json.dumps({
        "name": "strict", "regime": "fixed", "n": 10, "m": 10, "p": 0.2,
        "trials": 3, "algorithms": ["bipartize"], "seed": 42, "max_rematch": 0,
    }))
    base = ["experiment", "--spec", str(spec_path), "--workers", "1",
            "--out", str(tmp_path / "o.csv")]
    assert main(base) == 0  # non-termination is an outcome, not an error
    assert main(base + ["--strict"]) == 3
    capsys.readouterr()


def test_invalid_inputs_exit_one(tmp_path, capsys):
    assert main(["solve", "--algo", "exact", "--in", str(tmp_path / "missing")]) == 1
    bad = tmp_path / "bad.wrig"
    bad.write_text("BOGUS\n")
    assert main(["solve", "--algo", "exact", "--in", str(bad)]) == 1
    assert main(["solve", "--algo", "warp", "--in", str(bad)]) == 1
    assert main(["experiment", "--spec", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()
