import csv
import io
import json
import re

import pytest

from congestion_qaoa import bundled_game_text
from congestion_qaoa.cli import main


@pytest.fixture(scope="module")
def game_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("games") / "game.json"
    path.write_text(bundled_game_text())
    return path


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_paths(game_file):
    code, out, _ = run("paths", game_file)
    assert code == 0
    assert out.splitlines()[-1] == "players=2 paths=4,2 spins=6"
    assert "  [3] spin=3 S1-X-Y-T edges=1,6,8" in out


def test_brute_stdout(game_file):
    code, out, err = run("brute", game_file, "--objective", "nash")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 64
    assert sum(r["feasible"] == "1" for r in rows) == 8
    assert "total=64 feasible=8" in err
    assert "bits=000101" in err and "nash_equilibrium=yes" in err


def test_brute_social_summary(game_file, tmp_path):
    target = tmp_path / "rows.csv"
    code, out, _ = run("brute", game_file, "--objective", "social", "--csv", target)
    assert code == 0
    assert target.read_text().count("\n") == 65
    assert "bits=100001" in out and "combined_utility=2.05" in out
    assert "nash_equilibrium=no" in out
    assert re.search(r"player 0 best_deviation=3:S1-X-Y-T delta=-0\.1\b", out)


def test_compile(game_file, tmp_path):
    target = tmp_path / "ising.json"
    code, _, _ = run("compile", game_file, "--objective", "nash", "--mode", "soft", "--penalty", "10", "--out", target)
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["n"] == 6 and len(doc["h"]) == 6
    assert all(t["i"] < t["j"] for t in doc["J"])


def test_heatmap(game_file):
    code, out, _ = run("heatmap", game_file, "--objective", "nash", "--mode", "soft", "--grid", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "beta,gamma,expectation"
    assert len(lines) == 17


def test_solve_outputs(game_file, tmp_path):
    code, out, _ = run("solve", game_file, "--objective", "nash", "--mode", "hard", "--p", "1",
                       "--seeds", "2", "--max-evals", "20", "--premix", "0.3927", "--out", tmp_path)
    assert code == 0
    assert re.fullmatch(r"optimum=000101 success=\d/2\n", out)
    runs = list(csv.DictReader(open(tmp_path / "runs.csv", newline="")))
    assert [r["seed"] for r in runs] == ["0", "1"]
    assert set(runs[0]) == {"seed", "best_expectation", "most_probable_bits", "is_optimal", "p_optimal_state"}
    cum = list(csv.DictReader(open(tmp_path / "cumulative_feasible.csv", newline="")))
    assert len(cum) == 8 and float(cum[-1]["cum_prob"]) == 1.0
    records = json.loads((tmp_path / "records.json").read_text())
    assert len(records) == 2 and records[0]["premix_beta0"] == 0.3927


def test_sweep(game_file, tmp_path):
    code, out, _ = run("sweep", game_file, "--objective", "social", "--mode", "soft",
                       "--p-list", "1,2", "--seeds", "2", "--max-evals", "15", "--out", tmp_path)
    assert code == 0
    assert out.splitlines()[0] == "p,seed_count,success_count"
    assert [l.split(",")[:2] for l in out.splitlines()[1:]] == [["1", "2"], ["2", "2"]]
    assert (tmp_path / "cumulative_p2_all.csv").exists()
    assert (tmp_path / "baseline_feasible.csv").exists()


def test_byte_identical(game_file):
    argv = ("solve", game_file, "--objective", "social", "--mode", "hard", "--p", "2", "--seeds", "2",
            "--max-evals", "30", "--randomize-initial", "--seed-base", "77")
    assert run(*argv) == run(*argv)


def test_csv_style(game_file):
    _, out, _ = run("heatmap", game_file, "--objective", "social", "--mode", "hard", "--grid", "3", "--premix", "0.4")
    assert "\r" not in out
    for value in out.splitlines()[4].split(","):
        digits = value.lstrip("-").replace(".", "").lstrip("0")
        assert len(digits) <= 12


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("brute", "GAME"),
    ("compile", "GAME", "--objective", "nash", "--mode", "hard", "--penalty", "4"),
    ("compile", "GAME", "--objective", "nash", "--mode", "soft", "--penalty", "-4"),
    ("solve", "GAME", "--objective", "nash", "--mode", "soft", "--p", "1", "--premix", "0.3"),
    ("sweep", "GAME", "--objective", "nash", "--mode", "hard", "--p-list", "1,x", "--seeds", "2"),
    ("heatmap", "GAME", "--objective", "nash", "--mode", "hard", "--grid", "1"),
])
def test_usage_errors(game_file, argv):
    code, _, err = run(*[game_file if a == "GAME" else a for a in argv])
    assert code == 1
    assert "error" in err


def test_domain_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "nodes": ["a", "b"], "edges": [{"from": "b", "to": "a", "a": 1, "b": 1}],
        "players": [{"origin": "a", "dest": "b"}],
    }))
    code, _, err = run("paths", bad)
    assert code == 2
    assert "no path exists" in err
    bad.write_text(bundled_game_text().replace('"b": 0.25', '"b": -1'))
    code, _, err = run("brute", bad, "--objective", "nash")
    assert code == 2 and "non-negative" in err
