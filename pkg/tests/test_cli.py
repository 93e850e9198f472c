import csv
import io
import json
import subprocess
import sys

import pytest

from kary_chipfiring.cli import main, render_ranges_table
from kary_chipfiring.engine import Strategy, run_strategy
from kary_chipfiring.tree import GameParams


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_index(capsys):
    assert run(capsys, "index", "--k", "3", "--n", "3", "--t", "31", "--x", "2")[:2] == (0, "20\n")


def test_check_verdicts(capsys):
    code, out, _ = run(capsys, "check", "--k", "2", "--n", "3", "--perm", "1,5,2,4,3,6,7,8")
    assert code == 0 and out.splitlines()[0] == "UNREACHABLE"
    code, out, _ = run(capsys, "check", "--k", "2", "--n", "3", "--perm", "1,3,5,7,2,6,4,8")
    assert code == 0 and out.splitlines()[0] == "REACHABLE"


def test_check_writes_certificate(capsys, tmp_path):
    path = tmp_path / "cert.json"
    run(capsys, "check", "--k", "2", "--n", "3", "--perm", "1,2,3,4,5,6,7,8", "--certificate", str(path))
    s = Strategy.from_json(path.read_text())
    assert run_strategy(s.params, s).permutation == (1, 2, 3, 4, 5, 6, 7, 8)


def test_simulate_canonical(capsys):
    assert run(capsys, "simulate", "--k", "3", "--n", "2", "--canonical")[1] == "147258369\n"


def test_simulate_random_is_seeded(capsys):
    a = run(capsys, "simulate", "--k", "2", "--n", "4", "--random", "--seed", "7")[1]
    b = run(capsys, "simulate", "--k", "2", "--n", "4", "--random", "--seed", "7")[1]
    assert a == b and a.startswith("1,") and a.strip().endswith(",16")


def test_simulate_record_json(capsys):
    code, out, _ = run(capsys, "simulate", "--k", "2", "--n", "2", "--canonical", "--record", "--format", "json")
    doc = json.loads(out)
    assert doc["permutation"] == [1, 3, 2, 4]
    assert doc["record"]["3"] == [["", 3], ["1", 2], ["12", 1]]


def test_witness_round_trip(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, _, err = run(capsys, "witness", "--k", "3", "--n", "3", "--t", "113", "--c", "11",
                       "--out", str(path), "--verify")
    assert code == 0 and "VERIFIED" in err
    first = path.read_text()
    s = Strategy.from_json(first)
    assert s.to_json() + "\n" == first
    code, out, _ = run(capsys, "simulate", "--k", "3", "--n", "3", "--strategy", str(path))
    assert out.split(",")[2] == "11"


def test_witness_out_of_range_is_domain_error(capsys):
    code, _, err = run(capsys, "witness", "--k", "3", "--n", "3", "--t", "113", "--c", "20")
    assert code == 1 and "error" in err


def test_bad_strategy_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"k": 2, "n": 2,\n "fires": [\n')
    code, _, err = run(capsys, "simulate", "--k", "2", "--n", "2", "--strategy", str(path))
    assert code == 1 and "line" in err
    path.write_text(json.dumps({"k": 2, "n": 2, "fires": [{"vertex": "", "chips": [1, 2]}]}))
    code, _, err = run(capsys, "simulate", "--k", "2", "--n", "2", "--strategy", str(path))
    assert code == 1 and "fires 1 times" in err


def test_scope_guard_exit_code(capsys):
    assert run(capsys, "enumerate", "--k", "2", "--n", "4")[0] == 1
    code, out, _ = run(capsys, "enumerate", "--k", "2", "--n", "2")
    assert code == 0 and out.split() == ["1234", "1324"]


def test_usage_error_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "kary_chipfiring", "index", "--k", "3", "--bogus"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2


def test_ranges_small_table(capsys):
    code, out, _ = run(capsys, "ranges", "--k", "2", "--n", "1")
    assert out.splitlines() == ["t,a,b,length", "1,1,1,1", "2,2,2,1"]


@pytest.mark.parametrize("k, n", [(3, 3), (2, 5), (4, 2)])
def test_csv_and_json_agree(k, n):
    p = GameParams(k, n)
    rows = list(csv.DictReader(io.StringIO(render_ranges_table(p, False, "csv").render())))
    docs = json.loads(render_ranges_table(p, False, "json").render())
    assert [{key: str(v) for key, v in d.items()} for d in docs] == rows


def test_groups_and_spreads_json(capsys):
    code, out, _ = run(capsys, "groups", "--k", "2", "--n", "3", "--format", "json")
    doc = json.loads(out)
    assert [(g["first"], g["last"]) for g in doc["groups"]] == [(1, 1), (2, 3), (4, 5), (6, 7), (8, 8)]
    assert doc["boundaries"] == [1, 2, 4, 5, 7, 8]
    code, out, _ = run(capsys, "spreads", "--k", "3", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["extremes"]["largest"] == {"spread": 78, "chips": [27, 28, 54, 55]}
    code, out, _ = run(capsys, "spread", "--k", "3", "--n", "3", "--c", "11")
    assert out.splitlines()[1] == "11,2,1,2,3,113,331,3,25,23"


def test_check_accepts_compact_form(capsys):
    assert run(capsys, "check", "--k", "2", "--n", "3", "--perm", "15243678")[1].startswith("UNREACHABLE")
    code, out, _ = run(capsys, "simulate", "--k", "3", "--n", "2", "--canonical")
    assert run(capsys, "check", "--k", "3", "--n", "2", "--perm", out.strip())[1] == "REACHABLE\n"
