import csv
import json
import math
import shutil
import subprocess

import pytest

from cloudtheta import build_graph, parse_dimacs, render_dimacs
from cloudtheta.cli import EXIT_INVALID, EXIT_OK, EXIT_RESOURCE, expected_matched_pairs, main
from oracles import gadget_formula


@pytest.fixture
def gadget_path(tmp_path):
    p = tmp_path / "gadget.cnf"
    p.write_text(render_dimacs(gadget_formula()))
    return str(p)


def run_json(args, capsys):
    rc = main(args)
    out = capsys.readouterr().out
    assert rc == EXIT_OK, out
    return json.loads(out)


def test_gen_is_deterministic_and_parseable(tmp_path, capsys):
    out = tmp_path / "f.cnf"
    assert main(["gen", "--n", "12", "--m", "9", "--seed", "5", "--out", str(out)]) == EXIT_OK
    f = parse_dimacs(out.read_text())
    assert f.n == 12 and f.m == 9
    again = tmp_path / "g.cnf"
    assert main(["gen", "--n", "12", "--m", "9", "--seed", "5", "--out", str(again)]) == EXIT_OK
    assert out.read_text() == again.read_text()
    doc = run_json(["gen", "--n", "4", "--m", "2", "--format", "json"], capsys)
    assert doc["seed"] == 0 and parse_dimacs(doc["dimacs"]).m == 2


def test_reduce_writes_graph_and_sidecar(tmp_path, gadget_path, capsys):
    out = tmp_path / "g.col"
    assert main(["reduce", gadget_path, "--out", str(out)]) == EXIT_OK
    g = build_graph(gadget_formula(), "xor")
    first = out.read_text().splitlines()[0]
    assert first == f"p edge 16 {g.edge_count}"
    side = json.loads((tmp_path / "g.col.json").read_text())
    assert side["variant"] == "xor" and len(side["vertices"]) == 16
    doc = run_json(["reduce", gadget_path, "--variant", "full", "--format", "json"], capsys)
    assert doc["sidecar"]["variant"] == "full"
    assert doc["dimacs"].startswith("p edge 28 ")


def test_ge3_reports_refutation_trace(gadget_path, capsys):
    doc = run_json(["ge3", gadget_path], capsys)
    assert doc["refuted"] is True
    assert doc["trace"][-1]["result"] == {"vars": [], "rhs": 1}
    rc = main(["ge3", gadget_path, "--format", "csv"])
    out = capsys.readouterr().out
    assert rc == EXIT_OK
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["n", "m", "refuted", "equations", "derived"]
    assert rows[1][2] == "True"


def test_witness_verdicts(tmp_path, gadget_path, capsys):
    doc = run_json(["witness", gadget_path], capsys)
    assert doc["verdict"] == "unsatisfiable" and doc["trace"]
    sat = tmp_path / "sat.cnf"
    assert main(["gen", "--n", "15", "--m", "7", "--seed", "1", "--out", str(sat)]) == EXIT_OK
    doc = run_json(["witness", str(sat)], capsys)
    assert doc["verdict"] == "not-refuted"
    assert doc["ok"] is True and doc["objective"] == "7"
    assert len(doc["witness"]["vectors"]) == 28


def test_theta_on_a_graph_file(tmp_path, capsys):
    p = tmp_path / "c5.col"
    lines = ["p edge 5 5"] + [f"e {i + 1} {(i + 1) % 5 + 1}" for i in range(5)]
    p.write_text("\n".join(lines) + "\n")
    doc = run_json(["theta", str(p)], capsys)
    assert abs(doc["value"] - math.sqrt(5)) <= 2e-3
    assert doc["converged"] is True
    rc = main(["theta", str(p), "--format", "csv"])
    out = capsys.readouterr().out
    assert rc == EXIT_OK
    rows = list(csv.reader(out.splitlines()))
    assert rows[0][0] == "value" and abs(float(rows[1][0]) - math.sqrt(5)) <= 2e-3


def test_pattern_lists_hits(gadget_path, capsys):
    doc = run_json(["pattern", gadget_path], capsys)
    assert doc["matched_pairs"] == 2
    assert len(doc["hits"]) == 1
    hit = doc["hits"][0]
    assert hit["indices"] == [0, 1, 2, 3]
    assert hit["thirds"] == [3, 4, 3, -4]
    assert hit["shared"] == [[1, 2], [5, 6]]


def test_pipeline_generates_and_audits(capsys):
    doc = run_json(["pipeline", "--n", "14", "--m", "8", "--seed", "3",
                    "--theta", "--audit"], capsys)
    assert doc["verdict"] in ("not-refuted", "unsatisfiable")
    assert doc["pattern_hits"] >= 0
    assert doc["audit"]["consistent"] is True
    if doc["verdict"] == "not-refuted":
        assert doc["witness_ok"] is True
        assert abs(doc["theta"]["value"] - 8) <= 2e-2


def test_pipeline_reads_files_and_validates_flags(gadget_path, capsys):
    doc = run_json(["pipeline", "--input", gadget_path, "--audit"], capsys)
    assert doc["verdict"] == "unsatisfiable"
    assert doc["audit"] == {"xor_satisfiable": False, "consistent": True}
    assert main(["pipeline"]) == EXIT_INVALID
    capsys.readouterr()


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 3 1\n1 2 0\n")
    assert main(["ge3", str(bad)]) == EXIT_INVALID
    assert main(["ge3", str(tmp_path / "missing.cnf")]) == EXIT_INVALID
    big = tmp_path / "big.col"
    big.write_text("p edge 600 0\n")
    assert main(["theta", str(big)]) == EXIT_RESOURCE
    capsys.readouterr()


def test_scan_aggregates_cells(capsys):
    rc = main(["scan", "--n-list", "8,10", "--density-list", "1.0,2.0",
               "--seeds", "4", "--theta-limit", "60"])
    out = capsys.readouterr().out
    assert rc == EXIT_OK
    rows = list(csv.reader(out.splitlines()))
    assert rows[0][:4] == ["n", "m", "density", "seeds"]
    assert len(rows) == 5
    for row in rows[1:]:
        rates = [float(x) for x in row[4:7]]
        assert all(0.0 <= r <= 1.0 for r in rates)
        assert float(row[8]) == expected_matched_pairs(int(row[0]), int(row[1]))
    doc = run_json(["scan", "--n-list", "8", "--m-list", "8", "--seeds", "3",
                    "--format", "json"], capsys)
    assert len(doc["cells"]) == 1 and doc["cells"][0]["seeds"] == 3
    assert main(["scan", "--n-list", "8"]) == EXIT_INVALID
    capsys.readouterr()


def test_expected_matched_pairs_formula():
    # Two uniform clauses share >= 2 variables with probability
    # [C(3,2)(n-3) + C(3,3)] / C(n,3); identical literals then cost 1/4 or 1/2.
    n = 10
    total3 = math.comb(n, 3)
    want = math.comb(7, 2) * (3 * (n - 3) / total3 * 0.25 + 1 / total3 * 0.5)
    assert expected_matched_pairs(10, 7) == pytest.approx(want)
    assert expected_matched_pairs(10, 0) == 0.0
    assert expected_matched_pairs(10, 1) == 0.0


def test_console_script_is_installed():
    exe = shutil.which("cloudtheta")
    assert exe, "console script should be on PATH after an editable install"
    res = subprocess.run([exe, "gen", "--n", "6", "--m", "4"],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0
    assert res.stdout.startswith("p cnf 6 4")
