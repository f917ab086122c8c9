from __future__ import annotations

import csv
import io
import json

import pytest

from cyclomax.cli import main, shape_of
from cyclomax.records import load_records


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_compute_text_and_json(capsys):
    code, out = run(capsys, "compute", "30")
    assert code == 0 and "B(30) = 12" in out.out
    code, out = run(capsys, "compute", "30", "--measure", "C", "--json")
    rec = json.loads(out.out)
    assert rec["measure"] == "C" and rec["n"] == 30


def test_compute_budget_error(capsys):
    code, out = run(capsys, "compute", "720", "--max-divisors", "10")
    assert code == 2 and "budget" in out.err


def test_verify_exit_codes(capsys):
    code, out = run(capsys, "verify", "P2Q2", "3", "5")
    assert code == 0 and "holds" in out.out
    code, out = run(capsys, "verify", "PQ_DIVISIBILITY", "--n", str(7**2 * 83**2))
    assert code == 2 and "refused" in out.err
    code, out = run(capsys, "verify", "P2Q2", "3")
    assert code == 2


def test_verify_text_and_csv_agree(capsys):
    _, text = run(capsys, "verify", "PARITY_PRODUCTS", "--upto", "40")
    _, raw = run(capsys, "verify", "PARITY_PRODUCTS", "--upto", "40", "--csv")
    rows = list(csv.DictReader(io.StringIO(raw.out)))
    text_lines = [line for line in text.out.splitlines() if line.startswith("PARITY_PRODUCTS")]
    assert len(rows) == len(text_lines) == 26
    assert "26 reports: holds 26, fails 0" in text.out
    for row, line in zip(rows, text_lines):
        assert line.split()[:4] == [row["conjecture"], row["params"], row["verdict"], row["B"]]


def test_range_and_tables(capsys, tmp_path):
    p = tmp_path / "r.jsonl"
    code, out = run(capsys, "range", "1", "80", "--checkpoint", str(p))
    assert code == 0 and json.loads(out.out)["computed"] == 80
    assert len(load_records(p)) == 80
    _, out = run(capsys, "table", "--input", str(p), "--shape", "pq", "--csv")
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert rows and all(r["match"] == "yes" for r in rows)
    assert {"6", "35", "77"} <= {r["n"] for r in rows}
    _, text = run(capsys, "table", "--input", str(p), "--shape", "pq")
    assert [line.split() for line in text.out.splitlines()[2:]] == [list(r.values()) for r in rows]
    _, out = run(capsys, "table", "--input", str(p), "--summary", "--csv")
    summary = list(csv.DictReader(io.StringIO(out.out)))
    assert all(r["mismatches"] == "0" for r in summary)


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--limit", "12", "--identity-limit", "50")
    assert code == 0 and out.out.count("PASS") == 2


@pytest.mark.parametrize("n,shape", [(1, "1"), (7, "p"), (8, "pk"), (15, "pq"), (12, "p2q"), (36, "p2q2"),
                                     (30, "pqr"), (72, "p3q2")])
def test_shape_of(n, shape):
    assert shape_of(n) == shape
