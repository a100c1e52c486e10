import csv
import io
import json

import pytest

from moranslice.cli import parse_qgrid, run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_qgrid():
    assert parse_qgrid("-2:0.25:2")[0] == -2.0 and len(parse_qgrid("-2:0.25:2")) == 17
    # exact stepping: no 0.30000000000000004
    assert parse_qgrid("0.1:0.1:0.9") == [float(f"0.{i}") for i in range(1, 10)]


def test_matrices_table():
    code, out = call("matrices", "--slope", "1/1")
    assert code == 0
    assert "# A_0^1 tag=0 j=1 order=2 builder=semantic\n2 1\n1 2\n" in out


def test_matrices_closed_form_json():
    code, out = call("matrices", "--slope", "2/3", "--closed-form", "--format", "json")
    recs = jsonl(out)
    assert code == 0 and recs[-1]["diff"] == []
    assert {r["builder"] for r in recs[:-1]} == {"semantic", "closed_form"}


def test_expand():
    code, out = call("expand", "--slope", "1/1", "--sigma", "(10)", "--a", "1/4", "--depth", "2")
    rec = jsonl(out)[0]
    assert code == 0
    assert (rec["k"], rec["digits"], rec["boundary"], rec["error"]) == (2, [1, 0], True, "0")


def test_count_both():
    code, out = call("count", "--a", "1/2", "--depth", "3", "--method", "both")
    recs = jsonl(out)
    assert code == 0
    assert [(r["matrix"], r["oracle"]) for r in recs] == [(3, 3), (9, 9), (27, 27)]
    assert all(r["a"] == "1/2" and r["slope"] == "1/1" for r in recs)


def test_count_budget_exit():
    code, out = call("count", "--a", "1/3", "--sigma", "(1)", "--depth", "8", "--method", "oracle",
                     "--cell-budget", "100")
    assert code == 3
    assert jsonl(out)[-1]["error"] == "BudgetExceeded"


def test_dim_summary():
    code, out = call("dim", "--slope", "0/1", "--a", "1/2", "--depth", "10", "--window", "3")
    recs = jsonl(out)
    assert code == 0 and recs[-1]["summary"] and recs[-1]["window"] == 3
    assert recs[-2]["count"] == 1024


def test_pressure_csv():
    code, out = call("pressure", "--depth", "6", "--q", "0,1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["normalized"]) == 1.0
    assert rows[0]["sigma"] == "(0)"


def test_bound_default_alpha():
    code, out = call("bound", "--depth", "6", "--format", "json")
    rec = jsonl(out)[0]
    assert code == 0 and rec["bound"] <= 1


@pytest.mark.parametrize("chord,found", [("finite", True), ("limit", False)])
def test_witness(chord, found):
    code, out = call("witness", "--depth", "10", "--chord", chord, "--format", "json")
    recs = jsonl(out)
    assert code == 0 and recs[-1]["witness"] is found
    assert len(recs) == 10


def test_verify(capsys):
    code, out = call("verify", "--slope", "1/1", "--slope", "1/2", "--sigma", "(01)", "--samples", "3",
                     "--depth", "4", "--seed", "9")
    assert code == 0
    recs = jsonl(out)
    assert all(r["seed"] == 9 for r in recs)
    assert "mismatches=0" in capsys.readouterr().err


def test_render_out_file(tmp_path):
    path = tmp_path / "c.svg"
    code, _ = call("render", "--sigma", "(01)", "--depth", "2", "--out", str(path))
    assert code == 0 and path.read_text().count("<rect ") == 96


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"slope": "0/1", "a": "1/2", "depth": 4}))
    code, out = call("count", "--config", str(cfg), "--depth", "2")
    assert code == 0 and [r["matrix"] for r in jsonl(out)] == [2, 4]
    cfg.write_text(json.dumps({"slopes": "1/1"}))
    assert call("count", "--config", str(cfg))[0] == 1


@pytest.mark.parametrize("argv", [
    ["count", "--slope", "2/4", "--a", "0"],
    ["count", "--a", "5"],
    ["count"],
    ["expand", "--sigma", "(2)", "--a", "0"],
    ["pressure", "--qgrid", "1:0:2"],
    ["witness", "--q", "1.5"],
])
def test_usage_errors(argv):
    code, out = call(*argv)
    assert code == 1
    assert "error" in jsonl(out)[-1]


def test_argparse_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        run(["count", "--depth", "x"], stdout=io.StringIO())
    assert exc.value.code == 1
