import csv
import io
import json

import pytest

from prodcodes import cli


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_of(text):
    return json.loads(text)["data"]


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == cli.EXIT_OK
    assert out.strip().splitlines()[-1].startswith("PASS")
    assert "FAIL " not in out
    info = [ln for ln in out.splitlines() if ln.startswith("INFO")]
    assert len(info) == 3 and any("printed 9126691200" in ln for ln in info)


def test_verify_detects_tampered_table(capsys, monkeypatch):
    monkeypatch.setitem(cli.TABLE_II_X, 5, 2041)
    code, out, _ = run(capsys, "verify")
    assert code == cli.EXIT_MISMATCH
    assert any(ln.startswith("FAIL") and "x_l l=5" in ln for ln in out.splitlines())


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert code == 0 and data_of(out)["failed"] == 0


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "cp1", "--w", "9..15")
    d = data_of(out)
    assert code == 0 and d["9"] == {"tau_a": 48400, "tau_b": 0}
    assert d["15"]["tau_a"] + d["15"]["tau_b"] == 1754335440
    code, out, _ = run(capsys, "enumerate", "cp1", "--w", "17", "--method", "oracle", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out.split("\n", 1)[1])))
    assert rows[0]["tau"] == "43093036800"


def test_enumerate_errors(capsys):
    assert run(capsys, "enumerate", "cp1", "--w", "17")[0] == cli.EXIT_INVALID
    assert run(capsys, "enumerate", "12,10,12")[0] == cli.EXIT_INVALID
    assert run(capsys, "enumerate", "cp7")[0] == cli.EXIT_INVALID
    assert run(capsys, "enumerate", "12,10,12,10", "--w", "a..b")[0] == cli.EXIT_INVALID
    from prodcodes.enumeration import _ways

    _ways.cache_clear()
    code, _, err = run(capsys, "enumerate", "40,37,40,37", "--w", "30", "--method", "oracle", "--budget", "5")
    assert code == cli.EXIT_BUDGET and "budget" in err


def test_bound_csv(capsys):
    code, out, _ = run(capsys, "bound", "cp1", "--eps", "0.05..0.30:6", "--wmax", "15", "--format", "csv")
    assert code == 0
    header, body = out.split("\n", 1)
    cfg = json.loads(header.removeprefix("# config: "))
    assert cfg["params"]["w_max"] == 15 and cfg["code"] == "cp1"
    rows = list(csv.DictReader(io.StringIO(body)))
    assert [float(r["eps"]) for r in rows] == pytest.approx([0.05, 0.1, 0.15, 0.2, 0.25, 0.3])
    coeffs = {9: 48400, 12: 6098400, 13: 23522400, 14: 17641800, 15: 1754335440}
    want = sum(t * 0.1**w for w, t in coeffs.items())
    assert float(rows[1]["union_bound"]) == pytest.approx(want, rel=1e-12)


def test_color_and_trace(capsys, tmp_path):
    trace = tmp_path / "trace.jsonl"
    argv = ["color", "cp1", "--iters", "10", "--seed", "3", "--trace", str(trace)]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    d = data_of(out)
    assert len(d["trace"]) == 10 and d["coloring"]["M"] == 4
    lines = [json.loads(ln) for ln in trace.read_text().splitlines()]
    assert len(lines) == 10 and lines[-1]["round"] == 10
    assert data_of(run(capsys, *argv)[1]) == d


def test_color_invalid_initial(capsys):
    assert run(capsys, "color", "cp1", "--initial", "nope.json")[0] == cli.EXIT_INVALID


def test_census_reproducible(capsys):
    a = run(capsys, "census", "cp1", "--samples", "5000", "--seed", "9")[1]
    b = run(capsys, "census", "cp1", "--samples", "5000", "--seed", "9")[1]
    assert a == b
    assert 0.05 < data_of(a)["diversity_fraction"] < 0.13
    assert run(capsys, "census", "cp1", "--samples", "0")[0] == cli.EXIT_INVALID


def test_simulate_cec(capsys):
    code, out, _ = run(capsys, "simulate", "cp1", "--cec", "--coloring", "fig8a", "--eps", "0.1", "--trials", "1e5")
    assert code == 0
    row = data_of(out)[0]
    want = 6 * 0.01 * 0.81 + 4 * 0.001 * 0.9 + 0.0001
    assert abs(row["wer"] - want) < 4 * row["wer_stderr"]


def test_simulate_variants(capsys):
    code, out, _ = run(capsys, "simulate", "cp1", "--eps", "0.1,0.2", "--decoder", "both", "--trials", "2000",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out.split("\n", 1)[1])))
    assert code == 0 and [r["decoder"] for r in rows] == ["iterative", "ml", "iterative", "ml"]
    code, out, _ = run(capsys, "simulate", "cp1", "--unequal", "--coloring", "fig8a", "--eps", "0.1,0.1,0.1,0.2",
                       "--trials", "2000")
    assert code == 0 and data_of(out)[0]["eps"] == "0.1/0.1/0.1/0.2"
    assert run(capsys, "simulate", "cp1", "--cec")[0] == cli.EXIT_INVALID
    assert run(capsys, "simulate", "cp1", "--eps", "1.5", "--trials", "10")[0] == cli.EXIT_INVALID


def test_simulate_deterministic(capsys):
    argv = ["simulate", "cp1", "--eps", "0.15", "--trials", "20000", "--seed", "4"]
    assert data_of(run(capsys, *argv)[1]) == data_of(run(capsys, *argv)[1])


def test_fixtures(capsys, tmp_path):
    out_file = tmp_path / "f.json"
    code, out, _ = run(capsys, "fixtures", "fig8a", "eq25", "--out", str(out_file))
    assert code == 0 and out == ""
    d = data_of(out_file.read_text())
    assert d["fig8a"]["eta"] == 32 and d["eq25"]["rho_hist"] == {"1": 9}
    assert run(capsys, "fixtures", "fig99")[0] == cli.EXIT_INVALID


def test_parsers():
    assert cli.parse_grid("0.1..0.3:3") == pytest.approx([0.1, 0.2, 0.3])
    assert len(cli.parse_grid("0..1")) == 10
    assert cli.parse_range("3..5") == [3, 4, 5]
    assert cli.parse_count("1e6") == 10**6
    code = cli.parse_code("5,3,6,4,4")
    assert (code.n1, code.k1, code.n2, code.k2, code.field.m) == (5, 3, 6, 4, 4)
    with pytest.raises(cli.InvalidInput):
        cli.parse_count("2.5")
    with pytest.raises(cli.InvalidInput):
        cli.parse_code("20,10,20,10,4")
