import csv
import json

import pytest
from hypothesis import given, settings, strategies as st

from cuspmoments.cli import main, render, Output, run
from cuspmoments.config import ExperimentConfig, format_value, parse_value


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_petersson_command(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["petersson", "--weight", "12", "--max-mn", "20", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 400
    assert max(float(r["abs_diff"]) for r in rows) <= 1e-8
    err = capsys.readouterr().err
    assert "max residual" in err and err.strip().endswith("s]")


def test_validation_exit_codes(tmp_path):
    args = ["resonance", "scan", "--beta", "0", "--alpha-min", "1", "--alpha-max", "2", "--steps", "3",
            "--x", "100", "--out", str(tmp_path / "r.csv")]
    assert main(args) == 2
    assert main(["bessel", "--order", "3", "--x", "1", "--bogus"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["coeffs", "--n", "4"]) == 2  # weight missing
    assert main(["coeffs", "--weight", "13", "--n", "4"]) == 2


def test_numerical_exit_code(tmp_path):
    # 10^6 coefficients of weight 12 are fine, but the resonance range beyond the table is not
    assert main(["bessel", "--order", "6000", "--x", "1", "--out", str(tmp_path / "b.csv")]) == 3


def test_moment_json(tmp_path):
    out = tmp_path / "m.json"
    rc = main(["moment", "--k1", "18", "--l1", "4", "--k2", "18", "--l2", "4", "--x", "16", "--alpha", "1",
               "--beta", "0.5", "--identity-check", "--format", "json", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    for key in ("D00", "D01", "D10", "D11"):
        assert set(data[key]) == {"re", "im"}
    assert data["relative_residual"] <= 1e-6
    assert data["seconds"] > 0


def test_moment_regime_error():
    assert main(["moment", "--k1", "18", "--l1", "4", "--k2", "4.5", "--l2", "1.5", "--x", "16", "--alpha", "1",
                 "--beta", "0.5", "--regime", "large_windows"]) == 2


def test_coeffs_csv(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["coeffs", "--weight", "12", "--n", "5", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [r["a_n"] for r in rows] == ["1", "-24", "252", "-1472", "4830"]


def test_kloosterman_and_bessel(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["kloosterman", "--c-max", "3", "--m-max", "1", "--n-max", "1", "--out", str(out)]) == 0
    assert [r["c"] for r in read_csv(out)] == ["1", "2", "3"]
    out = tmp_path / "b.csv"
    assert main(["bessel", "--order", "21", "--x", "1608,30", "--oracle", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert all(float(r["difference"]) <= 1e-8 for r in rows)


def test_oscillatory_commands(tmp_path):
    out = tmp_path / "vw.csv"
    assert main(["oscillatory", "vw", "--k", "40", "--l", "10", "--x", "600", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["error"]) <= 1e-10
    assert list(row) == ["x", "abs_v", "abs_v_from_w", "abs_main", "error"]
    out = tmp_path / "dd.csv"
    assert main(["oscillatory", "ddtest", "--preset", "quadratic", "--scale", "100", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["ratio"]) <= 10


def test_resonance_commands(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["resonance", "scan", "--beta", "0.5", "--alpha-min", "1.9", "--alpha-max", "2.1",
                 "--steps", "5", "--x", "1024", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["alpha", "re", "im", "abs"] and len(rows) == 5
    out = tmp_path / "f.csv"
    assert main(["resonance", "fit", "--beta", "0.5", "--alpha", "2", "--xs", "256,512,1024,2048",
                 "--out", str(out)]) == 0
    assert len(read_csv(out)) == 4


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    out1 = tmp_path / "a.csv"
    assert main(["petersson", "--weight", "12", "--max-mn", "3", "--dump-config", str(cfg), "--out", str(out1)]) == 0
    text = cfg.read_text()
    assert "command = petersson verify" in text and "weight = 12" in text
    out2 = tmp_path / "b.csv"
    assert main(["--config", str(cfg), "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
    out3 = tmp_path / "c.csv"
    assert main(["--config", str(cfg), "--max-mn", "2", "--out", str(out3)]) == 0
    assert len(read_csv(out3)) == 4


def test_threads_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["kloosterman", "--c-max", "30", "--m-max", "3", "--n-max", "3"]
    assert main(base + ["--threads", "1", "--out", str(a)]) == 0
    assert main(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_render_formats():
    out = Output(["x", "y"], [(1, 0.1)])
    assert render(out, "csv") == "x,y\n1,1.0000000000000001e-01\n"
    assert json.loads(render(out, "json")) == [{"x": 1, "y": 0.1}]
    out = Output(payload={"a": {"b": 2.5}, "c": True})
    assert render(out, "csv").splitlines() == ["key,value", "a.b,2.5000000000000000e+00", "c,true"]


def test_run_returns_codes():
    assert run(ExperimentConfig("bessel", {"order": 1, "x": 1.0})) == 0
    assert run(ExperimentConfig("bessel", {"order": 1})) == 2
    assert run(ExperimentConfig("bessel", {"order": 1, "x": 1.0, "colour": "red"})) == 2


values = st.one_of(
    st.integers(-10**12, 10**12),
    st.floats(allow_nan=False, allow_infinity=False),
    st.booleans(),
    st.text(alphabet="abcdefghij_", min_size=1, max_size=8).filter(lambda s: s not in ("true", "false")),
    st.lists(st.floats(allow_nan=False, allow_infinity=False), max_size=4),
)


@given(st.dictionaries(st.text(alphabet="abcdefgh_", min_size=1, max_size=6), values, max_size=6),
       st.sampled_from(["csv", "json"]), st.integers(1, 64))
@settings(max_examples=100)
def test_config_round_trip(params, fmt, threads):
    cfg = ExperimentConfig("resonance scan", params, fmt, threads)
    back = ExperimentConfig.loads(cfg.dumps())
    assert back == cfg


def test_parse_value():
    assert parse_value("1,2.5") == [1, 2.5]
    assert parse_value("3,") == [3]
    assert parse_value("true") is True
    assert format_value([2.0]).endswith(",")
