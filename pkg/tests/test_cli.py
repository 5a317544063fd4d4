import json

import pytest

from stackdist.cli import main, parse_int_values


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_int_values():
    assert parse_int_values("7") == [7]
    assert parse_int_values("2,3") == [2, 3]
    assert parse_int_values("2..4") == [2, 3, 4]
    assert parse_int_values("2..3,7") == [2, 3, 7]
    assert parse_int_values("3,3") == [3]


def test_count_full_row(capsys):
    code, out, _ = run(capsys, "count", "--k", "2", "--tau", "3", "--n", "9")
    assert code == 0
    assert out == "n,t,count\n9,0,1\n9,1,1\n"


def test_count_single_t(capsys):
    code, out, _ = run(capsys, "count", "--k", "2", "--tau", "3", "--n", "9", "--t", "2")
    assert code == 0
    assert out == "n,t,count\n9,2,0\n"


def test_count_range_and_json(capsys):
    code, out, _ = run(
        capsys, "count", "--k", "2", "--tau", "3", "--n", "5..6", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == [
        {"n": 5, "t": 0, "count": "1"},
        {"n": 6, "t": 0, "count": "1"},
    ]


def test_dist_output(capsys):
    code, out, _ = run(capsys, "dist", "--k", "2", "--tau", "3", "--n", "9")
    assert code == 0
    assert out == "t,probability_num,probability_den,float\n0,1,2,0.5\n1,1,2,0.5\n"


def test_dist_single_row(capsys):
    code, out, _ = run(capsys, "dist", "--k", "2", "--tau", "3", "--n", "5")
    assert code == 0
    assert out.splitlines()[1:] == ["0,1,1,1.0"]


def test_dist_float_column_sums_to_one(capsys):
    code, out, _ = run(capsys, "dist", "--k", "3", "--tau", "3", "--n", "30")
    assert code == 0
    floats = [float(line.split(",")[3]) for line in out.splitlines()[1:]]
    assert abs(sum(floats) - 1.0) < 1e-12


def test_clt_json(capsys):
    code, out, _ = run(capsys, "clt", "--k", "3", "--tau", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["verified_regime"] is True
    assert abs(payload["mu"] - 0.115473) < 5e-6
    assert payload["residual"] <= 1e-13


def test_clt_unverified_flag(capsys):
    code, out, _ = run(capsys, "clt", "--k", "12", "--tau", "3")
    assert code == 0
    assert json.loads(out)["verified_regime"] is False


def test_table1_block(capsys):
    code, out, err = run(capsys, "table1", "--k", "3..4", "--tau", "3..4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,tau,mu,sigma2,mu_ref,sigma2_ref,mu_dev,sigma2_dev,anomalous"
    assert len(lines) == 5
    assert all(line.endswith(",0") for line in lines[1:])


def test_table1_flags_anomalies(capsys):
    code, out, err = run(capsys, "table1", "--k", "2", "--tau", "3")
    assert code == 0
    assert out.splitlines()[1].endswith(",1")
    assert "computed values take precedence" in err


def test_series_dump(capsys):
    code, out, _ = run(capsys, "series-dump", "--k", "2", "--tau", "3", "--n-max", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,coefficient"
    assert lines[1] == "0,1"
    assert lines[10] == "9,2"


def test_series_dump_bivariate(capsys):
    code, out, _ = run(
        capsys, "series-dump", "--k", "2", "--tau", "3", "--n-max", "10", "--bivariate"
    )
    assert code == 0
    assert "9,1,1" in out.splitlines()


def test_verify_oracle_passes(capsys):
    code, out, _ = run(
        capsys, "verify", "oracle", "--k", "2", "--tau", "3", "--n-max", "9"
    )
    assert code == 0
    assert "PASS suite=oracle" in out
    assert "realize minimum arc length 4" in out


def test_verify_oracle_fails_under_other_convention(capsys):
    code, out, _ = run(
        capsys,
        "verify", "oracle", "--k", "2", "--tau", "3", "--n-max", "9",
        "--lambda-min", "5",
    )
    assert code == 1
    assert "FAIL" in out


def test_verify_series(capsys):
    code, out, _ = run(
        capsys,
        "verify", "series", "--k", "2", "--tau", "3", "--n-max", "16",
        "--bivariate-n-max", "12",
    )
    assert code == 0
    assert "PASS suite=series" in out


def test_verify_identities(capsys):
    code, out, _ = run(
        capsys, "verify", "identities", "--k", "2", "--tau", "3", "--n-max", "12"
    )
    assert code == 0
    assert "PASS suite=identities" in out


def test_verify_normal(capsys):
    code, out, _ = run(
        capsys, "verify", "normal", "--k", "3", "--tau", "3", "--n", "30,60"
    )
    assert code == 0
    assert "PASS suite=normal" in out


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["count", "--k", "2", "--tau", "3"])  # missing --n
    assert excinfo.value.code == 2


def test_invalid_parameter_exit_code(capsys):
    code, _, err = run(capsys, "count", "--k", "1", "--tau", "3", "--n", "5")
    assert code == 2
    assert "error:" in err


def test_multiple_k_rejected_for_single_commands(capsys):
    code, _, err = run(capsys, "dist", "--k", "2,3", "--tau", "3", "--n", "9")
    assert code == 2


def test_cache_requires_directory(capsys):
    code, _, err = run(capsys, "cache", "info")
    assert code == 2
    assert "cache directory" in err


def test_cache_info_and_clear(tmp_path, capsys):
    cache_dir = str(tmp_path / "cache")
    code, out, _ = run(
        capsys, "count", "--k", "3", "--tau", "3", "--n", "12",
        "--cache-dir", cache_dir,
    )
    assert code == 0
    code, out, _ = run(capsys, "cache", "info", "--cache-dir", cache_dir)
    assert code == 0
    assert "matchings_k3.cache" in out
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", cache_dir)
    assert code == 0
    assert "removed 1" in out


def test_cache_env_fallback(tmp_path, capsys, monkeypatch):
    cache_dir = tmp_path / "envcache"
    monkeypatch.setenv("STACKDIST_CACHE", str(cache_dir))
    code, _, _ = run(capsys, "count", "--k", "2", "--tau", "3", "--n", "10")
    assert code == 0
    assert (cache_dir / "matchings_k2.cache").exists()


def test_outputs_are_deterministic(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    for out in (out_a, out_b):
        code, _, _ = run(
            capsys, "dist", "--k", "2", "--tau", "3", "--n", "15", "--out", str(out)
        )
        assert code == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["command"] == "dist"
    assert meta["version"]


def test_warm_cache_identical_output(tmp_path, capsys):
    cache_dir = str(tmp_path / "cache")
    args = ("dist", "--k", "3", "--tau", "3", "--n", "24", "--cache-dir", cache_dir)
    code, cold, _ = run(capsys, *args)
    assert code == 0
    code, warm, _ = run(capsys, *args)
    assert code == 0
    assert cold == warm


def test_fig1_csv_and_figure(tmp_path, capsys):
    out = tmp_path / "law.csv"
    fig = tmp_path / "law.png"
    code, _, _ = run(
        capsys,
        "fig1", "--k", "3", "--tau", "3", "--n", "30",
        "--out", str(out), "--fig", str(fig),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,exact_pmf,normal_pmf"
    assert fig.stat().st_size > 0


def test_dist_figure(tmp_path, capsys):
    fig = tmp_path / "dist.png"
    code, _, _ = run(
        capsys, "dist", "--k", "2", "--tau", "3", "--n", "20", "--fig", str(fig)
    )
    assert code == 0
    assert fig.stat().st_size > 0


def test_table1_figure(tmp_path, capsys):
    fig = tmp_path / "grid.png"
    code, _, _ = run(
        capsys, "table1", "--k", "2..3", "--tau", "3..4", "--fig", str(fig)
    )
    assert code == 0
    assert fig.stat().st_size > 0
