import csv
import io
import json
import math

import pytest

from pvssd import cli, ssd

NORMAL = ["--family", "normal", "--mean-s2", "3.0", "--sd-s2", "1.5", "--sd-mu", "1.0", "--mu0", "3.5"]
POISSON = ["--family", "poisson", "--mean", "2.5", "--sd", "1.0"]


def run(argv):
    buf = io.StringIO()
    code = cli.main(argv, stdout=buf)
    return code, buf.getvalue()


def read_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


def test_ssd_marked_prior():
    code, out = run(["ssd", *NORMAL, "--eps", "20sec", "--k", "2"])
    assert code == 0
    assert "n = 49" in out
    assert "asymptotic n = 54.0000" in out
    assert "note:" not in out


def test_ssd_apvc_boundary_note():
    for flags in (["--k", "0"], ["--criterion", "apvc"]):
        code, out = run(["ssd", *NORMAL, "--eps", "20sec", *flags])
        assert code == 0 and "n = 25" in out
        assert "non-strict one would return 24" in out


def test_ssd_native_hyperparameters():
    code, out = run(["ssd", "--family", "poisson", "--alpha", "6.25", "--beta", "2.5", "--eps", "0.3"])
    assert code == 0 and "n = 47" in out
    code, out = run(["ssd", "--family", "binary", "--a", "1", "--b", "1", "--eps", "0.1", "--k", "0"])
    assert code == 0 and "n = " in out


@pytest.mark.parametrize(
    "argv",
    [
        ["ssd", *NORMAL, "--eps", "0"],
        ["ssd", *NORMAL, "--eps", "3 hours"],
        ["ssd", *NORMAL],
        ["ssd", "--family", "poisson", "--mean", "2.5", "--eps", "0.3"],
        ["ssd", "--family", "gamma", "--mean", "1", "--sd", "1", "--eps", "0.3"],
        ["ssd", *POISSON, "--eps", "0.3", "--unknown"],
        ["sweep", *POISSON, "--eps", "0.3", "--axis1", "mean:1:5:3"],
        ["sweep", *POISSON, "--eps", "0.3", "--axis1", "mean_s2:1:5:3", "--axis2", "sd:0.1:2:3"],
        ["sweep", *POISSON, "--eps", "0.3", "--axis1", "mean:1:5", "--axis2", "sd:0.1:2:3"],
        ["evaluate", *POISSON, "--eps", "0.3", "--truth", "1,2"],
        ["evaluate", *POISSON, "--eps", "0.3", "--truth", "songs"],
        ["asymptotics", *POISSON, "--region", "-1:3"],
        ["evaluate", *POISSON, "--eps", "0.3", "--seed", "-4"],
    ],
)
def test_config_errors(argv):
    assert run(argv)[0] == cli.EXIT_CONFIG


def test_data_errors(tmp_path):
    bad = tmp_path / "g.csv"
    bad.write_text("goals\n1\n-1\n")
    base = ["evaluate", *POISSON, "--eps", "0.3", "--column", "goals", "--replicates", "10"]
    assert run([*base, "--data", str(bad)])[0] == cli.EXIT_DATA
    assert run([*base, "--data", str(tmp_path / "missing.csv")])[0] == cli.EXIT_DATA
    small = tmp_path / "s.csv"
    small.write_text("goals\n1\n2\n")
    assert run([*base, "--data", str(small), "--without-replacement"])[0] == cli.EXIT_DATA


def test_budget_error(monkeypatch):
    monkeypatch.setattr(ssd, "search_cap", lambda model, spec: 10)
    assert run(["ssd", *POISSON, "--eps", "0.1"])[0] == cli.EXIT_BUDGET


def test_sweep_rows_and_na(tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run(["sweep", "--family", "bernoulli", "--mean", "0.5", "--eps", "0.05",
                   "--axis1", "mean:0.5:0.5:1", "--axis2", "sd:0.1:0.6:2", "-o", str(out)])
    assert code == 0
    rows = read_csv(out.read_text())
    assert rows[0]["n"] != "NA"
    assert rows[1]["n"] == "NA" and rows[1]["reason"]


def test_sweep_k_zero_nearly_flat_in_sd():
    def spread(k):
        _, out = run(["sweep", *POISSON, "--eps", "0.3", "--k", k, "--axis1", "mean:1:5:3", "--axis2", "sd:1:2:3"])
        rows = read_csv(out)
        return [max(ns) - min(ns) for ns in ([int(r["n"]) for r in rows if r["mean"] == m] for m in ("1.0", "3.0", "5.0"))]

    # APVC moves by at most the prior rate m/s^2 across sd; VPVC grows with gamma
    for flat, steep in zip(spread("0"), spread("2")):
        assert flat * 4 < steep


def test_provenance_header():
    _, out = run(["sweep", *NORMAL, "--eps", "20sec", "--axis1", "mean_s2:1:6:2", "--axis2", "sd_s2:0.5:2:2"])
    header = [l for l in out.splitlines() if l.startswith("#")]
    assert header[0] == "# pvssd: 0.1.0"
    assert any(l.startswith("# config_hash: ") for l in header)
    assert "# eps_unit: min" in header and "# eps_input: 20sec" in header


EVAL = ["evaluate", *POISSON, "--eps", "0.3", "--truth", "football", "--replicates", "500",
        "--axis1", "mean:1:5:3", "--axis2", "sd:0.1:2:3"]


def test_rerun_is_byte_identical_and_thread_independent(tmp_path):
    paths = [tmp_path / f"r{i}.csv" for i in range(3)]
    run([*EVAL, "--seed", "7", "-o", str(paths[0])])
    run([*EVAL, "--seed", "7", "-o", str(paths[1])])
    run([*EVAL, "--seed", "7", "--threads", "4", "-o", str(paths[2])])
    texts = [p.read_bytes() for p in paths]
    assert texts[0] == texts[1] == texts[2]


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "7")
    _, env_out = run(EVAL)
    monkeypatch.delenv(cli.SEED_ENV)
    _, flag_out = run([*EVAL, "--seed", "7"])
    _, other = run([*EVAL, "--seed", "8"])
    assert env_out == flag_out != other


def test_json_matches_csv(tmp_path):
    run([*EVAL, "-o", str(tmp_path / "a.csv")])
    run([*EVAL, "-o", str(tmp_path / "a.json")])
    rows = read_csv((tmp_path / "a.csv").read_text())
    lines = (tmp_path / "a.json").read_text().splitlines()
    prov = json.loads(lines[0])["provenance"]
    objs = [json.loads(l) for l in lines[1:]]
    assert prov["seed"] == 0 and len(objs) == len(rows)
    for r, o in zip(rows, objs):
        for key, v in o.items():
            if isinstance(v, float):
                assert float(r[key]) == pytest.approx(v, rel=1e-15)
            elif v is None:
                assert r[key] == "NA"
            else:
                assert str(v) == r[key]


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(
        "[DEFAULT]\nfamily = normal\nmean-s2 = 3.0\nsd_s2 = 1.5\nsd-mu = 1.0\n\n[ssd]\neps = 20sec\nk = 0\n"
    )
    assert "n = 25" in run(["ssd", "--config", str(cfg)])[1]
    assert "n = 49" in run(["ssd", "--config", str(cfg), "--k", "2"])[1]
    cfg.write_text("[ssd]\nfamily = normal\nnonsense = 1\n")
    assert run(["ssd", "--config", str(cfg)])[0] == cli.EXIT_CONFIG
    assert run(["ssd", "--config", str(tmp_path / "none.ini")])[0] == cli.EXIT_CONFIG


def test_asymptotics_football():
    code, out = run(["asymptotics", *POISSON, "--truth", "2.71", "--eps", "0.3"])
    assert code == 0
    assert "gamma = 0.4" in out and "k* = 0.21" in out and "n_asymptotic = 50" in out


def test_asymptotics_music_bound_and_clamp(tmp_path):
    _, out = run(["asymptotics", *NORMAL, "--truth", "songs"])
    assert "k* = 0.7" in out and "k* upper bound = 1 on [1.5, 4.5]" in out
    _, out = run(["asymptotics", *POISSON, "--truth", "2.0"])
    assert "k* = 0 " in out
    path = tmp_path / "a.json"
    run(["asymptotics", *NORMAL, "--width", "2", "-o", str(path)])
    row = json.loads(path.read_text().splitlines()[1])
    assert row["k_star_upper_bound"] == pytest.approx(2.0)


def test_evaluate_single_and_exceedance(tmp_path):
    code, out = run(["evaluate", *NORMAL, "--eps", "20sec", "--truth", "4.17,4.05", "--replicates", "2000"])
    row = read_csv(out)[0]
    assert code == 0 and row["n"] == "49" and 0 <= float(row["rate"]) <= 1
    code, out = run(["evaluate", *POISSON, "--experiment", "exceedance", "--truth", "2.71",
                     "--k-list", "0.06,0.36", "--n-list", "100,10000", "--replicates", "2000"])
    rows = read_csv(out)
    assert code == 0 and len(rows) == 4
    assert run(["evaluate", *POISSON, "--experiment", "exceedance", "--truth", "2.71"])[0] == cli.EXIT_CONFIG


def test_evaluate_eps_sweep():
    code, out = run(["evaluate", *NORMAL, "--truth", "songs", "--experiment", "eps-sweep", "--eps-list", "30sec,10sec",
                     "--axis1", "mean_s2:1:6:2", "--axis2", "sd_s2:0.25:3:2", "--replicates", "200"])
    rows = read_csv(out)
    assert code == 0 and len(rows) == 8
    assert {float(r["epsilon"]) for r in rows} == {0.5, 1 / 6}
    assert run(["evaluate", *NORMAL, "--truth", "songs", "--experiment", "eps-sweep", "--eps-list", "10sec,30sec",
                "--axis1", "mean_s2:1:6:2", "--axis2", "sd_s2:0.25:3:2"])[0] == cli.EXIT_CONFIG


def test_evaluate_empirical_source(tmp_path):
    data = tmp_path / "goals.csv"
    assert run(["surrogate", "--family", "count", "--seed", "3", "--column", "goals", "-o", str(data)])[0] == 0
    code, out = run(["evaluate", *POISSON, "--eps", "0.3", "--data", str(data), "--column", "goals", "--replicates", "300"])
    assert code == 0 and "empirical:goals:with-replacement" in out


def test_coverage_single_huge_k():
    code, out = run(["coverage", *POISSON, "--eps", "0.3", "--k", "100", "--n", "20", "--replicates", "500"])
    assert code == 0 and float(read_csv(out)[0]["rate"]) == 1.0


def test_surrogate_stdout_and_reload(tmp_path):
    code, out = run(["surrogate", "--family", "continuous", "--size", "50", "--seed", "1"])
    assert code == 0
    p = tmp_path / "s.csv"
    p.write_text(out)
    from pvssd.ingest import load_csv

    ds = load_csv(p, "value", "continuous")
    assert ds.n == 50 and math.isfinite(ds.mean)
    assert run(["surrogate", "--family", "bernoulli", "--truth", "0.3"])[0] == cli.EXIT_CONFIG


def test_version_and_help():
    assert run(["--version"])[0] == 0
    assert run(["ssd", "--help"])[0] == 0
