import json
import subprocess
import sys

import pytest

from squidprob.cli import main


@pytest.fixture(scope="module")
def cache_env(tmp_path_factory):
    d = tmp_path_factory.mktemp("caches")
    mp = pytest.MonkeyPatch()
    mp.setenv("SQUID_CACHE_DIR", str(d))
    assert main(["enumerate"]) == 0
    assert main(["enumerate", "--buffered"]) == 0
    yield d
    mp.undo()


def test_enumerate_prints_counts(cache_env, capsys, tmp_path):
    assert main(["enumerate", "--buffered", "--out", str(tmp_path / "b.sqws")]) == 0
    assert capsys.readouterr().out.strip() == "6406464"
    assert main(["enumerate", "--out", str(tmp_path / "s.sqws")]) == 0
    assert capsys.readouterr().out.strip() == "28876784"
    manifest = json.loads((tmp_path / "s.sqws.manifest.json").read_text())
    assert manifest["parameters"]["labelled_count"] == 28876784
    assert manifest["outputs"] == [str(tmp_path / "s.sqws")]


def test_enumerate_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["enumerate", "--buffered", "--out", str(blocker / "x.sqws")]) == 2


def test_heatmap_csv_sums_to_thirteen(cache_env, tmp_path):
    out = tmp_path / "h.csv"
    assert main(["heatmap", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    values = [float(v) for r in rows for v in r.split(",")]
    assert len(values) == 64
    assert abs(sum(values) - 13) < 1e-9
    assert (tmp_path / "h.csv.manifest.json").exists()


def test_heatmap_buffered_centre_and_pgm(cache_env, tmp_path, capsys):
    assert main(["heatmap", "--buffered"]) == 0
    grid = [[float(v) for v in r.split(",")] for r in capsys.readouterr().out.splitlines()[1:]]
    assert grid[3][3] < max(max(r) for r in grid)
    out = tmp_path / "h.pgm"
    assert main(["heatmap", "--buffered", "--format", "pgm", "--scope", "5", "--out", str(out)]) == 0
    tokens = out.read_text().split()
    assert tokens[:4] == ["P2", "8", "8", "255"] and max(map(int, tokens[4:])) == 255


def test_heatmap_cache_mismatch(cache_env, capsys):
    standard = cache_env / "arrangements-standard.sqws"
    assert main(["heatmap", "--buffered", "--cache", str(standard)]) == 2
    assert "buffered" in capsys.readouterr().err


def test_missing_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SQUID_CACHE_DIR", str(tmp_path))
    assert main(["heatmap"]) == 2


def test_strategy_dump(cache_env, capsys):
    assert main(["strategy-dump", "--strategy", "diagonal"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "shot,cell" and len(lines) == 65
    assert lines[1] == '1,"0,4"'
    assert main(["strategy-dump", "--strategy", "completely-random", "--seed", "4"]) == 0
    first = capsys.readouterr().out
    assert main(["strategy-dump", "--strategy", "completely-random", "--seed", "4"]) == 0
    assert capsys.readouterr().out == first


def test_simulate_is_byte_reproducible(cache_env, tmp_path, capsys):
    args = ["simulate", "--strategy", "diagonal", "--games", "50000", "--seed", "42"]
    assert main(args + ["--out", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "3"]) == 0
    for name in ("summary.json", "raw.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["t1"]["max"] == 12
    assert summary["seed"] == 42 and summary["n_games"] == 50000
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["seed"] == 42 and manifest["parameters"]["strategy"] == "diagonal"


def test_simulate_unknown_strategy(capsys):
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--strategy", "zigzag"])
    assert err.value.code == 1


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--strategy", "diagonal", "--games", "0"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 1


def test_pi_and_report_from_runs(cache_env, tmp_path, capsys):
    runs = []
    for kind in ("completely-random", "regular", "diagonal", "smart-diagonal"):
        for seed in (1, 2):
            d = tmp_path / f"{kind}-{seed}"
            assert main(["simulate", "--strategy", kind, "--buffered", "--games", "20000",
                         "--seed", str(seed), "--out", str(d)]) == 0
            runs.append(str(d))
    capsys.readouterr()
    assert main(["pi", "--losing", runs[0], "--winning", runs[1], "--delta", "0", "3.06"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["estimates"][0]["value"] >= doc["estimates"][1]["value"]
    assert main(["pi", "--losing", runs[0], "--winning", runs[0]]) == 1

    out = tmp_path / "report"
    assert main(["report", "--runs", *runs, "--out", str(out)]) == 0
    data = json.loads((out / "report.json").read_text())
    assert data["command_survival"] == 0.5
    for name in ("inputs.csv", "elimination_delta-0.csv", "elimination_delta-1.6.csv",
                 "elimination_delta-3.06.csv", "elimination_delta-sampled.csv", "manifest.json"):
        assert (out / name).exists()
    for row in data["rows"]:
        if row["strategy"] == "completely-random":
            pis = {r["delta"]: r["pi"] for r in data["rows"]
                   if r["strategy"] == row["strategy"] and r["buffered"] == row["buffered"]}
            assert pis["0"] >= pis["1.6"] >= pis["3.06"]
    last = (out / "elimination_delta-0.csv").read_text().splitlines()[-1]
    assert last.startswith("any,command,0.500000")

    assert main(["report", "--runs", *runs[:-2], "--out", str(tmp_path / "r2")]) == 2
    assert main(["report", "--runs", *runs[:-1], "--out", str(tmp_path / "r3")]) == 2


def test_full_report_run(cache_env, tmp_path):
    out = tmp_path / "full"
    assert main(["report", "--games", "5000", "--seed", "3", "--out", str(out)]) == 0
    rows = json.loads((out / "report.json").read_text())["rows"]
    assert {(r["strategy"], r["buffered"]) for r in rows} == {
        (k, b) for k in ("completely-random", "regular", "diagonal", "smart-diagonal")
        for b in (True, False)}


def test_hopscotch(capsys, tmp_path):
    assert main(["hopscotch", "--steps", "17", "--fail-denominator", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "k,first_crosser,survival"
    assert out[18] == "18,7.62939453125e-06,1"
    assert out[-1] == "expected first crosser: 9.5"
    assert main(["hopscotch", "--steps", "0"]) == 1
    assert main(["hopscotch", "--out", str(tmp_path / "h.csv"), "--chart"]) == 0
    assert (tmp_path / "h.csv").read_text().startswith("k,first_crosser,survival\n")


def test_sink_table(capsys):
    assert main(["sink-table"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "0,1/4 (0.2500),1/6 (0.1667),1/10 (0.1000)"
    assert lines[-1] == "mean,3/2 (1.50),14/9 (1.56),8/5 (1.60)"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "squidprob", "hopscotch", "--steps", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "expected first crosser: 2.5" in res.stdout
