"""End-to-end tests of the command-line interface."""

import csv
import json

import numpy as np
import pytest

from latticemc import cli, verify


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# ---------------------------------------------------------------------------
# free


def test_free_writes_padded_histogram_csv(tmp_path, capsys):
    out = tmp_path / "free.csv"
    code = cli.main([
        "free", "--n-particles", "2000", "--n-steps", "40", "--p", "0.2",
        "--seed", "7", "--xi0", "5", "--out", str(out),
    ])
    assert code == 0
    rows = read_rows(out)
    assert rows[0] == ["xi", "count", "frequency", "model_P"]
    assert len(rows) == 1 + 81  # every site in [xi0 - tau, xi0 + tau]
    xi = np.array([int(r[0]) for r in rows[1:]])
    counts = np.array([int(r[1]) for r in rows[1:]])
    assert xi[0] == 5 - 40 and xi[-1] == 5 + 40
    assert counts.sum() == 2000
    freq = np.array([float(r[2]) for r in rows[1:]])
    assert np.allclose(freq, counts / 2000.0, rtol=0, atol=1e-16)
    model = np.array([float(r[3]) for r in rows[1:]])
    assert model.sum() == pytest.approx(1.0, abs=1e-9)
    assert "free: N=2000 tau=40" in capsys.readouterr().out


def test_free_uniform_model_is_flat(tmp_path):
    out = tmp_path / "free.csv"
    assert cli.main([
        "free", "--n-particles", "500", "--n-steps", "30", "--seed", "1",
        "--out", str(out),
    ]) == 0
    rows = read_rows(out)
    model = np.array([float(r[3]) for r in rows[1:]])
    assert np.allclose(model, 1.0 / 61.0)


def test_free_same_seed_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["free", "--n-particles", "3000", "--n-steps", "50", "--seed", "11"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_free_threads_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["free", "--n-particles", "4001", "--n-steps", "50", "--seed", "12",
            "--shards", "4"]
    assert cli.main(base + ["--threads", "1", "--out", str(a)]) == 0
    assert cli.main(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_free_manifest_rerun_reproduces_outputs(tmp_path):
    out = tmp_path / "run.csv"
    js = tmp_path / "run.json"
    manifest = tmp_path / "run.manifest.json"
    assert cli.main([
        "free", "--n-particles", "2500", "--n-steps", "60", "--p", "-0.3",
        "--seed", "21", "--out", str(out), "--json", str(js),
        "--manifest", str(manifest),
    ]) == 0
    doc = json.loads(manifest.read_text())
    assert doc["tool"] == "latticemc" and doc["command"] == "free"

    redo = tmp_path / "redo"
    assert cli.main(["rerun", str(manifest), "--out-dir", str(redo)]) == 0
    assert (redo / "run.csv").read_bytes() == out.read_bytes()
    assert (redo / "run.json").read_bytes() == js.read_bytes()


# ---------------------------------------------------------------------------
# interfere


def test_interfere_two_slit_csv_and_json(tmp_path):
    out = tmp_path / "slit.csv"
    js = tmp_path / "slit.json"
    assert cli.main([
        "interfere", "--scenario", "two-slit", "--delta", "2",
        "--n-particles", "3000", "--n-steps", "60", "--seed", "2",
        "--out", str(out), "--json", str(js),
    ]) == 0
    rows = read_rows(out)
    assert rows[0] == ["xi", "count", "frequency", "model_P", "qm_oracle"]
    assert len(rows) == 1 + 123  # [-1 - tau, 1 + tau]
    counts = np.array([int(r[1]) for r in rows[1:]])
    assert counts.sum() == 3000
    model = np.array([float(r[3]) for r in rows[1:]])
    oracle = np.array([float(r[4]) for r in rows[1:]])
    assert np.abs(model - oracle).max() <= 1e-12

    doc = json.loads(js.read_text())
    assert doc["columns"] == ["xi", "count", "frequency", "model_P", "qm_oracle"]
    assert len(doc["rows"]) == 123
    assert doc["summary"]["scenario"] == "two-slit"


def test_interfere_explicit_sources(tmp_path):
    out = tmp_path / "tri.csv"
    assert cli.main([
        "interfere", "--scenario", "multi-slit",
        "--sources=-3:0.25,0:0.5,3:0.25",
        "--n-particles", "1000", "--n-steps", "40", "--seed", "3",
        "--out", str(out),
    ]) == 0
    rows = read_rows(out)
    assert int(rows[1][0]) == -43 and int(rows[-1][0]) == 43


def test_interfere_same_seed_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = [
        "interfere", "--scenario", "two-slit", "--n-particles", "2000",
        "--n-steps", "50", "--seed", "9", "--shards", "3",
    ]
    assert cli.main(argv + ["--threads", "1", "--out", str(a)]) == 0
    assert cli.main(argv + ["--threads", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_interfere_training_mode_is_sequential(tmp_path, capsys):
    out = tmp_path / "train.csv"
    diag = tmp_path / "diag.csv"
    assert cli.main([
        "interfere", "--scenario", "two-slit", "--mode", "training",
        "--n-particles", "50", "--n-steps", "30", "--seed", "4",
        "--threads", "8", "--out", str(out), "--diagnostics", str(diag),
    ]) == 0
    captured = capsys.readouterr()
    assert "training mode is sequential" in captured.err
    assert diag.exists()
    rows = read_rows(diag)
    assert rows[0] == ["emission", "source", "final_xi", "bosons_created", "final_p_eff"]
    assert len(rows) == 51


def test_interfere_ring_reports_lock(tmp_path, capsys):
    out = tmp_path / "ring.csv"
    assert cli.main([
        "interfere", "--scenario", "ring", "--ell", "10", "--p", "0.33",
        "--n-steps", "40000", "--seed", "5", "--out", str(out),
    ]) == 0
    rows = read_rows(out)
    assert rows[0] == ["pbar", "count", "frequency"]
    text = capsys.readouterr().out
    assert "target=0.4000" in text


def test_interfere_ring_needs_geometry(tmp_path, capsys):
    code = cli.main([
        "interfere", "--scenario", "ring", "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 2
    assert "needs --ell and --p" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# configuration file handling


def test_config_file_supplies_and_cli_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n-particles = 600\nn_steps = 40  # comment\nseed = 3\np = 0.1\n")
    out = tmp_path / "a.csv"
    assert cli.main(["free", "--config", str(cfg), "--out", str(out)]) == 0
    counts = sum(int(r[1]) for r in read_rows(out)[1:])
    assert counts == 600

    out2 = tmp_path / "b.csv"
    assert cli.main([
        "free", "--config", str(cfg), "--n-particles", "900", "--out", str(out2),
    ]) == 0
    counts2 = sum(int(r[1]) for r in read_rows(out2)[1:])
    assert counts2 == 900


def test_config_file_errors(tmp_path, capsys):
    bad_key = tmp_path / "bad.cfg"
    bad_key.write_text("n_particels = 100\n")
    assert cli.main(["free", "--config", str(bad_key), "--out", "x.csv"]) == 2
    assert "unknown config keys" in capsys.readouterr().err

    bad_value = tmp_path / "badval.cfg"
    bad_value.write_text("n_particles = lots\n")
    assert cli.main(["free", "--config", str(bad_value), "--out", "x.csv"]) == 2

    no_equals = tmp_path / "noeq.cfg"
    no_equals.write_text("just words\n")
    assert cli.main(["free", "--config", str(no_equals), "--out", "x.csv"]) == 2

    assert cli.main(["free", "--config", str(tmp_path / "missing.cfg"),
                     "--out", "x.csv"]) == 2


# ---------------------------------------------------------------------------
# exit codes


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        cli.main(["free", "--no-such-flag"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["interfere", "--mode", "annealed", "--out", "x.csv"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 1


def test_config_errors_exit_2(tmp_path, capsys):
    assert cli.main(["free", "--n-particles", "1000", "--n-steps", "30"]) == 2
    assert "missing required option --out" in capsys.readouterr().err
    assert cli.main([
        "free", "--p", "1.5", "--out", str(tmp_path / "x.csv"),
    ]) == 2
    assert cli.main([
        "free", "--n-particles", "0", "--out", str(tmp_path / "x.csv"),
    ]) == 2
    assert cli.main([
        "interfere", "--scenario", "two-slit", "--delta", "3",
        "--out", str(tmp_path / "x.csv"),
    ]) == 2


def test_verify_selected_suite_passes(capsys):
    assert cli.main(["verify", "--suite", "pmf"]) == 0
    out = capsys.readouterr().out
    assert "[pass]" in out and "checks passed" in out
    assert "[FAIL]" not in out


def test_verify_unknown_suite_exits_2(capsys):
    assert cli.main(["verify", "--suite", "astrology"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_failure_exits_3(monkeypatch, capsys):
    def forced_failure():
        return [verify.Check("synthetic", "forced", 1.0, 0.0, 0.1)]

    monkeypatch.setitem(verify._SUITES, "synthetic", forced_failure)
    assert cli.main(["verify", "--suite", "synthetic"]) == 3
    out = capsys.readouterr().out
    assert "[FAIL] synthetic/forced" in out
    assert "0/1 checks passed" in out


def test_rerun_rejects_bad_manifests(tmp_path, capsys):
    assert cli.main(["rerun", str(tmp_path / "nope.json")]) == 2
    not_json = tmp_path / "not.json"
    not_json.write_text("{broken")
    assert cli.main(["rerun", str(not_json)]) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"command": "dance", "params": {"x": 1}}))
    assert cli.main(["rerun", str(wrong)]) == 2
    capsys.readouterr()
