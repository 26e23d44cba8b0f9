import numpy as np
import pytest

from gfront.cli import main


def test_run_subcommand(tmp_path, capsys):
    rc = main([
        "run", "--model", "inviscid", "--A", "0", "--n", "32",
        "--t-max", "1.0", "--outdir", str(tmp_path),
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "s_T(window)=" in out
    assert (tmp_path / "run-inviscid-A0-d0-n32" / "series.csv").exists()


def test_run_config_file_with_flag_override(tmp_path, capsys):
    cfg_file = tmp_path / "base.txt"
    cfg_file.write_text("model = inviscid\nA = 0\nn = 32\nt_max = 0.5\n")
    rc = main([
        "run", "--config", str(cfg_file), "--t-max", "1.0",
        "--outdir", str(tmp_path),
    ])
    assert rc == 0
    saved = (tmp_path / "run-inviscid-A0-d0-n32" / "config.txt").read_text()
    assert "t_max = 1\n" in saved


def test_invalid_config_exits_2(tmp_path):
    rc = main([
        "run", "--model", "strain", "--scheme", "semi_implicit",
        "--n", "32", "--outdir", str(tmp_path),
    ])
    assert rc == 2


def test_sweep_empty_list(tmp_path):
    rc = main([
        "sweep", "--models", "inviscid", "--A-list", "", "--d-list", "0",
        "--n", "32", "--outdir", str(tmp_path),
    ])
    assert rc == 0
    assert (tmp_path / "sweep.csv").read_text().splitlines()[0].startswith("model,")


def test_sweep_runs_rows(tmp_path, capsys):
    rc = main([
        "sweep", "--models", "inviscid", "--A-list", "0,1", "--d-list", "0",
        "--n", "32", "--t-max", "0.5", "--outdir", str(tmp_path),
    ])
    assert rc == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 3


def test_corrector_subcommand(tmp_path, capsys):
    rc = main([
        "corrector", "--A-list", "0", "--d-list", "1", "--n", "32",
        "--outdir", str(tmp_path),
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "H=1" in out.replace("H=1.0000", "H=1")
    summary = (tmp_path / "corrector-summary.csv").read_text().splitlines()
    assert summary[0] == "A,d,grid,H_bar,iterations,converged,bound,guaranteed_regime"
    per_iter = tmp_path / "corrector-A0-d1-n32.csv"
    assert per_iter.exists()
    assert per_iter.read_text().splitlines()[0] == "k,H_k,grad_diff_norm,ratio,bound"


def test_corrector_outside_regime_labelled(tmp_path, capsys):
    rc = main([
        "corrector", "--A-list", "1", "--d-list", "0.2", "--n", "32",
        "--outdir", str(tmp_path),
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "outside guaranteed regime" in out


def test_reinit_demo(tmp_path, capsys):
    rc = main(["reinit-demo", "--n", "32", "--steps", "8", "--outdir", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "reinit-demo.csv").read_text().splitlines()
    assert lines[0] == "step,smooth_0,smooth_1,smooth_10"
    assert len(lines) == 10


def test_stretch_check(capsys):
    rc = main(["stretch-check"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
