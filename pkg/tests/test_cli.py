import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from twistmoments.cli import (ConfigError, RunConfig, load_form_spec, main,
                              parse_keyvalue_file)

FORM_TEXT = "weight=2\nlevel=11\ncurve=0,-1,1,-10,-20\nbad_ap=11:1\nfricke_eta=-1\n"


@pytest.fixture()
def form_file(tmp_path):
    path = tmp_path / "form11.txt"
    path.write_text(FORM_TEXT)
    return str(path)


def run_cli(args):
    return main(list(args))


class TestConfig:
    def test_unknown_key_near_miss(self, form_file, tmp_path, capsys):
        rc = run_cli(["scan-moment", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "treads=2"])
        assert rc == 2
        assert "did you mean 'threads'" in capsys.readouterr().err

    def test_unknown_command_key(self, tmp_path, capsys):
        rc = run_cli(["gauss-verify", "--out-dir", str(tmp_path), "--set", "frobnicate=1"])
        assert rc == 2

    def test_missing_out_dir(self, capsys, monkeypatch):
        monkeypatch.delenv("TWISTMOMENTS_OUT_DIR", raising=False)
        rc = run_cli(["gauss-verify"])
        assert rc == 2
        assert "out_dir" in capsys.readouterr().err

    def test_env_out_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TWISTMOMENTS_OUT_DIR", str(tmp_path / "envout"))
        rc = run_cli(["gauss-verify", "--set", "n_max=9"])
        assert rc == 0
        assert (tmp_path / "envout" / "gauss.csv").exists()

    def test_config_file_layering(self, form_file, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"form={form_file}\nout_dir={tmp_path / 'a'}\nn_max=9\n")
        rc = run_cli(["gauss-verify", "--config", str(cfg),
                      "--out-dir", str(tmp_path / "b")])
        assert rc == 0
        assert (tmp_path / "b" / "gauss.csv").exists()

    def test_malformed_set(self, tmp_path, capsys):
        rc = run_cli(["gauss-verify", "--out-dir", str(tmp_path), "--set", "nonsense"])
        assert rc == 2

    def test_form_unknown_key(self, tmp_path):
        path = tmp_path / "f.txt"
        path.write_text("weight=2\nlevel=11\ncurve=0,-1,1,-10,-20\nlevl=11\n")
        with pytest.raises(ConfigError, match="did you mean"):
            load_form_spec(str(path))

    def test_form_requires_source(self, tmp_path):
        path = tmp_path / "f.txt"
        path.write_text("weight=2\nlevel=11\n")
        with pytest.raises(ConfigError):
            load_form_spec(str(path))

    def test_keyvalue_parse_rejects_garbage(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("this is not a pair\n")
        with pytest.raises(ConfigError):
            parse_keyvalue_file(str(path))

    def test_build_rejects_unknown_command(self):
        with pytest.raises(ConfigError):
            RunConfig.build("frobnicate", [])


class TestCommands:
    def test_lvalue_json_shape(self, form_file, tmp_path):
        rc = run_cli(["lvalue", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "D=40"])
        assert rc == 0
        payload = json.loads((tmp_path / "lvalue.json").read_text())
        assert set(payload) == {"D", "omega", "lprime", "lvalue", "trunc_N", "tail_bound"}
        assert payload["omega"] == -1
        assert payload["lprime"] == pytest.approx(4.4657130913, abs=1e-7)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["command"] == "lvalue"
        assert manifest["config"]["D"] == "40"

    def test_lvalue_coprimality_exit_code(self, form_file, tmp_path, capsys):
        rc = run_cli(["lvalue", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "D=88"])
        assert rc == 2
        assert "shares a factor" in capsys.readouterr().err

    def test_gauss_verify_csv(self, tmp_path):
        rc = run_cli(["gauss-verify", "--out-dir", str(tmp_path), "--set", "n_max=49"])
        assert rc == 0
        lines = (tmp_path / "gauss.csv").read_text().splitlines()
        assert lines[0] == "k,n,closed_re,closed_im,brute_re,brute_im,abs_err"
        rows = [line.split(",") for line in lines[1:]]
        assert all(float(r[6]) <= 1e-9 * int(r[1]) for r in rows)

    def test_poisson_verify_csv(self, tmp_path):
        rc = run_cli(["poisson-verify", "--out-dir", str(tmp_path),
                      "--set", "n_max=5", "--set", "x_list=200", "--set", "bumps=g_infinity"])
        assert rc == 0
        lines = (tmp_path / "poisson.csv").read_text().splitlines()
        assert lines[0] == "n,X,lhs,rhs,residual,tail_estimate"
        assert all(float(line.split(",")[4]) <= 1e-6 for line in lines[1:])

    def test_partition_verify(self, tmp_path):
        rc = run_cli(["partition-verify", "--out-dir", str(tmp_path)])
        assert rc == 0
        text = (tmp_path / "partition.csv").read_text()
        assert "FAIL" not in text

    def test_sieve_diagnostic(self, form_file, tmp_path):
        rc = run_cli(["sieve-diagnostic", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "m_list=50", "--set", "n_list=50", "--set", "t_list=0,5"])
        assert rc == 0
        lines = (tmp_path / "sieve.csv").read_text().splitlines()
        assert lines[0] == "M,N,t,lhs,bound_shape,ratio"
        assert len(lines) == 3

    def test_scan_moment_small(self, form_file, tmp_path):
        rc = run_cli(["scan-moment", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "x_grid=500,1000"])
        assert rc == 0
        lines = (tmp_path / "scan.csv").read_text().splitlines()
        assert lines[0].startswith("X,family_size,n_omega_minus,S1,S2,ratio_log3,"
                                   "cs_lower_bound,N_X")
        assert len(lines) == 3
        assert (tmp_path / "ratio_log3.dat").exists()
        assert (tmp_path / "timings.csv").exists()
        # timings stay out of the data files
        assert "wall" not in lines[0]

    def test_nonvanishing_json(self, form_file, tmp_path):
        rc = run_cli(["nonvanishing", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "X=1000"])
        assert rc == 0
        payload = json.loads((tmp_path / "nonvanishing.json").read_text())
        assert payload["N_X"] >= payload["cs_lower_bound"]
        assert payload["vanish_eps"] > payload["certified_floor"]

    def test_nonvanishing_floor_rejected(self, form_file, tmp_path, capsys):
        rc = run_cli(["nonvanishing", "--form", form_file, "--out-dir", str(tmp_path),
                      "--set", "X=1000", "--set", "vanish_eps=1e-9"])
        assert rc == 2


class TestDeterminism:
    def test_rerun_from_manifest_byte_identical(self, form_file, tmp_path):
        out1 = tmp_path / "run1"
        rc = run_cli(["scan-moment", "--form", form_file, "--out-dir", str(out1),
                      "--set", "x_grid=500,1000", "--set", "threads=2"])
        assert rc == 0
        manifest = json.loads((out1 / "manifest.json").read_text())
        manifest["config"]["out_dir"] = str(tmp_path / "run2")
        patched = tmp_path / "patched_manifest.json"
        patched.write_text(json.dumps(manifest))
        rc = run_cli(["rerun", str(patched)])
        assert rc == 0
        for name in ("scan.csv", "ratio_log3.dat"):
            assert (out1 / name).read_bytes() == (tmp_path / "run2" / name).read_bytes()

    def test_gauss_rerun_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(["gauss-verify", "--out-dir", str(a), "--set", "n_max=25"]) == 0
        assert run_cli(["gauss-verify", "--out-dir", str(b), "--set", "n_max=25"]) == 0
        assert (a / "gauss.csv").read_bytes() == (b / "gauss.csv").read_bytes()


def test_console_entry_point():
    result = subprocess.run([sys.executable, "-m", "twistmoments", "--help"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    for name in ("lvalue", "scan-moment", "nonvanishing", "gauss-verify",
                 "poisson-verify", "partition-verify", "sieve-diagnostic"):
        assert name in result.stdout
