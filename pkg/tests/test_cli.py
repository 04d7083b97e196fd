import json
import subprocess
import sys

import numpy as np
import pytest

from qkr_detector import __version__
from qkr_detector.cli import main

TWO_PI = 2 * np.pi

ALPHA = 1 / np.sqrt(5)
BETA = 2 / np.sqrt(5)


def base_config(n_levels=128, t_max=60, **extra):
    cfg = {
        "K": 8.0,
        "epsilon": 0.3,
        "delta": 0.2,
        "n_levels": n_levels,
        "t_max": t_max,
        "qubit_init": [ALPHA, 0.0, BETA, 0.0],
        "detector_init": [np.pi, 0.0],
    }
    cfg.update(extra)
    return cfg


def run(tmp_path, command, config, out_name, threads=None):
    cfg_path = tmp_path / f"{command}_{out_name}.json"
    cfg_path.write_text(json.dumps(config))
    out_path = tmp_path / out_name
    argv = [command, "--config", str(cfg_path), "--out", str(out_path)]
    if threads is not None:
        argv += ["--threads", str(threads)]
    return main(argv), out_path


class TestEvolveOutput:
    def test_header_and_columns(self, tmp_path):
        code, out = run(tmp_path, "evolve", base_config(), "traj.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith(f"# qkr-detector v{__version__} config-sha=")
        assert lines[1] == ("t,re_rho01,im_rho01,abs_rho01,rho00,rho11,"
                            "p2,purity")
        assert len(lines) == 2 + 61
        first = lines[2].split(",")
        assert first[0] == "0"
        assert float(first[3]) == pytest.approx(0.4, abs=1e-12)

    def test_byte_identical_reruns(self, tmp_path):
        _, out1 = run(tmp_path, "evolve", base_config(), "a.csv")
        _, out2 = run(tmp_path, "evolve", base_config(), "b.csv")
        assert out1.read_bytes() == out2.read_bytes()

    def test_seventeen_digit_roundtrip(self, tmp_path):
        from qkr_detector import evolve
        _, out = run(tmp_path, "evolve", base_config(), "traj.csv")
        lines = out.read_text().splitlines()[2:]
        params = __import__("qkr_detector").SimParams.for_levels(
            128, K=8.0, epsilon=0.3, delta=0.2, t_max=60)
        traj = evolve(params, (ALPHA, BETA), (np.pi, 0.0))
        for t in (0, 17, 60):
            fields = lines[t].split(",")
            assert float(fields[1]) == traj.rho01[t].real
            assert float(fields[6]) == traj.p2[t]

    def test_hbar_must_match_levels(self, tmp_path):
        code, _ = run(tmp_path, "evolve", base_config(hbar=1e-3), "x.csv")
        assert code == 2


class TestConfigValidation:
    def test_unknown_key_rejected(self, tmp_path, capsys):
        code, _ = run(tmp_path, "evolve", base_config(epslion=0.3), "x.csv")
        assert code == 2
        err = json.loads(capsys.readouterr().err.strip())
        assert "epslion" in err["error"]

    def test_missing_key_rejected(self, tmp_path):
        cfg = base_config()
        del cfg["K"]
        code, _ = run(tmp_path, "evolve", cfg, "x.csv")
        assert code == 2

    def test_qubit_norm_tolerance(self, tmp_path, capsys):
        cfg = base_config()
        cfg["qubit_init"] = [ALPHA * (1 + 2e-7), 0.0, BETA, 0.0]
        code, _ = run(tmp_path, "evolve", cfg, "x.csv")
        assert code == 0
        assert "renormalized" in capsys.readouterr().err

    def test_qubit_norm_rejected(self, tmp_path):
        cfg = base_config()
        cfg["qubit_init"] = [0.9, 0.0, 0.9, 0.0]
        code, _ = run(tmp_path, "evolve", cfg, "x.csv")
        assert code == 2

    def test_epsilon_and_epsilon_c_conflict(self, tmp_path):
        code, _ = run(tmp_path, "evolve", base_config(epsilon_c=0.01), "x.csv")
        assert code == 2


class TestFit:
    def test_exp_fit_contract(self, tmp_path):
        cfg = base_config(n_levels=512, t_max=400)
        _, traj = run(tmp_path, "evolve", cfg, "traj.csv")
        code, out = run(tmp_path, "fit",
                        {"input": str(traj), "kind": "exp"}, "fit.json")
        assert code == 0
        fit = json.loads(out.read_text())
        for key in ("rate", "amplitude", "window_lo", "window_hi",
                    "rms_residual"):
            assert key in fit
        assert fit["rate"] > 0

    def test_sine_fit(self, tmp_path):
        cfg = base_config(n_levels=512, t_max=400)
        _, traj = run(tmp_path, "evolve", cfg, "traj.csv")
        code, out = run(tmp_path, "fit",
                        {"input": str(traj), "kind": "sine",
                         "freq_hint": 0.4}, "fit.json")
        assert code == 0
        fit = json.loads(out.read_text())
        assert fit["frequency"] == pytest.approx(0.4, rel=0.1)

    def test_residual(self, tmp_path):
        cfg = base_config(n_levels=128, t_max=800)
        _, traj = run(tmp_path, "evolve", cfg, "traj.csv")
        code, out = run(tmp_path, "fit",
                        {"input": str(traj), "kind": "residual",
                         "t_lo": 500, "t_hi": 800}, "res.json")
        assert code == 0
        value = json.loads(out.read_text())["value"]
        assert 0.3 / np.sqrt(256) < value < 3.0 / np.sqrt(256)

    def test_non_decaying_exits_3(self, tmp_path):
        cfg = base_config(epsilon=0.0, delta=0.0, t_max=100)
        _, traj = run(tmp_path, "evolve", cfg, "traj.csv")
        code, out = run(tmp_path, "fit",
                        {"input": str(traj), "kind": "exp"}, "fit.json")
        assert code == 3
        assert "error" in json.loads(out.read_text())

    def test_missing_column(self, tmp_path):
        cfg = base_config(t_max=60)
        _, traj = run(tmp_path, "evolve", cfg, "traj.csv")
        code, _ = run(tmp_path, "fit",
                      {"input": str(traj), "kind": "exp",
                       "column": "bogus"}, "fit.json")
        assert code == 2


class TestSweep:
    def test_contract_and_threads(self, tmp_path):
        cfg = base_config(n_levels=128, t_max=400,
                          vary="epsilon", values=[0.2, 0.3])
        del cfg["epsilon"]
        cfg["epsilon"] = 0.3
        code1, out1 = run(tmp_path, "sweep", cfg, "s1.csv", threads=1)
        code2, out2 = run(tmp_path, "sweep", cfg, "s2.csv", threads=2)
        assert code1 == code2
        lines = out1.read_text().splitlines()
        assert lines[1] == "value,gamma1,gamma2,flag"
        assert len(lines) == 2 + 2
        assert out1.read_text().splitlines()[2:] == \
            out2.read_text().splitlines()[2:]


class TestHusimi:
    def test_matrix_and_metadata(self, tmp_path):
        cfg = base_config(n_levels=128, t_max=4,
                          time=4, grid_theta=32, grid_p=16, component="up")
        code, out = run(tmp_path, "husimi", cfg, "h.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        rows = [ln.split(",") for ln in lines[1:]]
        assert len(rows) == 16            # momentum rows
        assert all(len(r) == 32 for r in rows)
        meta = json.loads((tmp_path / "h.csv.meta.json").read_text())
        assert meta["m_theta"] == 32 and meta["m_p"] == 16
        assert meta["time"] == 4

    def test_eigenstate_mode(self, tmp_path):
        cfg = base_config(n_levels=128, t_max=2, time=2, grid_theta=16,
                          grid_p=16, component="down", mode="eigenstate")
        code, _ = run(tmp_path, "husimi", cfg, "h.csv")
        assert code == 0


class TestWd:
    def test_columns(self, tmp_path):
        cfg = base_config(n_levels=128, t_max=3, box_side=0.5,
                          grid_theta=32, grid_p=32)
        code, out = run(tmp_path, "wd", cfg, "wd.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "t,wd_up,wd_down"
        assert len(lines) == 2 + 4


class TestLyapunovCmd:
    def test_output(self, tmp_path):
        code, out = run(tmp_path, "lyapunov",
                        {"K_eff": 4.5, "n_orbits": 20, "n_steps": 2000,
                         "seed": 7}, "lyap.json")
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["lambda"] == pytest.approx(0.81, rel=0.2)
        assert payload["seed"] == 7


class TestChannelCmd:
    def test_map_kind(self, tmp_path):
        cfg = {"epsilon": 0.225, "delta": 0.2, "t_max": 50,
               "bloch_init": [0.8, 0.0, -0.6], "kind": "map"}
        code, out = run(tmp_path, "channel", cfg, "map.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "t,re_rho01,im_rho01,abs_rho01,rho00,rho11,purity"
        assert float(lines[2].split(",")[3]) == pytest.approx(0.4)

    def test_continuous_kind(self, tmp_path):
        cfg = {"epsilon": 0.225, "delta": 0.2, "t_max": 20,
               "bloch_init": [0.8, 0.0, -0.6], "kind": "continuous"}
        code, out = run(tmp_path, "channel", cfg, "cont.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "t,x,y,z,abs_rho01,rho11"


class TestFidelityCmd:
    def test_columns_and_initial_value(self, tmp_path):
        cfg = {"K": 4.5, "epsilon_c": 0.8, "delta": 0.01, "n_levels": 256,
               "t_max": 10, "detector_init": [np.pi, 0.0]}
        code, out = run(tmp_path, "fidelity", cfg, "f.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "t,re_f,im_f,abs_f"
        assert float(lines[2].split(",")[3]) == pytest.approx(1.0)


class TestConsoleEntryPoint:
    def test_subprocess_smoke(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"K_eff": 4.5, "n_orbits": 10,
                                   "n_steps": 1000, "seed": 1}))
        out = tmp_path / "l.json"
        proc = subprocess.run(
            [sys.executable, "-m", "qkr_detector.cli", "lyapunov",
             "--config", str(cfg), "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert out.exists()
