import csv
import json
import math
import subprocess
import sys

import pytest

from tjodba.cli import (DEFAULT_SEED, ConfigError, format_complex, jsonable, main, parse_range, parse_sectors,
                        parse_sign, resolve_config, run_command)


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    monkeypatch.delenv("TJ_ODBA_SEED", raising=False)


def run(argv):
    code, report = run_command(argv)
    return code, report


class TestParsers:
    def test_signs(self):
        assert [parse_sign(s) for s in ("plus", "+", "1", "minus", "-", "-1")] == [1, 1, 1, -1, -1, -1]
        with pytest.raises(ValueError):
            parse_sign("up")

    def test_sectors_and_range(self):
        assert parse_sectors("2:1,3:2") == ((2, 1), (3, 2))
        assert parse_range("0.1:0.4:0.1") == (0.1, 0.4, 0.1)
        with pytest.raises(ValueError):
            parse_range("1:0:0.1")

    def test_complex_format(self):
        assert format_complex(1.5 - 0.25j) == "1.5-0.25i"
        assert format_complex(2.0) == "2.0+0.0i"
        assert jsonable({"z": 1j, "x": math.inf, "a": (1, 2.5)}) == {"z": "0.0+1.0i", "x": "inf", "a": [1, 2.5]}


class TestConfig:
    def test_precedence(self, tmp_path, monkeypatch):
        assert resolve_config("ed", {})["seed"] == DEFAULT_SEED
        monkeypatch.setenv("TJ_ODBA_SEED", "7")
        assert resolve_config("ed", {})["seed"] == 7
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nseed = 11\nn: 3\nh1 = 0,0,0.5  # trailing\n")
        merged = resolve_config("ed", {"config": str(cfg)})
        assert merged["seed"] == 11 and merged["n"] == 3 and merged["h1"] == (0.0, 0.0, 0.5)
        assert resolve_config("ed", {"config": str(cfg), "seed": 5})["seed"] == 5

    def test_bad_config(self, tmp_path, monkeypatch):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nonsense = 1\n")
        with pytest.raises(ConfigError):
            resolve_config("ed", {"config": str(cfg)})
        monkeypatch.setenv("TJ_ODBA_SEED", "x")
        with pytest.raises(ConfigError):
            resolve_config("ed", {})

    def test_config_errors_exit_two(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("draws = many\n")
        assert run(["algebra-check", "--config", str(cfg)])[0] == 2
        assert run(["algebra-check", "--config", str(tmp_path / "missing.cfg")])[0] == 2


class TestEd:
    def test_two_site_example(self):
        code, rep = run(["ed", "--n", "2", "--m", "1", "--xi1", "-1", "--xin", "-1", "--t", "1"])
        assert code == 0 and rep["all_pass"]
        assert rep["results"]["spectra"]["1"] == pytest.approx([-2, -2, 0, 0], abs=1e-12)

    def test_all_sectors_and_empty(self):
        code, rep = run(["ed", "--n", "3"])
        assert code == 0
        assert [len(rep["results"]["spectra"][str(m)]) for m in range(4)] == [1, 6, 12, 8]
        assert rep["results"]["spectra"]["0"] == [0.0]

    @pytest.mark.parametrize("argv", [["ed", "--n", "2", "--m", "5"], ["ed", "--n", "0"],
                                      ["ed", "--h1", "1,2"], ["ed", "--bogus", "1"]])
    def test_usage_errors(self, argv):
        assert run(argv)[0] == 2

    def test_csv_seventeen_digits(self, tmp_path):
        code, _ = run(["ed", "--n", "2", "--m", "1", "--h1", "0.3,0,0.4", "--hn", "0,0.2,0.1",
                       "--csv-dir", str(tmp_path)])
        assert code == 0
        rows = list(csv.reader((tmp_path / "ed_N2_M1.csv").open()))
        assert rows[0] == ["index", "energy"] and len(rows) == 5
        for _, e in rows[1:]:
            assert float(format(float(e), ".17g")) == float(e)


class TestAlgebra:
    def test_zero_draws(self):
        code, rep = run(["algebra-check", "--draws", "0"])
        assert code == 0 and rep["summary"]["checks"] == 0

    def test_default_passes(self):
        code, rep = run(["algebra-check", "--draws", "4"])
        assert code == 0 and rep["summary"]["failed"] == 0

    def test_perturbation_fails(self):
        code, rep = run(["algebra-check", "--draws", "4", "--perturb", "0.1"])
        assert code == 1 and not rep["all_pass"]
        failed = {c["name"].split("/")[-1] for c in rep["checks"] if not c["pass"]}
        assert any(n.startswith("reflection") for n in failed)

    def test_negative_draws(self):
        assert run(["algebra-check", "--draws", "-1"])[0] == 2


class TestSurface:
    def test_unit_exponents(self):
        code, rep = run(["surface", "--c", "1", "--d", "1", "--t", "1"])
        assert code == 0
        assert rep["results"]["surface_parallel"]["closed_form"] == pytest.approx(math.log(3) - 5 / 3, abs=1e-14)
        assert rep["results"]["periodic"]["filling"] == pytest.approx(2 / 3, abs=1e-15)

    def test_periodic_only(self):
        code, rep = run(["surface", "--periodic-only", "--t", "1"])
        assert code == 0
        assert rep["results"]["periodic"]["energy_per_site"] == pytest.approx(0.21597281100072158, abs=1e-14)

    def test_missing_exponents(self):
        assert run(["surface", "--t", "1"])[0] == 2

    def test_string_scan(self, tmp_path):
        code, rep = run(["surface", "--periodic-only", "--t", "auto", "--string-scan", "0.1:1.0:0.1",
                         "--csv-dir", str(tmp_path)])
        assert code == 0
        gs = [r["g"] for r in rep["results"]["string_scan"]["rows"]]
        assert 0.5 not in gs and len(gs) == 9
        assert (tmp_path / "string_scan.csv").exists()

    def test_mixed_half_is_usage_error(self):
        assert run(["surface", "--c", "-1", "--d", "0.8", "--g", "0.5"])[0] == 2


class TestSolve:
    def test_parallel_two_sites(self, tmp_path):
        out = tmp_path / "r.json"
        code, rep = run(["solve", "--n", "2", "--m", "1", "--parallel", "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["input_digest"] == rep["input_digest"]
        assert rep["results"]["ed"]["levels_reached"] == rep["results"]["ed"]["distinct_levels"]

    def test_empty_sector(self):
        code, rep = run(["solve", "--n", "3", "--m", "0"])
        assert code == 0 and rep["results"]["solutions"][0]["energy"] == 0.0

    def test_non_integrable_rejected(self):
        argv = ["solve", "--n", "2", "--m", "1", "--h1", "0,0,0.5", "--hn", "0,0.3,0", "--xi1", "0.2", "--xin", "0.1"]
        assert run(argv)[0] == 2
        code, rep = run(argv + ["--project-integrable"])
        assert code == 0 and rep["results"]["solutions"]

    def test_deterministic_digest(self):
        a = run(["solve", "--n", "2", "--m", "1", "--seed", "3"])[1]
        b = run(["solve", "--n", "2", "--m", "1", "--seed", "3"])[1]
        assert a["input_digest"] == b["input_digest"]
        assert [s["energy"] for s in a["results"]["solutions"]] == [s["energy"] for s in b["results"]["solutions"]]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tjodba", "ed", "--n", "2", "--m", "1", "--xi1", "-1",
                           "--xin", "-1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["command"] == "ed" and rep["exit_code"] == 0 and rep["backend"] in ("cython", "python")


def test_main_returns_code():
    assert main(["surface", "--t", "1"]) == 2
