import csv
import io
import json

import pytest

from nonclassical import __version__
from nonclassical.cli import CONFIG_DIR_ENV, main

PINNED_TWO_ATOM = 0.046539729139349194


def run_json(tmp_path, *argv):
    out = tmp_path / "report.json"
    assert main([*argv, "--output", str(out)]) == 0
    return json.loads(out.read_text()), out


def test_number_correlated(tmp_path):
    rep, _ = run_json(tmp_path, "--scenario", "number-correlated", "--cutoff", "30")
    w = rep["witnesses"][0]
    assert rep["results"]["variance_number_difference"] <= 1e-10
    assert w["verdict"] == "nonclassical" and w["value"] < -1.9
    assert rep["library"]["version"] == __version__
    assert rep["config"]["params"]["ratio"] == 0.5


def test_gaussian_p_thermal(tmp_path):
    rep, _ = run_json(tmp_path, "--scenario", "gaussian-p", "--samples", "100000", "--seed", "7",
                      "--param", "nbar_a=1.0", "--param", "nbar_b=1.0")
    w = rep["witnesses"][0]
    assert abs(w["value"] - 2.0) <= 3 * w["diagnostics"]["mc_error"]
    assert w["verdict"] == "classical-consistent"


def test_point_mixture_commutator(tmp_path):
    rep, _ = run_json(tmp_path, "--scenario", "point-mixture-commutator")
    assert abs(rep["witnesses"][0]["value"] - PINNED_TWO_ATOM) <= 1e-10
    assert abs(rep["results"]["commutator_matrix_vacuum_povm"][0][1] - PINNED_TWO_ATOM) <= 1e-10


def test_perturbation(tmp_path):
    rep, _ = run_json(tmp_path, "--scenario", "perturbation")
    assert all(w["verdict"] == "nonclassical" for w in rep["witnesses"])
    for row in rep["results"]["rows"]:
        assert abs(row["mandel_q_vacuum"] + row["eps"]) < 1e-10
    assert rep["results"]["two_mode_vacuum_perturbation"]["is_cc_in_fock_bases"]


def test_conditioning(tmp_path):
    rep, _ = run_json(tmp_path, "--scenario", "conditioning")
    res = rep["results"]
    assert res["trace_distance"] < 1e-8
    assert res["conditional_p_positive"] and res["conditional_p_normalised"]


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["--scenario", "sweep", "--param", "draws=5", "--format", "csv",
                 "--output", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 4 and all(r["verdict"] == "pass" for r in rows)


def test_csv_one_row_per_witness(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["--scenario", "gaussian-p", "--samples", "500", "--cutoff", "8",
                 "--format", "csv", "--output", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["name"] for r in rows] == ["variance_witness", "mandel_q", "mandel_q"]
    json.loads(rows[0]["diagnostics"])


def test_config_file_and_flag_override(tmp_path, monkeypatch):
    cfg = {"scenario": "number-correlated", "cutoff": 12, "params": {"ratio": 0.25},
           "tolerances": {"exact": 1e-9}}
    (tmp_path / "nc.json").write_text(json.dumps(cfg))
    monkeypatch.setenv(CONFIG_DIR_ENV, str(tmp_path))
    monkeypatch.chdir(tmp_path / "..")
    out = tmp_path / "o.json"
    assert main(["--config", "nc.json", "--cutoff", "10", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["cutoff"] == 10 and rep["config"]["params"]["ratio"] == 0.25
    assert rep["witnesses"][0]["diagnostics"]["tolerances"]["exact"] == 1e-9


def test_points_p_document(tmp_path):
    p = {"type": "points", "atoms": [{"w": 0.5, "alpha": [0, 1], "beta": [0, 0]},
                                     {"w": 0.5, "alpha": [1, 0], "beta": [0.5, 0]}]}
    rep, _ = run_json(tmp_path, "--scenario", "point-mixture-commutator", "--cutoff", "20",
                      "--param", "p=" + json.dumps(p))
    assert rep["witnesses"][0]["verdict"] == "nonclassical"


@pytest.mark.parametrize("argv", [
    ["--scenario", "number-correlated", "--cutoff", "1"],
    ["--scenario", "gaussian-p", "--samples", "0"],
    ["--scenario", "number-correlated", "--tolerance", "bogus=1"],
    ["--scenario", "number-correlated", "--tolerance", "nokey"],
    ["--config", "/nonexistent/config.json"],
    ["--scenario", "perturbation", "--param", "eps=[2.0]"],
])
def test_invalid_config_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_scenario_in_file(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps({"scenario": "wigner"}))
    assert main(["--config", str(tmp_path / "c.json")]) == 2


def test_numerical_validation_exit_3(tmp_path, capsys):
    # library constructions are PSD by design; an unsatisfiable PSD tolerance trips the guard
    rc = main(["--scenario", "point-mixture-commutator", "--cutoff", "4", "--tolerance", "psd=-1",
               "--output", str(tmp_path / "x.json")])
    assert rc == 3
    assert "validation" in capsys.readouterr().err


def test_stdout_when_no_output(capsys):
    assert main(["--scenario", "number-correlated", "--cutoff", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["scenario"] == "number-correlated"


@pytest.mark.parametrize("scenario", ["gaussian-p", "sweep"])
def test_byte_identical(tmp_path, scenario):
    args = ["--scenario", scenario, "--seed", "3", "--samples", "3000", "--param", "draws=4"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main([*args, "--output", str(a)]) == 0
    assert main([*args, "--output", str(b)]) == 0
    # output paths are part of the embedded config, so compare after normalising them
    ta = a.read_text().replace(str(a), "OUT")
    tb = b.read_text().replace(str(b), "OUT")
    assert ta == tb
