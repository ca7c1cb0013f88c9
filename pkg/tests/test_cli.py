"""Command-line interface: flags, config files, exit codes, output files."""

import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from fleetdyn import GrowthParams, growth_closed_form
from fleetdyn.cli import main

SRC = str(Path(__file__).resolve().parents[1] / "src")


def run_cli(*argv):
    return main(list(argv))


def read_rows(path):
    lines = Path(path).read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


# ----------------------------------------------------------------- growth

def test_growth_writes_yearly_series(tmp_path):
    out = tmp_path / "o"
    code = run_cli(
        "growth", "--gamma", "0.01", "--mu", "0.65", "--n0", "0.38",
        "--t0", "1960", "--t1", "2020", "--out", str(out),
    )
    assert code == 0
    header, rows = read_rows(out / "growth.csv")
    assert header == ["year", "fleet_mveh"]
    assert len(rows) == 61
    assert rows[0] == ["1960", "0.380000"]
    assert float(rows[-1][1]) == pytest.approx(29.5358, abs=1e-3)


def test_growth_csv_round_trips_through_loader(tmp_path):
    from fleetdyn import load_fleet_csv

    out = tmp_path / "o"
    run_cli(
        "growth", "--gamma", "0.01", "--mu", "0.65", "--n0", "0.38",
        "--t0", "1960", "--t1", "2020", "--out", str(out),
    )
    series = load_fleet_csv(out / "growth.csv")
    assert len(series) == 61
    assert series.years[0] == 1960
    assert series.fleet[-1] == pytest.approx(29.535792, abs=1e-6)


def test_growth_invalid_usage_exits_2(tmp_path):
    out = str(tmp_path / "o")
    base = ["growth", "--mu", "0.65", "--n0", "0.38", "--out", out]
    assert run_cli(*base, "--gamma", "0.01", "--t0", "2020", "--t1", "2000") == 2
    assert run_cli(*base, "--gamma", "0", "--t0", "1960", "--t1", "2020") == 2
    assert run_cli(*base, "--gamma", "0.01", "--t0", "1960") == 2  # missing t1
    assert run_cli("growth", "--gamma", "x") == 2  # argparse rejects


def test_growth_integrator_blowup_exits_1(tmp_path):
    # gamma*dt far outside the RK4 stability region overflows the state
    code = run_cli(
        "growth", "--gamma", "1e8", "--mu", "0.65", "--n0", "0.38",
        "--t0", "1960", "--t1", "2020", "--out", str(tmp_path / "o"),
    )
    assert code == 1


# ---------------------------------------------------------------- scenario

def test_scenario_moderate_share_at_2050(tmp_path):
    out = tmp_path / "o"
    assert run_cli("scenario", "--name", "moderate", "--out", str(out)) == 0
    header, rows = read_rows(out / "moderate.csv")
    assert header == ["time", "conv", "hydro", "total"]
    row2050 = next(r for r in rows if r[0] == "2050.000000")
    share = float(row2050[2]) / float(row2050[3])
    assert share == pytest.approx(0.92, abs=0.05)


def test_scenario_targets_report(tmp_path):
    out = tmp_path / "o"
    assert run_cli("scenario", "--name", "low", "--targets", "--out", str(out)) == 0
    header, rows = read_rows(out / "low_targets.csv")
    assert header == ["year", "metric", "expected", "tolerance", "observed", "pass"]
    assert rows[0][0] == "2050" and rows[0][1] == "zev_share"
    assert float(rows[0][2]) == 0.10
    assert rows[0][5] in ("pass", "fail")


def test_scenario_unknown_name_exits_2(tmp_path):
    assert run_cli("scenario", "--name", "fast", "--out", str(tmp_path)) == 2


def test_scenario_name_excludes_custom_params(tmp_path):
    assert (
        run_cli("scenario", "--name", "low", "--mu_h", "0.2", "--out", str(tmp_path)) == 2
    )


def test_scenario_custom_config_symmetric_collapse(tmp_path):
    cfg = tmp_path / "custom.cfg"
    cfg.write_text(
        "# symmetric transition\n"
        "gamma_c = 0.01\n"
        "gamma_h = 0.01\n"
        "a = 0.005\n"
        "epsilon = 0.005\n"
        "mu_c = 0.5\n"
        "mu_h = 0.5\n"
        "x0 = 10\n"
        "y0 = 0\n"
        "t0 = 2020\n"
        "t_end = 2060\n"
    )
    out = tmp_path / "o"
    assert run_cli("scenario", "--config", str(cfg), "--out", str(out)) == 0
    _, rows = read_rows(out / "custom.csv")
    gp = GrowthParams(0.01, 1.0)
    for row in rows:
        expected = growth_closed_form(gp, 10.0, float(row[0]) - 2020.0)
        assert float(row[3]) == pytest.approx(expected, abs=1e-5)


def test_scenario_flag_overrides_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("name = low\n")
    out = tmp_path / "o"
    assert run_cli("scenario", "--config", str(cfg), "--name", "moderate", "--out", str(out)) == 0
    assert (out / "moderate.csv").exists()
    assert not (out / "low.csv").exists()


def test_scenario_missing_params_exits_2(tmp_path):
    assert run_cli("scenario", "--mu_h", "0.3", "--out", str(tmp_path)) == 2


def test_config_parse_error_exits_2(tmp_path):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("gamma_c 0.01\n")
    assert run_cli("scenario", "--config", str(cfg), "--out", str(tmp_path)) == 2


# -------------------------------------------------------------------- fit

def test_fit_bundled_data(tmp_path, capsys):
    data = Path(SRC) / "fleetdyn" / "data" / "uk_fleet_rac.csv"
    out = tmp_path / "o"
    assert run_cli("fit", "--data", str(data), "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "gamma" in printed and "mu" in printed
    header, rows = read_rows(out / "fit.csv")
    assert header == ["year", "data_mveh", "model_mveh", "error"]
    assert len(rows) == 10


def test_fit_synthetic_exact_recovery(tmp_path, capsys):
    gp = GrowthParams(0.02, 0.8)
    csv = tmp_path / "syn.csv"
    lines = ["year,fleet_mveh"]
    for year in range(1980, 2021, 5):
        lines.append(f"{year},{growth_closed_form(gp, 5.0, year - 1980.0):.12f}")
    csv.write_text("\n".join(lines) + "\n")
    out = tmp_path / "o"
    assert run_cli("fit", "--data", str(csv), "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "mu    = 0.800000" in printed
    assert "n0    = 5.000000" in printed
    _, rows = read_rows(out / "fit.csv")
    assert all(float(r[3]) < 1e-6 for r in rows)


def test_fit_missing_file_exits_2(tmp_path):
    assert run_cli("fit", "--data", str(tmp_path / "nope.csv"), "--out", str(tmp_path)) == 2


# ------------------------------------------------------------- sensitivity

def test_sensitivity_defaults(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_cli("sensitivity", "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "total     = 130.000000 Mveh" in printed
    assert "stability = monotone-equilibrium" in printed
    header, rows = read_rows(out / "gradients.csv")
    assert header == ["param", "grad_hydrogen", "grad_conventional",
                      "plog_hydrogen", "plog_conventional"]
    grads = {r[0]: (float(r[1]), float(r[2])) for r in rows}
    assert grads["mu_h"][0] > 0 and grads["mu_c"][0] > 0
    assert grads["mu_h"][1] < 0
    assert float(rows[0][3]) == pytest.approx(math.log10(1 + grads["mu_h"][0]), rel=1e-5)


def test_sensitivity_zero_sources_valid(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_cli("sensitivity", "--mu_c", "0", "--mu_h", "0", "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "x_inf     = 0.000000 Mveh" in printed
    assert "y_inf     = 0.000000 Mveh" in printed


def test_sensitivity_degenerate_point_exits_1(tmp_path):
    # exactly on the zero-discriminant surface: no fixed point to report
    code = run_cli(
        "sensitivity", "--mu_h", "0", "--mu_c", "0.5", "--epsilon", "0.25",
        "--gamma_c", "0.25", "--gamma_h", "0.5", "--a", "0.05", "--out", str(tmp_path),
    )
    assert code == 1


# ------------------------------------------------------------------ infra

def test_infra_s1_and_s4(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_cli("infra", "--id", "S1", "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "stations per year     8750" in printed
    header, rows = read_rows(out / "infra_S1.csv")
    assert rows[0][:4] == ["S1", "40", "8750", "262500"]

    assert run_cli("infra", "--id", "S4", "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "stations per year     525" in printed
    assert "total stations        15750" in printed


def test_infra_uptake_scales(tmp_path):
    out = tmp_path / "o"
    assert run_cli("infra", "--id", "S2", "--uptake", "0.70", "--out", str(out)) == 0
    _, rows = read_rows(out / "infra_S2.csv")
    assert abs(int(rows[0][2]) - 2 * 2625) <= 1


def test_infra_invalid_id_exits_2(tmp_path):
    assert run_cli("infra", "--id", "S9", "--out", str(tmp_path)) == 2


# ------------------------------------------------------------------ batch

def test_batch_runs_all_scenarios(tmp_path):
    out = tmp_path / "o"
    assert run_cli("batch", "--out", str(out)) == 0
    for name in ("low", "moderate", "aggressive"):
        assert (out / f"{name}.csv").exists()
    header, rows = read_rows(out / "batch_targets.csv")
    assert header[0] == "scenario"
    assert {r[0] for r in rows} == {"low", "moderate"}


# ----------------------------------------------------------- environment

def test_fleetdyn_out_env_var(tmp_path, monkeypatch):
    target = tmp_path / "env_out"
    monkeypatch.setenv("FLEETDYN_OUT", str(target))
    assert run_cli("infra", "--id", "S1") == 0
    assert (target / "infra_S1.csv").exists()


def test_out_flag_beats_env(tmp_path, monkeypatch):
    monkeypatch.setenv("FLEETDYN_OUT", str(tmp_path / "env_out"))
    flag_dir = tmp_path / "flag_out"
    assert run_cli("infra", "--id", "S1", "--out", str(flag_dir)) == 0
    assert (flag_dir / "infra_S1.csv").exists()
    assert not (tmp_path / "env_out").exists()


# ---------------------------------------------------------- module runner

def test_python_m_entry_point(tmp_path):
    env = dict(os.environ, PYTHONPATH=SRC)
    result = subprocess.run(
        [sys.executable, "-m", "fleetdyn", "sensitivity", "--out", str(tmp_path / "o")],
        capture_output=True, text=True, env=env,
    )
    assert result.returncode == 0
    assert "stability = monotone-equilibrium" in result.stdout
    helpres = subprocess.run(
        [sys.executable, "-m", "fleetdyn", "--help"],
        capture_output=True, text=True, env=env,
    )
    assert helpres.returncode == 0
    assert "growth" in helpres.stdout and "infra" in helpres.stdout
