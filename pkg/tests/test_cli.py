"""Command-line interface tests.

Each subcommand is exercised through ``main(argv)`` with temp directories,
checking outputs, determinism of written artifacts, and the exit-code
contract: 0 ok, 1 invalid input, 2 numerical failure, 3 I/O trouble.
"""

import math

import pytest

from bucketwheel import Gains, loads_scenario
from bucketwheel.cli import main
from bucketwheel.sim import CSV_HEADER

SHORT_CONFIG = """
[integrator]
t_end_s = 10.0
"""

DISTURBED_CONFIG = """
[disturbance]
enabled = true
seed = 0

[integrator]
t_end_s = 10.0
"""


@pytest.fixture
def short_config(tmp_path):
    path = tmp_path / "short.toml"
    path.write_text(SHORT_CONFIG)
    return str(path)


@pytest.fixture
def disturbed_config(tmp_path):
    path = tmp_path / "disturbed.toml"
    path.write_text(DISTURBED_CONFIG)
    return str(path)


def test_run_writes_artifacts(tmp_path, short_config, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", short_config, "--out", str(out)]) == 0
    captured = capsys.readouterr()
    assert "max_abs_x = " in captured.out
    assert "liftoff = no" in captured.out

    csv = (out / "trajectory.csv").read_text().split("\n")
    assert csv[0] == CSV_HEADER
    assert len(csv) == 1 + 101 + 1  # header + samples + trailing newline

    summary_lines = (out / "summary.csv").read_text().strip().split("\n")
    assert summary_lines[0].startswith("max_abs_x,")
    assert len(summary_lines) == 2

    plot = (out / "figures.plot").read_text()
    assert "trajectory.csv" in plot
    assert "set output" in plot


def test_run_deterministic_output_bytes(tmp_path, disturbed_config):
    """Same config and seed, fresh process state: byte-identical CSV."""
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["run", "--config", disturbed_config, "--seed", "5",
                 "--out", str(out_a)]) == 0
    assert main(["run", "--config", disturbed_config, "--seed", "5",
                 "--out", str(out_b)]) == 0
    bytes_a = (out_a / "trajectory.csv").read_bytes()
    assert bytes_a == (out_b / "trajectory.csv").read_bytes()

    out_c = tmp_path / "c"
    assert main(["run", "--config", disturbed_config, "--seed", "6",
                 "--out", str(out_c)]) == 0
    assert bytes_a != (out_c / "trajectory.csv").read_bytes()


def test_run_disturbance_toggle(tmp_path, disturbed_config):
    out = tmp_path / "off"
    assert main(["run", "--config", disturbed_config, "--disturbance", "off",
                 "--out", str(out)]) == 0
    # with the disturbance forced off the dist columns are identically zero
    rows = (out / "trajectory.csv").read_text().strip().split("\n")[1:]
    dist_cols = {row.split(",")[15] for row in rows} | {row.split(",")[16] for row in rows}
    assert dist_cols == {"0"}


def test_invalid_config_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[soil]\ndensity_kg_m3 = -5.0\n")
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "density" in capsys.readouterr().err

    typo = tmp_path / "typo.toml"
    typo.write_text("[soil]\ndensty = 1880.0\n")
    assert main(["run", "--config", str(typo), "--out", str(tmp_path / "o")]) == 1
    assert "densty" in capsys.readouterr().err


def test_missing_config_exits_3(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.toml"),
                 "--out", str(tmp_path / "o")]) == 3


def test_numerical_failure_exits_2(tmp_path, capsys):
    blowup = tmp_path / "blowup.toml"
    blowup.write_text("[gains]\nk_1 = 1e300\n\n[integrator]\nt_end_s = 10.0\n")
    assert main(["run", "--config", str(blowup), "--out", str(tmp_path / "o")]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_bad_arguments_exit_1():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 1


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "bucketwheel" in capsys.readouterr().out


def test_sweep(tmp_path, short_config, capsys):
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", short_config, "--runs", "3",
                 "--seed", "4", "--out", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().strip().split("\n")
    assert lines[0].startswith("seed,max_abs_x,")
    assert lines[0].endswith(",failed")
    assert len(lines) == 1 + 3 + 1  # header, three seeds, aggregate
    seeds = [row.split(",")[0] for row in lines[1:]]
    assert seeds == ["4", "5", "6", "mean"]
    assert all(row.endswith(",0") for row in lines[1:4])
    captured = capsys.readouterr()
    assert "liftoff_frequency = 0" in captured.out

    with pytest.raises(SystemExit) as excinfo:
        main(["sweep", "--config", short_config, "--out", str(out)])
    assert excinfo.value.code == 1  # --runs is required


def test_tune(tmp_path, short_config, capsys):
    spec = tmp_path / "tune.toml"
    spec.write_text("""
[tuning]
method = "grid"
budget = 2
eval_horizon_s = 2.0

[tuning.bounds]
k_1 = [2000.0, 8000.0]
""")
    out = tmp_path / "tuned"
    assert main(["tune", "--config", short_config, "--spec", str(spec),
                 "--out", str(out)]) == 0
    captured = capsys.readouterr()
    assert "best_cost = " in captured.out

    gains = loads_scenario((out / "tuned_gains.toml").read_text()).gains
    assert gains.k_1 in (2000.0, 8000.0)
    assert isinstance(gains, Gains)

    trace_lines = (out / "tuning_trace.csv").read_text().strip().split("\n")
    assert trace_lines[0].startswith("iteration,")
    assert len(trace_lines) == 1 + 2
    best_costs = [float(row.split(",")[-1]) for row in trace_lines[1:]]
    assert best_costs == sorted(best_costs, reverse=True), \
        "best_cost column must be non-increasing"


def test_isru_text_and_csv(capsys):
    assert main(["isru", "--rate", "0.005", "--mech-power", "100"]) == 0
    out = capsys.readouterr().out
    assert "energy_per_kg = 1144000" in out
    assert "within_budget = yes" in out

    assert main(["isru", "--rate", "0.02", "--csv"]) == 0
    header, row = capsys.readouterr().out.strip().split("\n")
    record = dict(zip(header.split(","), row.split(",")))
    assert record["within_budget"] == "0"

    assert main(["isru", "--rate", "-1"]) == 1


def test_isru_honors_config_soil(tmp_path, capsys):
    config = tmp_path / "soil.toml"
    config.write_text("[soil]\nspecific_heat_j_kg_c = 1000.0\n"
                      "surface_temp_c = 0.0\nextraction_temp_c = 100.0\n")
    assert main(["isru", "--config", str(config), "--rate", "0.01"]) == 0
    out = capsys.readouterr().out
    assert "energy_per_kg = 100000" in out
