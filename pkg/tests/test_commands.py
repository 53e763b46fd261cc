import logging

import numpy as np
import pandas as pd
import pytest

from main import main
from routes.commands import cmd_calibrate, cmd_presets, cmd_ri_curve, cmd_run, cmd_sweep
from utils.errors import ConfigError, InfeasibleUtilityError, UnknownScenarioError

SMALL = {"agents": 3, "turns": 40, "runs": 2, "calibration_samples": 10_000}


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("TREASURE_LOG_LEVEL", raising=False)
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)


class TestCalibrate:
    def test_writes_reproducible_csv(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        cmd_calibrate(locations=5, samples=10_000, seed=3, out=first)
        cmd_calibrate(locations=5, samples=10_000, seed=3, out=second)
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().splitlines()[0] == "t0,t1,t2,t3,t4"

    def test_histogram(self, tmp_path):
        histogram = tmp_path / "hist.csv"
        cmd_calibrate(locations=4, samples=10_000, out=tmp_path / "l.csv", histogram=histogram)
        frame = pd.read_csv(histogram)
        assert list(frame.columns) == ["location", "count", "probability"]
        assert frame["count"].sum() == 10_000

    def test_sample_floor(self, tmp_path):
        with pytest.raises(ConfigError):
            cmd_calibrate(samples=100, out=tmp_path / "l.csv")

    def test_stdout_uses_likelihood_header(self, capsys):
        cmd_calibrate(locations=3, samples=10_000)
        assert capsys.readouterr().out.splitlines()[0] == "t0,t1,t2"


class TestRun:
    def test_rows_per_selector(self, tmp_path):
        out = tmp_path / "run.csv"
        rows = cmd_run("single-social", overrides=SMALL, out=out)
        assert [row.selector for row in rows] == ["population", "focal", "others"]
        frame = pd.read_csv(out)
        assert {"scenario", "performance", "mi_bits", "obs_prob", "focal_obs_prob"} <= set(frame.columns)
        assert frame["runs"].tolist() == [2, 2, 2]

    def test_homogeneous_population_has_no_others_row(self, tmp_path):
        rows = cmd_run("single", overrides=SMALL, out=tmp_path / "run.csv")
        assert [row.selector for row in rows] == ["population", "focal"]

    def test_uses_saved_likelihood(self, tmp_path):
        likelihood = tmp_path / "likelihood.csv"
        cmd_calibrate(locations=10, samples=10_000, out=likelihood)
        rows = cmd_run("partial", overrides={**SMALL, "likelihood": likelihood}, out=tmp_path / "run.csv")
        assert rows[0].p_change == 0.01
        assert rows[0].obs_prob == pytest.approx(30.0)

    def test_likelihood_size_mismatch(self, tmp_path):
        likelihood = tmp_path / "likelihood.csv"
        cmd_calibrate(locations=4, samples=10_000, out=likelihood)
        with pytest.raises(ConfigError):
            cmd_run("single", overrides={**SMALL, "likelihood": likelihood}, out=tmp_path / "run.csv")

    def test_unknown_preset(self):
        with pytest.raises(UnknownScenarioError):
            cmd_run("nope")

    def test_log_level_from_config_file(self, tmp_path):
        config = tmp_path / "experiment.cfg"
        config.write_text("log_level=DEBUG\nagents=2\nturns=10\nruns=1\ncalibration_samples=10000\n")
        cmd_run("single", config_file=config, out=tmp_path / "run.csv")
        assert logging.getLogger().level == logging.DEBUG


class TestSweep:
    def test_grid_rows(self, tmp_path):
        rows = cmd_sweep("population", 0, 100, 50, overrides=SMALL, out=tmp_path / "sweep.csv")
        assert [row.grid_percent for row in rows] == [0.0, 50.0, 100.0]
        for row in rows:
            assert row.excess_bits == pytest.approx(row.mi_bits - row.ri_bits)

    def test_focal_sweep(self, tmp_path):
        rows = cmd_sweep("focal", 20, 40, 20, overrides=SMALL, out=tmp_path / "sweep.csv")
        assert {row.selector for row in rows} == {"focal"}

    def test_preset_without_social_agents(self, tmp_path):
        with pytest.raises(ConfigError) as excinfo:
            cmd_sweep("population", 0, 100, 50, preset="single", overrides=SMALL, out=tmp_path / "sweep.csv")
        assert excinfo.value.key == "preset"

    def test_focal_sweep_needs_social_focal(self, tmp_path):
        with pytest.raises(ConfigError):
            cmd_sweep("focal", 0, 100, 50, preset="single-changing", overrides=SMALL, out=tmp_path / "sweep.csv")

    @pytest.mark.parametrize("start, stop, step", [(0, 100, 0), (60, 30, 5)])
    def test_malformed_grid(self, tmp_path, start, stop, step):
        with pytest.raises(ConfigError):
            cmd_sweep("population", start, stop, step, overrides=SMALL, out=tmp_path / "sweep.csv")


class TestRiCurve:
    def test_closed_form(self, tmp_path):
        frame = cmd_ri_curve(out=tmp_path / "curve.csv")
        assert len(frame) == 1001
        values = dict(zip(frame["u"].round(3), frame["ri_bits"]))
        assert values[0.1] == 0.0
        assert values[1.0] == pytest.approx(3.321928, abs=1e-6)

    def test_solver_agrees(self, tmp_path):
        closed = cmd_ri_curve(locations=5, step=0.05, out=tmp_path / "closed.csv")
        solved = cmd_ri_curve(locations=5, step=0.05, solver=True, out=tmp_path / "solved.csv")
        np.testing.assert_allclose(solved["ri_bits"], closed["ri_bits"], atol=1e-3)

    def test_infeasible_utility(self, tmp_path):
        utility = tmp_path / "utility.csv"
        pd.DataFrame(0.5 * np.eye(3), columns=["r0", "r1", "r2"]).to_csv(utility, index=False)
        with pytest.raises(InfeasibleUtilityError):
            cmd_ri_curve(utility=utility, step=0.25, out=tmp_path / "curve.csv")


def test_presets(tmp_path):
    names = [info.name for info in cmd_presets(out=tmp_path / "presets.csv")]
    assert "all-uncertain-social" in names
    assert pd.read_csv(tmp_path / "presets.csv")["name"].tolist() == names


class TestMain:
    def test_success(self, tmp_path):
        assert main(["ri-curve", "--step", "0.5", "--out", str(tmp_path / "curve.csv")]) == 0
        assert (tmp_path / "curve.csv").exists()

    def test_unknown_preset_exit_code(self, capsys):
        assert main(["run", "nope"]) == 1
        assert "unknown preset" in capsys.readouterr().err

    def test_invalid_percent_exit_code(self, capsys):
        assert main(["run", "partial", "--obs-prob", "150"]) == 1
        assert "obs_prob" in capsys.readouterr().err

    def test_run_with_flags(self, tmp_path):
        out = tmp_path / "run.csv"
        argv = ["run", "all-social", "--agents", "2", "--turns", "20", "--runs", "1",
                "--calibration-samples", "10000", "--focal-obs-prob", "0", "--out", str(out)]
        assert main(argv) == 0
        assert pd.read_csv(out)["focal_obs_prob"].tolist()[0] == 0.0

    def test_log_level_flag_beats_config_file(self, tmp_path):
        config = tmp_path / "experiment.cfg"
        config.write_text("log_level=DEBUG\nagents=2\nturns=10\nruns=1\ncalibration_samples=10000\n")
        argv = ["--log-level", "WARNING", "run", "single", "--config", str(config),
                "--out", str(tmp_path / "run.csv")]
        assert main(argv) == 0
        assert logging.getLogger().level == logging.WARNING
