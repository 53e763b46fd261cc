"""
Command handlers behind the `calibrate`, `run`, `sweep`, `ri-curve` and
`presets` subcommands. Each handler returns its rows and writes them as CSV
to `out`, or to standard output when no path is given.
"""

import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config import build_scenario, load_settings
from engine.calibration import (
    action_distribution, calibrate_likelihood, gather_action_counts, likelihood_frame, load_likelihood,
    save_likelihood,
)
from engine.simulation import run_batch
from registry import ScenarioInfo, default_registry
from schemas.treasure import MetricsRow, RunRecord, ScenarioConfig, SweepParameter, SweepRow, SweepSpec
from tools import metrics
from tools.infotheory import validate_distribution
from tools.relinfo import ri_closed_form, ri_minimize, utility_treasure_matrix
from utils.errors import ConfigError, InvalidDistributionError
from utils.helpers import (
    calibration_stream, configure_logging, format_duration, percent_grid, read_csv, unit_grid, write_csv,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def emit_rows(rows: Union[pd.DataFrame, Sequence[Dict[str, Any]]], out: Optional[PathLike],
              float_format: str = "%.9g") -> pd.DataFrame:
    """Write rows to `out`, or to stdout when `out` is None"""
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    if out is None:
        frame.to_csv(sys.stdout, index=False, float_format=float_format, lineterminator="\n")
    else:
        write_csv(frame, out, float_format=float_format)
    return frame


def resolve_likelihood(cfg: ScenarioConfig, path: Optional[PathLike] = None) -> np.ndarray:
    """Load P(A|T) from `path`, or calibrate it from the scenario's seed"""
    if path:
        likelihood = load_likelihood(path)
        if likelihood.shape[0] != cfg.n_locations:
            raise ConfigError("likelihood", f"{path} covers {likelihood.shape[0]} locations, "
                                            f"the scenario has {cfg.n_locations}")
        return likelihood
    return calibrate_likelihood(cfg.n_locations, cfg.calibration_samples, calibration_stream(cfg.seed))


def scenario_rows(cfg: ScenarioConfig, record: RunRecord) -> List[MetricsRow]:
    """One metrics row per agent selector"""
    selectors = ["population", "focal"]
    if cfg.has_distinct_focal:
        selectors.append("others")
    rows = []
    for selector in selectors:
        rows.append(MetricsRow(
            scenario=cfg.name,
            selector=selector,
            n_locations=cfg.n_locations,
            n_agents=cfg.n_agents,
            p_change=cfg.p_change,
            obs_prob=round(cfg.obs_prob * 100.0, 9),
            focal_obs_prob=round(cfg.focal_obs_prob * 100.0, 9),
            runs=record.runs,
            turns=cfg.turns,
            seed=cfg.seed,
            performance=metrics.performance_ratio(record, selector),
            mi_bits=metrics.mi_estimate(record, selector),
            mean_turns_to_find=metrics.mean_turns_to_find(record, selector),
        ))
    return rows


def cmd_calibrate(locations: int = 10, samples: int = 100_000, seed: int = 0,
                  out: Optional[PathLike] = None, histogram: Optional[PathLike] = None) -> np.ndarray:
    """Estimate the likelihood matrix and write it as CSV"""
    logger.info(f"Calibrating P(A|T) for {locations} locations from {samples} actions (seed {seed})")
    try:
        if histogram:
            counts = gather_action_counts(locations, samples, calibration_stream(seed))
            emit_rows(action_distribution(counts), histogram)
        likelihood = calibrate_likelihood(locations, samples, calibration_stream(seed))
        if out is None:
            emit_rows(likelihood_frame(likelihood), None)
        else:
            save_likelihood(likelihood, out)
        return likelihood
    except Exception as e:
        logger.error(f"Calibration failed: {e}")
        raise


def cmd_run(preset: str, config_file: Optional[PathLike] = None,
            overrides: Optional[Mapping[str, Any]] = None, out: Optional[PathLike] = None) -> List[MetricsRow]:
    """Run a scenario preset and report performance and I(A;T) per selector"""
    try:
        settings = load_settings(config_file, overrides)
        configure_logging(settings.log_level)
        cfg = build_scenario(preset, settings)
        likelihood = resolve_likelihood(cfg, settings.likelihood)
        started = time.perf_counter()
        record = run_batch(cfg, likelihood)
        rows = scenario_rows(cfg, record)
        for row in rows:
            logger.info(f"{row.scenario}/{row.selector}: performance={row.performance:.4f} "
                        f"I(A;T)={row.mi_bits:.4f} bits")
        logger.info(f"Scenario {cfg.name} finished in {format_duration(time.perf_counter() - started)}")
        emit_rows([row.model_dump(mode="json") for row in rows], out)
        return rows
    except Exception as e:
        logger.error(f"Run of scenario {preset} failed: {e}")
        raise


def sweep_point(spec: SweepSpec, percent: float, likelihood: np.ndarray) -> SweepRow:
    """Simulate one grid point of a sweep"""
    cfg = spec.base.with_obs_prob(spec.parameter, percent / 100.0)
    record = run_batch(cfg, likelihood)
    selector = "population" if spec.parameter == SweepParameter.POPULATION else "focal"
    point = metrics.tradeoff_point(record, selector, cfg.n_locations)
    relevant = ri_closed_form(min(max(point.utility, 0.0), 1.0), cfg.n_locations)
    return SweepRow(
        parameter=spec.parameter,
        grid_percent=percent,
        selector=selector,
        performance=point.utility,
        mi_bits=point.information,
        ri_bits=relevant,
        excess_bits=point.information - relevant,
    )


def cmd_sweep(parameter: Union[str, SweepParameter] = SweepParameter.POPULATION, start: float = 0.0,
              stop: float = 100.0, step: float = 5.0, preset: str = "partial",
              config_file: Optional[PathLike] = None, overrides: Optional[Mapping[str, Any]] = None,
              out: Optional[PathLike] = None) -> List[SweepRow]:
    """Vary an observation probability over a percent grid"""
    try:
        settings = load_settings(config_file, overrides)
        configure_logging(settings.log_level)
        base = build_scenario(preset, settings)
        try:
            spec = SweepSpec(parameter=parameter, start=start, stop=stop, step=step, base=base)
        except ValueError as e:
            raise ConfigError("grid", str(e)) from e
        swept = base.agents if spec.parameter == SweepParameter.POPULATION else base.agents[:1]
        if not any(agent.social for agent in swept):
            raise ConfigError("preset", f"scenario {base.name} has no social agents for a "
                                        f"{spec.parameter.value} observation sweep")
        grid = percent_grid(spec.start, spec.stop, spec.step)
        likelihood = resolve_likelihood(base, settings.likelihood)

        started = time.perf_counter()
        rows = []
        for index, percent in enumerate(grid, start=1):
            row = sweep_point(spec, percent, likelihood)
            logger.info(f"[{index}/{len(grid)}] {spec.parameter.value} p_o={percent:g}%: "
                        f"performance={row.performance:.4f} I(A;T)={row.mi_bits:.4f} bits "
                        f"({format_duration(time.perf_counter() - started)})")
            rows.append(row)
        emit_rows([row.model_dump(mode="json") for row in rows], out)
        return rows
    except Exception as e:
        logger.error(f"Sweep failed: {e}")
        raise


def load_utility(path: PathLike) -> np.ndarray:
    """Utility CSV: one row per action, one column per world state"""
    frame = read_csv(path)
    utility = frame.to_numpy(dtype=np.float64)
    if utility.ndim != 2 or not np.isfinite(utility).all():
        raise InvalidDistributionError(f"{path}: utility matrix must hold finite numbers")
    return utility


def cmd_ri_curve(locations: int = 10, start: float = 0.0, stop: float = 1.0, step: float = 0.001,
                 solver: bool = False, utility: Optional[PathLike] = None, tol: float = 1e-6,
                 out: Optional[PathLike] = None) -> pd.DataFrame:
    """Relevant information over a grid of performance levels"""
    try:
        levels = unit_grid(start, stop, step)
        if not solver and utility is None:
            values = [ri_closed_form(float(u), locations) for u in levels]
        else:
            matrix = load_utility(utility) if utility else utility_treasure_matrix(locations)
            prior = validate_distribution(np.full(matrix.shape[1], 1.0 / matrix.shape[1]))
            logger.info(f"Solving relevant information for a {matrix.shape[0]}x{matrix.shape[1]} "
                        f"utility matrix at {len(levels)} levels")
            values = [ri_minimize(matrix, prior, float(u), tol).information for u in levels]
        frame = pd.DataFrame({"u": levels, "ri_bits": values})
        return emit_rows(frame, out)
    except Exception as e:
        logger.error(f"Relevant information curve failed: {e}")
        raise


def cmd_presets(out: Optional[PathLike] = None) -> List[ScenarioInfo]:
    """List the registered scenario presets"""
    presets = default_registry().list_scenarios()
    emit_rows([info.model_dump() for info in presets], out)
    return presets
