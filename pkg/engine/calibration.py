import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from agents import belief
from context.world import WorldState, inspect
from schemas.treasure import CALIBRATION_SAMPLE_FLOOR
from tools.relinfo import symmetric_strategy
from utils.errors import ConfigError, InvalidDistributionError
from utils.helpers import read_csv, write_csv

logger = logging.getLogger(__name__)

CALIBRATION_TREASURE = 0


def gather_action_counts(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """
    Count the locations visited by non-social certainty agents searching a
    static world with the treasure at location 0. A searcher is replaced by
    a fresh one after every find; the successful visit is counted.
    """
    if samples < CALIBRATION_SAMPLE_FLOOR:
        raise ConfigError("samples", f"{samples} is below the calibration floor of {CALIBRATION_SAMPLE_FLOOR}")
    world = WorldState(n=n, treasure=CALIBRATION_TREASURE)
    counts = np.zeros(n, dtype=np.int64)
    current = belief.new_uniform(n)
    for _ in range(samples):
        action = belief.select_action(current, rng)
        counts[action] += 1
        current = belief.observe_location_result(current, action, inspect(world, action))
    return counts


def calibrate_likelihood(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """
    Estimate P(A|T) from simulated searchers.

    Hits and misses are pooled over locations, so the result has diagonal
    h (the hit fraction) and (1 - h) / (n - 1) everywhere else.
    """
    counts = gather_action_counts(n, samples, rng)
    hit = counts[CALIBRATION_TREASURE] / samples
    likelihood = belief.validate_likelihood(symmetric_strategy(hit, n))
    logger.info(f"Calibrated likelihood from {samples} actions: diagonal={hit:.5f}, "
                f"off-diagonal={(1.0 - hit) / (n - 1):.5f}")
    return likelihood


def action_distribution(counts: np.ndarray) -> pd.DataFrame:
    """Per-location visit frequencies with the treasure at location 0"""
    total = counts.sum()
    return pd.DataFrame({
        "location": np.arange(counts.size),
        "count": counts,
        "probability": counts / total,
    })


def likelihood_frame(likelihood: np.ndarray) -> pd.DataFrame:
    n = likelihood.shape[1]
    return pd.DataFrame(likelihood, columns=[f"t{t}" for t in range(n)])


def save_likelihood(likelihood: np.ndarray, path: Union[str, Path]) -> Path:
    return write_csv(likelihood_frame(likelihood), path, float_format="%.9g")


def load_likelihood(path: Union[str, Path]) -> np.ndarray:
    """Read a likelihood CSV written by `save_likelihood`"""
    frame = read_csv(path)
    expected = [f"t{t}" for t in range(frame.shape[1])]
    if list(frame.columns) != expected:
        raise InvalidDistributionError(f"{path}: expected header {','.join(expected)}")
    likelihood = belief.validate_likelihood(frame.to_numpy(dtype=np.float64))
    logger.info(f"Loaded {likelihood.shape[0]}x{likelihood.shape[1]} likelihood from {path}")
    return likelihood
