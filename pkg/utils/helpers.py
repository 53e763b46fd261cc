import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from utils.errors import ConfigError, OutputError

logger = logging.getLogger(__name__)

# spawn-key prefixes keep run streams and the calibration stream disjoint
RUN_STREAM = 0
CALIBRATION_STREAM = 1


def make_stream(seed: int, *keys: int) -> np.random.Generator:
    """Derive an independent random stream from a master seed and a key path"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys))
    return np.random.default_rng(sequence)


def run_stream(seed: int, run_index: int) -> np.random.Generator:
    """Random stream dedicated to one simulation run"""
    return make_stream(seed, RUN_STREAM, run_index)


def calibration_stream(seed: int) -> np.random.Generator:
    return make_stream(seed, CALIBRATION_STREAM)


def percent_to_probability(value: float, key: str = "obs_prob") -> float:
    """Convert a percentage in [0, 100] to a probability"""
    if not 0.0 <= value <= 100.0:
        raise ConfigError(key, f"{value} is outside the percent range [0, 100]")
    return value / 100.0


def percent_grid(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid of percentages, e.g. 0, 5, ..., 100"""
    if step <= 0:
        raise ConfigError("step", f"grid step must be positive, got {step}")
    if not 0.0 <= start <= stop <= 100.0:
        raise ConfigError("start", f"grid must satisfy 0 <= start <= stop <= 100, got {start}..{stop}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def unit_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid on [0, 1] for performance levels"""
    if step <= 0:
        raise ConfigError("step", f"grid step must be positive, got {step}")
    if not 0.0 <= start <= stop <= 1.0:
        raise ConfigError("start", f"grid must satisfy 0 <= start <= stop <= 1, got {start}..{stop}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def write_csv(rows: Union[pd.DataFrame, Sequence[Dict[str, Any]]], path: Union[str, Path],
              float_format: str = "%.9g") -> Path:
    """Write rows as a comma-separated file with a header row and LF endings"""
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    target = Path(path)
    try:
        if target.parent and not target.parent.exists():
            target.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(target, index=False, float_format=float_format, lineterminator="\n")
    except OSError as e:
        raise OutputError(str(target), e.strerror or str(e)) from e
    logger.info(f"Wrote {len(frame)} rows to {target}")
    return target


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    target = Path(path)
    try:
        return pd.read_csv(target)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise OutputError(str(target), str(e)) from e


def format_duration(seconds: float) -> str:
    """Format duration in seconds to human readable string"""
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f}m"
    else:
        hours = seconds / 3600
        return f"{hours:.1f}h"


def configure_logging(level: str = "INFO"):
    """Set up the root logger once and (re)apply the level"""
    logging.basicConfig(format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    logging.getLogger().setLevel(getattr(logging, str(level).upper(), logging.INFO))
