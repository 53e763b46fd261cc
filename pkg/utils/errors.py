from typing import List, Optional

import numpy as np


class TreasureHuntError(Exception):
    """Base error for the simulator and its analysis tools"""


class InvalidDistributionError(TreasureHuntError, ValueError):
    """A probability vector, joint, strategy or matrix failed validation"""


class EmptyCountsError(InvalidDistributionError):
    """A count table with no observations was used as an estimator input"""


class InfeasibleUtilityError(TreasureHuntError, ValueError):
    """The requested performance level exceeds what any strategy attains"""

    def __init__(self, requested: float, achievable: float):
        super().__init__(
            f"Performance level {requested:.6g} is infeasible; "
            f"the maximum achievable utility is {achievable:.6g}"
        )
        self.requested = requested
        self.achievable = achievable


class ConvergenceError(TreasureHuntError, RuntimeError):
    """The strategy iteration hit its cap; carries the last iterate"""

    def __init__(self, message: str, last_strategy: np.ndarray, iterations: int):
        super().__init__(message)
        self.last_strategy = last_strategy
        self.iterations = iterations


class ConfigError(TreasureHuntError, ValueError):
    """Invalid configuration value; `key` names the offending setting"""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class UnknownScenarioError(ConfigError):
    def __init__(self, name: str, available: List[str]):
        super().__init__(
            "scenario",
            f"unknown preset '{name}'; available presets: {', '.join(available)}",
        )
        self.name = name
        self.available = available


class OutputError(TreasureHuntError, OSError):
    """A result file could not be written or read"""

    def __init__(self, path: str, reason: Optional[str] = None):
        message = f"Cannot access {path}"
        if reason:
            message += f": {reason}"
        super().__init__(message)
        self.path = path
