import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class WorldState(BaseModel):
    """Ground truth: where the treasure is and how often it moves"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Number of locations")
    treasure: int = Field(..., ge=0, description="Location holding the treasure")
    p_change: float = Field(default=0.0, ge=0.0, le=1.0, description="Per-turn relocation probability")

    @model_validator(mode="after")
    def _check_treasure(self) -> "WorldState":
        if self.treasure >= self.n:
            raise ValueError(f"treasure location {self.treasure} out of range for {self.n} locations")
        return self


def new_world(n: int, p_change: float, rng: np.random.Generator) -> WorldState:
    """Place the treasure uniformly at random"""
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    return WorldState(n=n, treasure=int(rng.integers(n)), p_change=p_change)


def inspect(w: WorldState, loc: int) -> bool:
    """Whether `loc` holds the treasure; finding it does not move it"""
    if not 0 <= loc < w.n:
        raise ValueError(f"location {loc} out of range for {w.n} locations")
    return loc == w.treasure


def step_relocation(w: WorldState, rng: np.random.Generator) -> WorldState:
    """With probability p_change redraw the treasure over all locations, the current one included"""
    if w.p_change <= 0.0:
        return w
    if w.p_change < 1.0 and rng.random() >= w.p_change:
        return w
    treasure = int(rng.integers(w.n))
    if treasure != w.treasure:
        logger.debug(f"Treasure moved from {w.treasure} to {treasure}")
    return w.model_copy(update={"treasure": treasure})
