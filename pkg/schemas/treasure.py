from enum import Enum
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

CALIBRATION_SAMPLE_FLOOR = 10_000


class AgentPolicy(str, Enum):
    """How an agent picks the location it visits"""
    BAYESIAN = "bayesian"
    RANDOM = "random"


class ExhaustionPolicy(str, Enum):
    """What a certainty-model agent does once every location is eliminated"""
    RANDOM_SEARCH = "random"
    RESET = "reset"


class SweepParameter(str, Enum):
    """Which observation probability a sweep varies"""
    POPULATION = "population"
    FOCAL = "focal"


class AgentConfig(BaseModel):
    """Per-agent behaviour switches"""
    social: bool = Field(default=False, description="Whether the agent observes other agents' actions")
    uncertainty_model: bool = Field(default=False, description="Whether the agent mixes its belief towards uniform each turn")
    obs_prob: float = Field(default=0.0, ge=0.0, le=1.0, description="Observer-side chance of seeing each action")
    policy: AgentPolicy = Field(default=AgentPolicy.BAYESIAN, description="Action selection policy")


class ScenarioConfig(BaseModel):
    """Full description of one experiment"""
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="custom", description="Preset the configuration was built from")
    n_locations: int = Field(default=10, ge=2, description="Number of locations")
    n_agents: int = Field(default=10, ge=1, description="Population size")
    turns: int = Field(default=1000, ge=1, description="Turns per run")
    runs: int = Field(default=1000, ge=1, description="Independent runs per batch")
    seed: int = Field(default=0, ge=0, description="Master seed")
    p_change: float = Field(default=0.0, ge=0.0, le=1.0, description="Per-turn relocation probability")
    agents: List[AgentConfig] = Field(..., description="Agent configurations, index 0 is the focal agent")
    calibration_samples: int = Field(default=100_000, ge=CALIBRATION_SAMPLE_FLOOR, description="Actions gathered to estimate P(A|T)")
    batch_observations: bool = Field(default=False, description="Apply social updates at the end of the turn")
    exhaustion: ExhaustionPolicy = Field(default=ExhaustionPolicy.RANDOM_SEARCH, description="Certainty-agent behaviour after eliminating every location")
    workers: int = Field(default=1, ge=1, description="Worker processes for batch execution")

    @model_validator(mode="after")
    def _check_population(self) -> "ScenarioConfig":
        if len(self.agents) != self.n_agents:
            raise ValueError(f"agents list has {len(self.agents)} entries but n_agents is {self.n_agents}")
        return self

    @property
    def focal_obs_prob(self) -> float:
        return self.agents[0].obs_prob

    @property
    def obs_prob(self) -> float:
        """Observation probability of the non-focal population"""
        return self.agents[1].obs_prob if self.n_agents > 1 else self.agents[0].obs_prob

    @property
    def has_distinct_focal(self) -> bool:
        return self.n_agents > 1 and any(agent != self.agents[0] for agent in self.agents[1:])

    def with_obs_prob(self, parameter: SweepParameter, probability: float) -> "ScenarioConfig":
        """Copy with the observation probability of the swept agents replaced"""
        agents = []
        for index, agent in enumerate(self.agents):
            swept = parameter == SweepParameter.POPULATION or index == 0
            if swept and agent.social:
                agent = agent.model_copy(update={"obs_prob": probability})
            agents.append(agent)
        return self.model_copy(update={"agents": agents})


class JointCounts(BaseModel):
    """Integer co-occurrence counts of (action, treasure location at action time)"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    counts: np.ndarray = Field(..., description="Square count matrix indexed by (action, treasure)")

    @field_validator("counts")
    @classmethod
    def _check_counts(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value)
        if value.ndim != 2:
            raise ValueError("count table must be two-dimensional")
        if not np.issubdtype(value.dtype, np.integer):
            raise ValueError("count table must hold integers")
        if (value < 0).any():
            raise ValueError("counts must be non-negative")
        return value.astype(np.int64, copy=False)

    @classmethod
    def zeros(cls, n: int) -> "JointCounts":
        return cls(counts=np.zeros((n, n), dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def diagonal(self) -> int:
        return int(np.trace(self.counts))

    def merge(self, other: "JointCounts") -> "JointCounts":
        return JointCounts(counts=self.counts + other.counts)


AgentSelector = Union[str, int, Sequence[int]]


class RunRecord(BaseModel):
    """Accumulated per-agent statistics of one or more runs"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    joint: np.ndarray = Field(..., description="Per-agent (action, treasure) counts, shape (agents, n, n)")
    hits: np.ndarray = Field(..., description="Per-agent number of actions that found the treasure")
    actions: np.ndarray = Field(..., description="Per-agent number of recorded actions")
    runs: int = Field(default=1, ge=0, description="Number of runs merged into this record")

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunRecord":
        if self.joint.ndim != 3 or self.joint.shape[1] != self.joint.shape[2]:
            raise ValueError("joint counts must have shape (agents, n, n)")
        if self.hits.shape != (self.joint.shape[0],) or self.actions.shape != self.hits.shape:
            raise ValueError("hits and actions must hold one entry per agent")
        if (self.hits > self.actions).any():
            raise ValueError("hit count exceeds recorded actions")
        if not np.array_equal(self.joint.sum(axis=(1, 2)), self.actions):
            raise ValueError("joint count totals disagree with recorded actions")
        return self

    @classmethod
    def empty(cls, n_agents: int, n_locations: int, runs: int = 0) -> "RunRecord":
        return cls(
            joint=np.zeros((n_agents, n_locations, n_locations), dtype=np.int64),
            hits=np.zeros(n_agents, dtype=np.int64),
            actions=np.zeros(n_agents, dtype=np.int64),
            runs=runs,
        )

    @property
    def n_agents(self) -> int:
        return self.joint.shape[0]

    @property
    def n_locations(self) -> int:
        return self.joint.shape[1]

    @property
    def total_actions(self) -> int:
        return int(self.actions.sum())

    def merge(self, other: "RunRecord") -> "RunRecord":
        """Sum two records; associative and commutative"""
        if self.joint.shape != other.joint.shape:
            raise ValueError(f"cannot merge records of shape {self.joint.shape} and {other.joint.shape}")
        return RunRecord(
            joint=self.joint + other.joint,
            hits=self.hits + other.hits,
            actions=self.actions + other.actions,
            runs=self.runs + other.runs,
        )

    def agent_indices(self, selector: AgentSelector = "population") -> np.ndarray:
        """Resolve a selector: 'population', 'focal', 'others', an index or a list of indices"""
        if isinstance(selector, str):
            if selector == "population":
                return np.arange(self.n_agents)
            if selector == "focal":
                return np.array([0])
            if selector == "others":
                return np.arange(1, self.n_agents)
            raise ValueError(f"unknown agent selector '{selector}'")
        indices = np.atleast_1d(np.asarray(selector, dtype=np.int64))
        if indices.size and (indices.min() < 0 or indices.max() >= self.n_agents):
            raise ValueError(f"agent selector {selector} out of range for {self.n_agents} agents")
        return indices

    def counts_for(self, selector: AgentSelector = "population") -> JointCounts:
        """Pool the joint counts of the selected agents"""
        indices = self.agent_indices(selector)
        return JointCounts(counts=self.joint[indices].sum(axis=0).astype(np.int64))

    def same_as(self, other: "RunRecord") -> bool:
        return (
            self.runs == other.runs
            and np.array_equal(self.joint, other.joint)
            and np.array_equal(self.hits, other.hits)
            and np.array_equal(self.actions, other.actions)
        )


class SweepSpec(BaseModel):
    """Grid over an observation probability, in percent"""
    parameter: SweepParameter = Field(default=SweepParameter.POPULATION, description="Swept selector")
    start: float = Field(default=0.0, ge=0.0, le=100.0, description="First grid point in percent")
    stop: float = Field(default=100.0, ge=0.0, le=100.0, description="Last grid point in percent")
    step: float = Field(default=5.0, gt=0.0, description="Grid spacing in percent")
    base: ScenarioConfig = Field(..., description="Configuration every grid point starts from")

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepSpec":
        if self.start > self.stop:
            raise ValueError(f"grid start {self.start} exceeds stop {self.stop}")
        return self


class TradeoffPoint(BaseModel):
    """One point on (or above) the performance/information plane"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    utility: float = Field(..., description="Expected pay-off of the strategy")
    information: float = Field(..., ge=0.0, description="I(A;R) of the strategy in bits")
    strategy: Optional[np.ndarray] = Field(None, description="Conditional p(a|r), columns indexed by world state")
    beta: Optional[float] = Field(None, description="Inverse temperature the strategy was traced at")


class MetricsRow(BaseModel):
    """One output row of a scenario run"""
    scenario: str
    selector: str
    n_locations: int
    n_agents: int
    p_change: float
    obs_prob: float = Field(..., description="Population observation probability in percent")
    focal_obs_prob: float = Field(..., description="Focal agent observation probability in percent")
    runs: int
    turns: int
    seed: int
    performance: float
    mi_bits: float
    mean_turns_to_find: Optional[float] = None


class SweepRow(BaseModel):
    """One grid point of an observation-probability sweep"""
    parameter: SweepParameter
    grid_percent: float
    selector: str
    performance: float
    mi_bits: float
    ri_bits: float = Field(..., description="Minimum information needed for the achieved performance")
    excess_bits: float = Field(..., description="Information processed beyond the relevant information")
