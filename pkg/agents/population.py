import logging
from typing import List

import numpy as np

from agents import belief
from schemas.treasure import AgentConfig, AgentPolicy, ExhaustionPolicy

logger = logging.getLogger(__name__)


class AgentPopulation:
    """
    The agents of one run and their beliefs.

    Row i of `beliefs` is owned by agent i and only changes through the
    belief update rules, driven by the engine one event at a time.
    """

    def __init__(self, configs: List[AgentConfig], n_locations: int,
                 exhaustion: ExhaustionPolicy = ExhaustionPolicy.RANDOM_SEARCH):
        if not configs:
            raise ValueError("a population needs at least one agent")
        self.configs = list(configs)
        self.n_locations = n_locations
        self.exhaustion = ExhaustionPolicy(exhaustion)
        self.beliefs = np.tile(belief.new_uniform(n_locations), (len(configs), 1))

        self.social = np.array([c.social for c in configs], dtype=bool)
        self.uncertain = np.array([c.uncertainty_model for c in configs], dtype=bool)
        self.random_policy = np.array([c.policy == AgentPolicy.RANDOM for c in configs], dtype=bool)
        self.obs_prob = np.array([c.obs_prob if c.social else 0.0 for c in configs])
        # observers that always see, and those that need a Bernoulli draw
        self._always = self.social & (self.obs_prob >= 1.0)
        self._sometimes = self.social & (self.obs_prob > 0.0) & (self.obs_prob < 1.0)

    def __len__(self) -> int:
        return len(self.configs)

    def choose(self, agent: int, rng: np.random.Generator) -> int:
        if self.random_policy[agent]:
            return int(rng.integers(self.n_locations))
        return belief.select_action(self.beliefs[agent], rng)

    def observers_of(self, actor: int, rng: np.random.Generator) -> np.ndarray:
        """Agents that perceive `actor`'s move; each draws with its own probability"""
        always = self._always.copy()
        sometimes = self._sometimes.copy()
        always[actor] = False
        sometimes[actor] = False
        candidates = np.flatnonzero(sometimes)
        if candidates.size:
            seen = rng.random(candidates.size) < self.obs_prob[candidates]
            always[candidates[seen]] = True
        return np.flatnonzero(always)

    def observe(self, observers: np.ndarray, action: int, likelihood: np.ndarray) -> None:
        belief.apply_social_updates(self.beliefs, observers, action, likelihood)

    def learn(self, agent: int, location: int, found: bool) -> None:
        """Apply the agent's own inspection result"""
        updated = belief.observe_location_result(self.beliefs[agent], location, found)
        if belief.is_degenerate(updated):
            if self.exhaustion == ExhaustionPolicy.RESET:
                logger.debug(f"Agent {agent} ruled out every location; resetting its belief")
                updated = belief.new_uniform(self.n_locations)
            elif not belief.is_degenerate(self.beliefs[agent]):
                logger.debug(f"Agent {agent} ruled out every location; searching at random")
        self.beliefs[agent] = updated

    def settle(self, agent: int, p_change: float) -> None:
        """End-of-action uncertainty step for agents that model relocation"""
        if self.uncertain[agent]:
            self.beliefs[agent] = belief.apply_uncertainty(self.beliefs[agent], p_change, self.n_locations)

    def is_degenerate(self, agent: int) -> bool:
        return belief.is_degenerate(self.beliefs[agent])
