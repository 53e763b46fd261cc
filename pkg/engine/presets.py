"""Scenario presets for the treasure-hunt experiments."""

import logging
from typing import Optional

from registry import scenario
from schemas.treasure import AgentConfig, AgentPolicy, ScenarioConfig
from utils.helpers import percent_to_probability

logger = logging.getLogger(__name__)

CHANGING_P_CHANGE = 0.01


def _percent(value: Optional[float], default_percent: float) -> float:
    return default_percent if value is None else value


def _build(settings, name: str, focal: AgentConfig, others: AgentConfig,
           default_p_change: float = 0.0) -> ScenarioConfig:
    agents = [focal] + [others.model_copy() for _ in range(settings.agents - 1)]
    return ScenarioConfig(
        name=name,
        n_locations=settings.locations,
        n_agents=settings.agents,
        turns=settings.turns,
        runs=settings.runs,
        seed=settings.seed,
        p_change=default_p_change if settings.p_change is None else settings.p_change,
        agents=agents,
        calibration_samples=settings.calibration_samples,
        batch_observations=settings.batch_observations,
        exhaustion=settings.exhaustion,
        workers=settings.workers,
    )


def _warn_unused_observation(settings, name: str):
    if settings.obs_prob is not None or settings.focal_obs_prob is not None:
        logger.warning(f"Scenario {name} has no social agents; observation probabilities are ignored")


@scenario(name="single", description="Non-social certainty agents in a static world")
def single(settings) -> ScenarioConfig:
    _warn_unused_observation(settings, "single")
    agent = AgentConfig()
    return _build(settings, "single", agent, agent)


@scenario(name="random", description="Agents visiting uniformly random locations in a static world")
def random_search(settings) -> ScenarioConfig:
    _warn_unused_observation(settings, "random")
    agent = AgentConfig(policy=AgentPolicy.RANDOM)
    return _build(settings, "random", agent, agent)


@scenario(name="single-social", description="One social agent among non-social agents in a static world")
def single_social(settings) -> ScenarioConfig:
    focal = AgentConfig(social=True, obs_prob=percent_to_probability(
        _percent(settings.focal_obs_prob, 100.0), "focal_obs_prob"))
    if settings.obs_prob is not None:
        logger.warning("Scenario single-social keeps the other agents non-social; obs_prob is ignored")
    return _build(settings, "single-social", focal, AgentConfig())


@scenario(name="all-social", description="Social certainty agents observing every action in a static world")
def all_social(settings) -> ScenarioConfig:
    population_percent = _percent(settings.obs_prob, 100.0)
    population = percent_to_probability(population_percent, "obs_prob")
    focal = percent_to_probability(_percent(settings.focal_obs_prob, population_percent), "focal_obs_prob")
    return _build(settings, "all-social",
                  AgentConfig(social=True, obs_prob=focal),
                  AgentConfig(social=True, obs_prob=population))


@scenario(name="single-changing", description="Non-social certainty agents while the treasure relocates",
          changing_world=True)
def single_changing(settings) -> ScenarioConfig:
    _warn_unused_observation(settings, "single-changing")
    agent = AgentConfig()
    return _build(settings, "single-changing", agent, agent, CHANGING_P_CHANGE)


@scenario(name="single-uncertain", description="Non-social agents modelling relocation while the treasure relocates",
          changing_world=True)
def single_uncertain(settings) -> ScenarioConfig:
    _warn_unused_observation(settings, "single-uncertain")
    agent = AgentConfig(uncertainty_model=True)
    return _build(settings, "single-uncertain", agent, agent, CHANGING_P_CHANGE)


def _uncertain_social(settings, name: str, default_percent: float) -> ScenarioConfig:
    population_percent = _percent(settings.obs_prob, default_percent)
    population = percent_to_probability(population_percent, "obs_prob")
    focal = percent_to_probability(_percent(settings.focal_obs_prob, population_percent), "focal_obs_prob")
    return _build(settings, name,
                  AgentConfig(social=True, uncertainty_model=True, obs_prob=focal),
                  AgentConfig(social=True, uncertainty_model=True, obs_prob=population),
                  CHANGING_P_CHANGE)


@scenario(name="all-uncertain-social",
          description="Social agents modelling relocation, observing every action, while the treasure relocates",
          changing_world=True)
def all_uncertain_social(settings) -> ScenarioConfig:
    return _uncertain_social(settings, "all-uncertain-social", 100.0)


@scenario(name="partial",
          description="Social agents modelling relocation that see each action with a given probability",
          changing_world=True)
def partial(settings) -> ScenarioConfig:
    return _uncertain_social(settings, "partial", 30.0)
