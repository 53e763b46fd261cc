"""
Turn-based simulation loop.

Within a turn agents act one after another in index order. Every move can
be seen by the other social agents, each with its own observation
probability, and observers update their belief before the next agent
acts. After the whole population has acted the treasure may relocate.
"""

import logging
import time
from multiprocessing import Pool
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from agents.population import AgentPopulation
from context.world import WorldState, inspect, new_world, step_relocation
from schemas.treasure import RunRecord, ScenarioConfig
from utils.helpers import format_duration, run_stream

logger = logging.getLogger(__name__)


class TurnEvent(NamedTuple):
    agent: int
    action: int
    treasure: int
    found: bool


def run_turn(world: WorldState, agents: AgentPopulation, likelihood: np.ndarray,
             rng: np.random.Generator, batch_observations: bool = False) -> Tuple[WorldState, List[TurnEvent]]:
    """Let every agent act once, then step the world"""
    events: List[TurnEvent] = []
    pending = []
    for agent in range(len(agents)):
        action = agents.choose(agent, rng)
        found = inspect(world, action)
        events.append(TurnEvent(agent, action, world.treasure, found))

        observers = agents.observers_of(agent, rng)
        if batch_observations:
            pending.append((observers, action))
        else:
            agents.observe(observers, action, likelihood)

        agents.learn(agent, action, found)
        if world.p_change > 0.0:
            agents.settle(agent, world.p_change)

    for observers, action in pending:
        agents.observe(observers, action, likelihood)

    return step_relocation(world, rng), events


def run_simulation(cfg: ScenarioConfig, likelihood: np.ndarray, run_index: int) -> RunRecord:
    """Execute one run on its own random stream"""
    rng = run_stream(cfg.seed, run_index)
    world = new_world(cfg.n_locations, cfg.p_change, rng)
    agents = AgentPopulation(cfg.agents, cfg.n_locations, cfg.exhaustion)

    joint = np.zeros((cfg.n_agents, cfg.n_locations, cfg.n_locations), dtype=np.int64)
    hits = np.zeros(cfg.n_agents, dtype=np.int64)
    for _ in range(cfg.turns):
        world, events = run_turn(world, agents, likelihood, rng, cfg.batch_observations)
        for event in events:
            joint[event.agent, event.action, event.treasure] += 1
            if event.found:
                hits[event.agent] += 1

    actions = np.full(cfg.n_agents, cfg.turns, dtype=np.int64)
    logger.debug(f"Run {run_index}: {int(hits.sum())} finds in {int(actions.sum())} actions")
    return RunRecord(joint=joint, hits=hits, actions=actions, runs=1)


def _run_worker(args: Tuple[ScenarioConfig, np.ndarray, int]) -> RunRecord:
    cfg, likelihood, run_index = args
    return run_simulation(cfg, likelihood, run_index)


def run_batch(cfg: ScenarioConfig, likelihood: np.ndarray, workers: Optional[int] = None) -> RunRecord:
    """
    Execute `cfg.runs` independent runs and merge them by summation.

    Each run draws from the stream derived from (seed, run index), so the
    merged record does not depend on the number of worker processes.
    """
    workers = workers or cfg.workers
    started = time.perf_counter()
    logger.info(f"Running '{cfg.name}': {cfg.runs} runs x {cfg.turns} turns, "
                f"{cfg.n_agents} agents, {cfg.n_locations} locations, {workers} worker(s)")

    tasks = [(cfg, likelihood, run_index) for run_index in range(cfg.runs)]
    progress_every = max(1, cfg.runs // 10)
    merged = RunRecord.empty(cfg.n_agents, cfg.n_locations)

    def collect(results):
        nonlocal merged
        for done, record in enumerate(results, start=1):
            merged = merged.merge(record)
            if done % progress_every == 0 or done == cfg.runs:
                logger.info(f"  [{done}/{cfg.runs}] runs complete "
                            f"({format_duration(time.perf_counter() - started)})")

    if workers <= 1 or cfg.runs == 1:
        collect(_run_worker(task) for task in tasks)
    else:
        # imap preserves run order, so the reduction is deterministic
        with Pool(processes=workers) as pool:
            collect(pool.imap(_run_worker, tasks, chunksize=max(1, cfg.runs // (workers * 4))))

    return merged
