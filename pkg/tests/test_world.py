import numpy as np
import pytest
from scipy.stats import chisquare

from context.world import WorldState, inspect, new_world, step_relocation


def test_initial_placement_is_uniform(rng):
    placements = [new_world(10, 0.0, rng).treasure for _ in range(20_000)]
    counts = np.bincount(placements, minlength=10)
    assert chisquare(counts).pvalue > 0.001


def test_two_locations(rng):
    assert new_world(2, 0.0, rng).treasure in (0, 1)


def test_needs_two_locations(rng):
    with pytest.raises(ValueError):
        new_world(1, 0.0, rng)


def test_same_seed_same_world():
    first = new_world(10, 0.0, np.random.default_rng(42))
    second = new_world(10, 0.0, np.random.default_rng(42))
    assert first == second


def test_treasure_must_be_in_range():
    with pytest.raises(ValueError):
        WorldState(n=3, treasure=3)


class TestInspect:
    def test_hit_and_miss(self):
        world = WorldState(n=10, treasure=4)
        assert inspect(world, 4) is True
        assert inspect(world, 5) is False

    def test_finding_does_not_move_treasure(self):
        world = WorldState(n=10, treasure=4)
        inspect(world, 4)
        assert world.treasure == 4

    @pytest.mark.parametrize("loc", [-1, 10])
    def test_out_of_range(self, loc):
        with pytest.raises(ValueError):
            inspect(WorldState(n=10, treasure=0), loc)


class TestRelocation:
    def test_static_world_never_moves_or_draws(self):
        rng = np.random.default_rng(1)
        world = WorldState(n=10, treasure=3)
        for _ in range(1000):
            world = step_relocation(world, rng)
        assert world.treasure == 3
        assert rng.random() == np.random.default_rng(1).random()

    def test_certain_relocation_is_uniform(self, rng):
        world = WorldState(n=10, treasure=0, p_change=1.0)
        placements = []
        for _ in range(20_000):
            world = step_relocation(world, rng)
            placements.append(world.treasure)
        assert chisquare(np.bincount(placements, minlength=10)).pvalue > 0.001

    def test_relocation_rate(self, rng):
        world = WorldState(n=10, treasure=0, p_change=0.01)
        moves = 0
        for _ in range(200_000):
            moved = step_relocation(world, rng)
            moves += moved.treasure != world.treasure
            world = moved
        # a redraw lands on the current location one time in ten
        assert 1600 <= moves <= 2000

    def test_long_run_occupancy_is_uniform(self, rng):
        world = WorldState(n=10, treasure=0, p_change=0.5)
        samples = []
        for step in range(100_000):
            world = step_relocation(world, rng)
            if step % 10 == 0:
                samples.append(world.treasure)
        assert chisquare(np.bincount(samples, minlength=10)).pvalue > 0.001
