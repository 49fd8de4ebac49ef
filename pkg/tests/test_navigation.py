import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from constants import NavConfig
from enums import Compass, Dimensionality, FrameMode, MoveDirection
from errors import ConfigError, MalformedPathError
from grid import START_POSE, Coordinate, Step, execute_path
from navigation import (
    CardinalStep, NavPath, card2ego, compass_endpoint, direction_changes, follower_gold, format_steps,
    generate_batch, generate_cardinal_path, generate_path, instructor_gold, make_instance, score_chain,
    score_follower, stratified_step_counts,
)
from seeds import make_rng, record_seeds

R, L, F, B, U, D = (MoveDirection.RIGHT, MoveDirection.LEFT, MoveDirection.FORWARD,
                    MoveDirection.BACKWARD, MoveDirection.UP, MoveDirection.DOWN)
N, E, S, W = Compass.NORTH, Compass.EAST, Compass.SOUTH, Compass.WEST

ALL_SETTINGS = [(mode, dim) for mode in FrameMode for dim in Dimensionality]


def steps(*pairs):
    return tuple(Step(direction, length) for direction, length in pairs)


def legs(*pairs):
    return tuple(CardinalStep(compass, length) for compass, length in pairs)


class TestNavPath:
    def test_rejects_repeated_direction(self):
        with pytest.raises(MalformedPathError):
            NavPath(steps((L, 2), (L, 3)), FrameMode.EGOCENTRIC, Dimensionality.TWO_D)

    def test_rejects_long_paths(self):
        with pytest.raises(MalformedPathError):
            NavPath(steps((L, 1), (R, 1), (L, 1), (R, 1), (L, 1)), FrameMode.CARDINAL, Dimensionality.TWO_D)

    def test_rejects_vertical_in_2d(self):
        with pytest.raises(MalformedPathError):
            NavPath(steps((U, 1),), FrameMode.CARDINAL, Dimensionality.TWO_D)

    def test_config_validates_ranges(self):
        with pytest.raises(ConfigError):
            NavConfig(min_steps=0)
        with pytest.raises(ConfigError):
            NavConfig(max_length=11)


class TestGeneration:
    def test_stratified_lengths(self):
        counts = stratified_step_counts(NavConfig(), 100, make_rng(7))
        assert Counter(counts) == {1: 25, 2: 25, 3: 25, 4: 25}

    def test_batch_is_stratified_and_deterministic(self):
        config = NavConfig(mode=FrameMode.CARDINAL, dimensionality=Dimensionality.THREE_D)
        first = generate_batch(config, 100, seed=11)
        second = generate_batch(config, 100, seed=11)
        assert first == second
        assert Counter(len(i.path.steps) for i in first) == {1: 25, 2: 25, 3: 25, 4: 25}

    @pytest.mark.parametrize("mode,dim", ALL_SETTINGS)
    def test_paths_respect_constraints(self, mode, dim):
        config = NavConfig(mode=mode, dimensionality=dim)
        for seed in record_seeds(3, 200):
            path = generate_path(config, make_rng(seed))
            assert 1 <= len(path.steps) <= 4
            assert all(a.direction != b.direction for a, b in zip(path.steps, path.steps[1:]))
            assert all(1 <= s.length <= 10 for s in path.steps)
            if dim == Dimensionality.TWO_D:
                assert not any(s.direction.is_vertical for s in path.steps)

    def test_fixed_step_count(self):
        path = generate_path(NavConfig(), make_rng(1), num_steps=3)
        assert len(path.steps) == 3


class TestFollower:
    def test_worked_instance(self):
        path = NavPath(steps((R, 7), (F, 5), (U, 10), (B, 5)), FrameMode.EGOCENTRIC, Dimensionality.THREE_D)
        assert follower_gold(path) == Coordinate(7, 0, 10)
        cardinal = NavPath(path.steps, FrameMode.CARDINAL, Dimensionality.THREE_D)
        assert follower_gold(cardinal) == Coordinate(7, 5, 10)

    @pytest.mark.parametrize("mode", list(FrameMode))
    def test_single_forward_step(self, mode):
        path = NavPath(steps((F, 6),), mode, Dimensionality.TWO_D)
        assert follower_gold(path) == Coordinate(0, 6, 0)

    def test_score_exact(self):
        score = score_follower(Coordinate(7, 0, 10), Coordinate(7, 0, 10))
        assert (score.accuracy, score.distance) == (1, 0)

    def test_score_miss(self):
        score = score_follower(Coordinate(7, 0, -10), Coordinate(7, 0, 10))
        assert (score.accuracy, score.distance) == (0, 20)

    def test_score_unparseable_falls_back_to_origin(self):
        score = score_follower(None, Coordinate(20, 20, 20))
        assert score.accuracy == 0
        assert score.distance == pytest.approx(34.64, abs=0.01)


class TestInstructor:
    def test_worked_instance(self):
        waypoints = [Coordinate(0, 7), Coordinate(0, -1), Coordinate(-4, -1)]
        expected = list(steps((F, 7), (B, 8), (R, 4)))
        assert instructor_gold(waypoints, FrameMode.EGOCENTRIC, Dimensionality.TWO_D) == expected
        # a leading origin is accepted too
        assert instructor_gold([Coordinate(0, 0)] + waypoints, FrameMode.EGOCENTRIC,
                               Dimensionality.TWO_D) == expected

    def test_single_leg(self):
        assert instructor_gold([Coordinate(0, 5)], FrameMode.EGOCENTRIC, Dimensionality.TWO_D) == [Step(F, 5)]

    def test_cardinal_legs(self):
        waypoints = [Coordinate(3, 0), Coordinate(3, 1), Coordinate(3, -1)]
        assert instructor_gold(waypoints, FrameMode.CARDINAL, Dimensionality.TWO_D) == list(
            steps((R, 3), (F, 1), (B, 2)))

    @pytest.mark.parametrize("waypoints", [
        [Coordinate(2, 3)],
        [Coordinate(1, 0), Coordinate(1, 0)],
    ])
    def test_malformed_legs(self, waypoints):
        with pytest.raises(MalformedPathError):
            instructor_gold(waypoints, FrameMode.CARDINAL, Dimensionality.TWO_D)

    def test_vertical_leg_in_2d(self):
        with pytest.raises(MalformedPathError):
            instructor_gold([Coordinate(0, 0, 2)], FrameMode.CARDINAL, Dimensionality.TWO_D)

    @pytest.mark.parametrize("mode,dim", ALL_SETTINGS)
    def test_round_trip(self, mode, dim):
        config = NavConfig(mode=mode, dimensionality=dim)
        failures = 0
        for seed in record_seeds(2024, 10_000):
            instance = make_instance(generate_path(config, make_rng(seed)), seed)
            if tuple(instructor_gold(instance.intermediates, mode, dim)) != instance.path.steps:
                failures += 1
        assert failures == 0

    def test_score_exact_chain(self):
        gold = steps((F, 7), (B, 8), (R, 4))
        score = score_chain(list(gold), gold, FrameMode.EGOCENTRIC, Dimensionality.TWO_D)
        assert (score.accuracy, score.distance) == (1, 0)

    def test_score_wrong_chain_measures_endpoints(self):
        gold = steps((F, 7), (B, 8), (R, 4))
        predicted = steps((F, 7), (B, 8), (B, 4), (F, 1))
        score = score_chain(predicted, gold, FrameMode.EGOCENTRIC, Dimensionality.TWO_D)
        # gold ends at (-4, -1), the prediction at (0, 4)
        assert score.accuracy == 0
        assert score.distance == pytest.approx(math.sqrt(41))

    def test_score_one_length_off(self):
        gold = steps((R, 3), (L, 2))
        score = score_chain(steps((R, 3), (L, 5)), gold, FrameMode.CARDINAL, Dimensionality.TWO_D)
        assert (score.accuracy, score.distance) == (0, 3)

    def test_score_unexecutable_prediction(self):
        gold = steps((R, 3), (F, 4))
        score = score_chain(steps((U, 2),), gold, FrameMode.CARDINAL, Dimensionality.TWO_D)
        assert score.accuracy == 0
        assert score.distance == pytest.approx(5)
        assert score_chain(None, gold, FrameMode.CARDINAL, Dimensionality.TWO_D).distance == pytest.approx(5)


class TestCard2Ego:
    @pytest.mark.parametrize("path,expected", [
        (legs((W, 2), (N, 3), (E, 1)), steps((L, 2), (R, 3), (R, 1))),
        (legs((W, 3), (E, 8), (S, 1), (S, 10)), steps((L, 3), (B, 8), (R, 1), (F, 10))),
        (legs((N, 4),), steps((F, 4),)),
    ])
    def test_worked_conversions(self, path, expected):
        assert tuple(card2ego(path)) == expected

    def test_endpoints_agree(self):
        config = NavConfig()
        failures = 0
        for seed in record_seeds(99, 10_000):
            path = generate_cardinal_path(config, make_rng(seed))
            final, _ = execute_path(START_POSE, card2ego(path), FrameMode.EGOCENTRIC, Dimensionality.TWO_D)
            if final.position != compass_endpoint(path):
                failures += 1
        assert failures == 0

    @settings(max_examples=200, derandomize=True)
    @given(st.lists(st.tuples(st.sampled_from(list(Compass)), st.integers(1, 10)), min_size=1, max_size=8))
    def test_endpoints_agree_for_any_legs(self, pairs):
        path = legs(*pairs)
        final, _ = execute_path(START_POSE, card2ego(path), FrameMode.EGOCENTRIC, Dimensionality.TWO_D)
        assert final.position == compass_endpoint(path)


def test_format_steps():
    assert format_steps(steps((F, 7), (B, 8), (R, 4))) == "forward 7, backward 8, right 4"


def test_direction_changes():
    assert direction_changes(steps((F, 1), (R, 2), (F, 3), (L, 1))) == (2, 3)
    assert direction_changes(steps((F, 1),)) == (0, 0)
