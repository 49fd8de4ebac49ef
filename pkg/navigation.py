"""Navigation task: path sampling, Follower/Instructor/Card2Ego golds and scoring."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from constants import NavConfig
from enums import (
    CLOCKWISE, HORIZONTAL_DIRECTIONS, Compass, Dimensionality, FrameMode, Heading, MoveDirection,
)
from errors import InvalidStepError, MalformedPathError
from grid import (
    ORIGIN, START_POSE, Coordinate, Step, euclidean_distance, execute_path, rotate, world_axis,
)
from seeds import make_rng, record_seeds

logger = logging.getLogger(__name__)

MAX_PATH_STEPS = 4
MAX_STEP_LENGTH = 10


@dataclass(frozen=True)
class NavPath:
    steps: Tuple[Step, ...]
    mode: FrameMode
    dimensionality: Dimensionality

    def __post_init__(self):
        if not 1 <= len(self.steps) <= MAX_PATH_STEPS:
            raise MalformedPathError(f"paths have 1-{MAX_PATH_STEPS} steps, got {len(self.steps)}")
        for previous, step in zip(self.steps, self.steps[1:]):
            if previous.direction == step.direction:
                raise MalformedPathError(f"consecutive '{step.direction.value}' steps")
        for step in self.steps:
            if step.length > MAX_STEP_LENGTH:
                raise MalformedPathError(f"step length {step.length} exceeds {MAX_STEP_LENGTH}")
            if self.dimensionality == Dimensionality.TWO_D and step.direction.is_vertical:
                raise MalformedPathError("2D paths cannot move up or down")


@dataclass(frozen=True)
class NavInstance:
    path: NavPath
    intermediates: Tuple[Coordinate, ...]
    final: Coordinate
    seed: int


@dataclass(frozen=True)
class CardinalStep:
    compass: Compass
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise InvalidStepError(f"step length must be positive, got {self.length}")

    def __str__(self) -> str:
        return f"{self.compass.value} {self.length}"


@dataclass(frozen=True)
class NavScore:
    accuracy: int
    distance: float


def available_directions(dimensionality: Dimensionality) -> List[MoveDirection]:
    if dimensionality == Dimensionality.TWO_D:
        return list(HORIZONTAL_DIRECTIONS)
    return list(HORIZONTAL_DIRECTIONS) + [MoveDirection.UP, MoveDirection.DOWN]


def stratified_step_counts(config: NavConfig, size: int, rng: np.random.Generator) -> List[int]:
    """Step counts for a batch with an equal share of every allowed count, shuffled."""
    lengths = list(range(config.min_steps, config.max_steps + 1))
    counts = [lengths[i % len(lengths)] for i in range(size)]
    return [int(c) for c in rng.permutation(counts)]


def generate_path(config: NavConfig, rng: np.random.Generator,
                  num_steps: Optional[int] = None) -> NavPath:
    if num_steps is None:
        num_steps = int(rng.integers(config.min_steps, config.max_steps + 1))
    choices = available_directions(config.dimensionality)
    steps: List[Step] = []
    previous = None
    for _ in range(num_steps):
        options = [d for d in choices if d != previous]
        direction = options[int(rng.integers(len(options)))]
        length = int(rng.integers(config.min_length, config.max_length + 1))
        steps.append(Step(direction, length))
        previous = direction
    return NavPath(tuple(steps), config.mode, config.dimensionality)


def make_instance(path: NavPath, seed: int) -> NavInstance:
    final, intermediates = execute_path(START_POSE, path.steps, path.mode, path.dimensionality)
    return NavInstance(path, tuple(intermediates), final.position, seed)


def generate_batch(config: NavConfig, size: int, seed: int) -> List[NavInstance]:
    counts = stratified_step_counts(config, size, make_rng(seed))
    instances = []
    for record_seed, num_steps in zip(record_seeds(seed, size), counts):
        path = generate_path(config, make_rng(record_seed), num_steps)
        instances.append(make_instance(path, record_seed))
    logger.info("generated %d %s %s paths", size, config.mode.value, config.dimensionality.value)
    return instances


def follower_gold(path: NavPath) -> Coordinate:
    final, _ = execute_path(START_POSE, path.steps, path.mode, path.dimensionality)
    return final.position


def _direction_toward(heading: Heading, unit: Tuple[int, int, int]) -> MoveDirection:
    for direction in MoveDirection:
        if world_axis(heading, direction) == unit:
            return direction
    raise MalformedPathError(f"no direction moves along {unit}")


def instructor_gold(intermediates: Sequence[Coordinate], mode: FrameMode,
                    dimensionality: Dimensionality) -> List[Step]:
    """
    Recover the instruction chain that visits `intermediates` in order.

    The list may start with the origin or with the first position reached;
    every leg must move along exactly one axis.
    """
    waypoints = list(intermediates)
    if not waypoints:
        return []
    if waypoints[0] != ORIGIN:
        waypoints.insert(0, ORIGIN)

    heading = Heading.PLUS_Y
    steps: List[Step] = []
    for start, end in zip(waypoints, waypoints[1:]):
        delta = end - start
        moving = [axis for axis, d in enumerate(delta) if d != 0]
        if len(moving) != 1:
            raise MalformedPathError(f"leg {start} -> {end} must change exactly one axis")
        axis = moving[0]
        if axis == 2 and dimensionality == Dimensionality.TWO_D:
            raise MalformedPathError(f"leg {start} -> {end} leaves the 2D plane")
        unit = tuple(int(np.sign(d)) for d in delta)
        frame = heading if mode == FrameMode.EGOCENTRIC else Heading.PLUS_Y
        direction = _direction_toward(frame, unit)
        steps.append(Step(direction, abs(delta[axis])))
        if mode == FrameMode.EGOCENTRIC:
            heading = rotate(heading, direction)
    return steps


def generate_cardinal_path(config: NavConfig, rng: np.random.Generator,
                           num_steps: Optional[int] = None) -> Tuple[CardinalStep, ...]:
    # Repeated compass legs are allowed here.
    if num_steps is None:
        num_steps = int(rng.integers(config.min_steps, config.max_steps + 1))
    compasses = list(Compass)
    return tuple(
        CardinalStep(compasses[int(rng.integers(len(compasses)))],
                     int(rng.integers(config.min_length, config.max_length + 1)))
        for _ in range(num_steps)
    )


_TURNS = {0: MoveDirection.FORWARD, 1: MoveDirection.RIGHT,
          2: MoveDirection.BACKWARD, 3: MoveDirection.LEFT}


def card2ego(steps: Sequence[CardinalStep]) -> List[Step]:
    facing = Compass.NORTH
    result = []
    for step in steps:
        offset = (CLOCKWISE.index(step.compass.heading) - CLOCKWISE.index(facing.heading)) % 4
        result.append(Step(_TURNS[offset], step.length))
        facing = step.compass
    return result


def compass_endpoint(steps: Sequence[CardinalStep]) -> Coordinate:
    position = ORIGIN
    for step in steps:
        position = position.shifted(step.compass.heading.vector, step.length)
    return position


@dataclass(frozen=True)
class Card2EgoInstance:
    path: Tuple[CardinalStep, ...]
    steps: Tuple[Step, ...]
    seed: int


def make_card2ego_instance(config: NavConfig, seed: int, num_steps: Optional[int] = None) -> Card2EgoInstance:
    path = generate_cardinal_path(config, make_rng(seed), num_steps)
    return Card2EgoInstance(path, tuple(card2ego(path)), seed)


def score_follower(predicted: Optional[Coordinate], gold: Coordinate) -> NavScore:
    if predicted is None:
        return NavScore(0, euclidean_distance(ORIGIN, gold))
    return NavScore(int(predicted == gold), euclidean_distance(predicted, gold))


def score_chain(predicted_steps: Optional[Sequence[Step]], gold_steps: Sequence[Step],
                mode: FrameMode, dimensionality: Dimensionality) -> NavScore:
    gold_final, _ = execute_path(START_POSE, gold_steps, mode, dimensionality)
    fallback = NavScore(0, euclidean_distance(ORIGIN, gold_final.position))
    if not predicted_steps:
        return fallback
    try:
        final, _ = execute_path(START_POSE, predicted_steps, mode, dimensionality)
    except InvalidStepError:
        return fallback
    accuracy = int(tuple(predicted_steps) == tuple(gold_steps))
    return NavScore(accuracy, euclidean_distance(final.position, gold_final.position))


def score_instructor(predicted_steps: Optional[Sequence[Step]], gold: NavInstance) -> NavScore:
    return score_chain(predicted_steps, gold.path.steps, gold.path.mode, gold.path.dimensionality)


def format_steps(steps: Sequence[Step]) -> str:
    """Instruction chain as answered, e.g. 'forward 7, backward 8, right 4'."""
    return ', '.join(str(step) for step in steps)


def format_cardinal(steps: Sequence[CardinalStep]) -> str:
    return ', '.join(str(step) for step in steps)


def direction_changes(steps: Sequence[Step]) -> Tuple[int, int]:
    """(non-forward transitions, transitions) for one chain."""
    transitions = steps[1:]
    return sum(1 for s in transitions if s.direction != MoveDirection.FORWARD), len(transitions)
