"""Integer grid geometry, heading algebra and step execution.

Positions are 3D integer coordinates; a 2D grid is the z = 0 slice, so one
engine serves both dimensionalities. Every value here is immutable and every
function is pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from enums import CLOCKWISE, Dimensionality, FrameMode, Heading, MoveDirection
from errors import InvalidStepError

Vector = Tuple[int, int, int]


@dataclass(frozen=True)
class Coordinate:
    x: int
    y: int
    z: int = 0

    def shifted(self, vector: Vector, length: int = 1) -> Coordinate:
        dx, dy, dz = vector
        return Coordinate(self.x + dx * length, self.y + dy * length, self.z + dz * length)

    def as_tuple(self) -> Vector:
        return (self.x, self.y, self.z)

    def __sub__(self, other: Coordinate) -> Vector:
        return (self.x - other.x, self.y - other.y, self.z - other.z)


ORIGIN = Coordinate(0, 0, 0)


@dataclass(frozen=True)
class Step:
    direction: MoveDirection
    length: int

    def __post_init__(self):
        if isinstance(self.length, bool) or not isinstance(self.length, int) or self.length < 1:
            raise InvalidStepError(f"step length must be a positive integer, got {self.length!r}")

    def __str__(self) -> str:
        return f"{self.direction.value} {self.length}"


@dataclass(frozen=True)
class Pose:
    position: Coordinate
    heading: Heading


START_POSE = Pose(ORIGIN, Heading.PLUS_Y)


def validate_step(step: Step, dimensionality: Dimensionality) -> None:
    if dimensionality == Dimensionality.TWO_D and step.direction.is_vertical:
        raise InvalidStepError(f"'{step.direction.value}' is not a valid direction on a 2D grid")


def rotate(heading: Heading, direction: MoveDirection) -> Heading:
    """Heading after turning to face `direction`; up/down never turn."""
    index = CLOCKWISE.index(heading)
    return CLOCKWISE[(index + direction.quarter_turns) % len(CLOCKWISE)]


def world_axis(heading: Heading, direction: MoveDirection) -> Vector:
    if direction == MoveDirection.UP:
        return (0, 0, 1)
    if direction == MoveDirection.DOWN:
        return (0, 0, -1)
    return rotate(heading, direction).vector


def apply_step_cardinal(pose: Pose, step: Step) -> Pose:
    # The fixed frame is the egocentric frame that never leaves +Y.
    vector = world_axis(Heading.PLUS_Y, step.direction)
    return Pose(pose.position.shifted(vector, step.length), pose.heading)


def apply_step_egocentric(pose: Pose, step: Step) -> Pose:
    heading = rotate(pose.heading, step.direction)
    vector = world_axis(pose.heading, step.direction)
    return Pose(pose.position.shifted(vector, step.length), heading)


def apply_step(pose: Pose, step: Step, mode: FrameMode) -> Pose:
    if mode == FrameMode.CARDINAL:
        return apply_step_cardinal(pose, step)
    return apply_step_egocentric(pose, step)


def execute_path(start: Pose,
                 steps: Sequence[Step],
                 mode: FrameMode,
                 dimensionality: Dimensionality = Dimensionality.THREE_D) -> Tuple[Pose, List[Coordinate]]:
    """
    Walk `steps` from `start`.

    Returns:
        The final pose and the position reached after each step.
    """
    pose = start
    intermediates: List[Coordinate] = []
    for step in steps:
        validate_step(step, dimensionality)
        pose = apply_step(pose, step, mode)
        intermediates.append(pose.position)
    return pose, intermediates


def euclidean_distance(a: Coordinate, b: Coordinate) -> float:
    return math.dist(a.as_tuple(), b.as_tuple())
