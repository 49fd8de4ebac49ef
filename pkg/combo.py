"""Combined navigation and structure localization scenes."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Set, Tuple

import numpy as np

from constants import ComboConfig
from enums import HORIZONTAL_DIRECTIONS, Color, FrameMode, ShapeKind
from errors import DegenerateSceneError, GenerationError, InvalidShapeError
from grid import START_POSE, Coordinate, Pose, Step, execute_path
from localization import ColoredBlock, RelationSet, relation_oracle_allo
from seeds import make_rng, record_seeds
from structures import ColorScheme, Shape, sample_dims, to_blocks

logger = logging.getLogger(__name__)

FACE_OFFSETS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


@dataclass(frozen=True)
class ComboInstance:
    steps: Tuple[Step, ...]
    final: Pose
    # The question asks where `target` is relative to `reference`.
    target: Shape
    reference: Shape
    distractors: Tuple[ColoredBlock, ...]
    blocks: Tuple[ColoredBlock, ...]
    gold: RelationSet

    def __post_init__(self):
        if self.target.kind == self.reference.kind:
            raise InvalidShapeError("the two named structures must have distinct kinds")


def combo_gold(final: Pose, target: Shape, reference: Shape) -> RelationSet:
    """Relations of the target structure's center from the reference's, seen from the final pose."""
    return relation_oracle_allo(final, reference.center, target.center)


def generate_combo_path(config: ComboConfig, rng: np.random.Generator) -> Tuple[Step, ...]:
    # Repeated directions are allowed; only horizontal moves.
    count = int(rng.integers(config.min_steps, config.max_steps + 1))
    return tuple(
        Step(HORIZONTAL_DIRECTIONS[int(rng.integers(len(HORIZONTAL_DIRECTIONS)))],
             int(rng.integers(1, config.max_length + 1)))
        for _ in range(count)
    )


def _place(shape_kind: ShapeKind, rng: np.random.Generator, config: ComboConfig, color: Color) -> Shape:
    dims, hollow = sample_dims(shape_kind, rng, config.structure)
    hw = config.half_width
    anchor = Coordinate(*(int(rng.integers(-hw, hw - d + 2)) for d in dims))
    return Shape(shape_kind, dims, anchor, ColorScheme.solid(color), hollow)


def _cells(shape: Shape) -> Set[Coordinate]:
    return {block.position for block in to_blocks(shape)}


def _with_neighbours(cells: Set[Coordinate]) -> Set[Coordinate]:
    return cells | {Coordinate(c.x + dx, c.y + dy, c.z + dz) for c in cells for dx, dy, dz in FACE_OFFSETS}


def generate_combo(config: ComboConfig, rng: np.random.Generator) -> ComboInstance:
    steps = generate_combo_path(config, rng)
    final, _ = execute_path(START_POSE, steps, FrameMode.EGOCENTRIC)
    kinds = list(ShapeKind)
    color = config.field_color
    hw = config.half_width

    for _ in range(config.max_attempts):
        first, second = rng.choice(len(kinds), size=2, replace=False)
        target = _place(kinds[int(first)], rng, config, color)
        reference = _place(kinds[int(second)], rng, config, color)
        target_cells, reference_cells = _cells(target), _cells(reference)
        if target_cells & reference_cells:
            continue
        try:
            gold = combo_gold(final, target, reference)
        except DegenerateSceneError:
            continue
        break
    else:
        raise GenerationError(f"no valid combo layout after {config.max_attempts} attempts")

    # Distractors stay out of the face neighbourhood of both named structures.
    occupied = _with_neighbours(target_cells | reference_cells)
    distractors = []
    while len(distractors) < config.distractor_count:
        point = Coordinate(*(int(v) for v in rng.integers(-hw, hw + 1, size=3)))
        if point in occupied:
            continue
        occupied.add(point)
        distractors.append(ColoredBlock(color, point))

    field = list(itertools.chain(to_blocks(target), to_blocks(reference), distractors))
    blocks = tuple(field[i] for i in rng.permutation(len(field)))
    return ComboInstance(steps, final, target, reference, tuple(distractors), blocks, gold)


def generate_batch(config: ComboConfig, size: int, seed: int) -> List[ComboInstance]:
    instances = [generate_combo(config, make_rng(s)) for s in record_seeds(seed, size)]
    logger.info("generated %d combo scenes", size)
    return instances
