"""Object localization: scene sampling, relation oracles and the spatial overlap metric."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from constants import OLConfig
from enums import CLOCKWISE, Adjacency, Color, Heading, HeadingPolicy, MoveDirection, Relation, ViewMode
from errors import DegenerateSceneError, GenerationError, NoHorizontalOffsetError
from grid import ORIGIN, Coordinate, Pose, world_axis
from seeds import make_rng, record_seeds

logger = logging.getLogger(__name__)

RelationSet = FrozenSet[Relation]
Point = Union[Coordinate, Sequence[float]]

# Ties in heading_toward resolve in this order.
HEADING_PREFERENCE = (Heading.PLUS_Y, Heading.PLUS_X, Heading.MINUS_Y, Heading.MINUS_X)


def make_relation_set(relations: Iterable[Relation]) -> RelationSet:
    result = frozenset(relations)
    for relation in result:
        if Relation.opposite(relation) in result:
            raise ValueError(f"relation set holds both {relation.value} and {Relation.opposite(relation).value}")
    return result


@dataclass(frozen=True)
class ColoredBlock:
    color: Color
    position: Coordinate


@dataclass(frozen=True)
class OLScene:
    viewer: Pose
    target: ColoredBlock
    # None means the viewer is the reference
    reference: Optional[ColoredBlock]
    distractors: Tuple[ColoredBlock, ...]
    half_width: int
    mode: ViewMode
    gold: RelationSet
    # Blocks in the order the prompt lists them
    listing: Tuple[ColoredBlock, ...]


def _as_array(point: Point) -> np.ndarray:
    if isinstance(point, Coordinate):
        return np.array(point.as_tuple(), dtype=float)
    return np.asarray(point, dtype=float)


def relations_from_delta(heading: Heading, delta: Sequence[float], allocentric: bool) -> RelationSet:
    """
    Relations of something displaced by `delta` from an anchor, seen facing `heading`.

    Egocentric: front means further along the heading. Allocentric: front
    means nearer the viewer along the heading axis.
    """
    delta = np.asarray(delta, dtype=float)
    right = np.array(world_axis(heading, MoveDirection.RIGHT), dtype=float)
    forward = np.array(heading.vector, dtype=float)
    relations: Set[Relation] = set()

    along_right = float(delta @ right)
    if along_right > 0:
        relations.add(Relation.RIGHT)
    elif along_right < 0:
        relations.add(Relation.LEFT)

    along_heading = float(delta @ forward)
    if allocentric:
        along_heading = -along_heading
    if along_heading > 0:
        relations.add(Relation.FRONT)
    elif along_heading < 0:
        relations.add(Relation.BACK)

    if delta[2] > 0:
        relations.add(Relation.ABOVE)
    elif delta[2] < 0:
        relations.add(Relation.BELOW)
    return frozenset(relations)


def relation_oracle_ego(viewer: Pose, target: Point) -> RelationSet:
    delta = _as_array(target) - _as_array(viewer.position)
    if not delta.any():
        raise DegenerateSceneError("target coincides with the viewer")
    return relations_from_delta(viewer.heading, delta, allocentric=False)


def relation_oracle_allo(viewer: Pose, reference: Point, target: Point) -> RelationSet:
    delta = _as_array(target) - _as_array(reference)
    if not delta.any():
        raise DegenerateSceneError("target coincides with the reference")
    return relations_from_delta(viewer.heading, delta, allocentric=True)


def heading_toward(viewer: Point, reference: Point) -> Heading:
    delta = _as_array(reference) - _as_array(viewer)
    if not delta[:2].any():
        raise NoHorizontalOffsetError("reference is directly above or below the viewer")
    return max(HEADING_PREFERENCE, key=lambda h: float(delta[:2] @ np.array(h.value)))


def spatial_overlap(predicted: Iterable[Relation], gold: Iterable[Relation]) -> float:
    predicted, gold = set(predicted), set(gold)
    union = predicted | gold
    if not union:
        return 100.0
    return 100.0 * len(predicted & gold) / len(union)


ADJACENT_OFFSETS = tuple(o for o in itertools.product((-1, 0, 1), repeat=3) if o != (0, 0, 0))


def _in_bounds(point: Coordinate, half_width: int) -> bool:
    return all(-half_width <= v <= half_width for v in point.as_tuple())


def _sample_point(rng: np.random.Generator, half_width: int) -> Coordinate:
    x, y, z = (int(v) for v in rng.integers(-half_width, half_width + 1, size=3))
    return Coordinate(x, y, z)


def _sample_near(rng: np.random.Generator, anchor: Coordinate, half_width: int,
                 adjacency: Adjacency, forbidden: Set[Coordinate]) -> Coordinate:
    if adjacency == Adjacency.ADJACENT:
        candidates = [anchor.shifted(o) for o in ADJACENT_OFFSETS]
        candidates = [c for c in candidates if _in_bounds(c, half_width) and c not in forbidden]
        if not candidates:
            raise GenerationError(f"no free cell adjacent to {anchor}")
        return candidates[int(rng.integers(len(candidates)))]
    while True:
        point = _sample_point(rng, half_width)
        if point != anchor and point not in forbidden:
            return point


def generate_scene(config: OLConfig, rng: np.random.Generator) -> OLScene:
    palette = list(Color)
    colors = [palette[i] for i in rng.permutation(len(palette))]
    hw = config.half_width

    if config.mode == ViewMode.EGOCENTRIC:
        viewer = Pose(_sample_point(rng, hw), CLOCKWISE[int(rng.integers(len(CLOCKWISE)))])
        target = ColoredBlock(colors.pop(0), _sample_near(rng, viewer.position, hw, config.adjacency, set()))
        reference = None
        occupied = {viewer.position, target.position}
        gold = relation_oracle_ego(viewer, target.position)
    else:
        while True:
            ref_position = _sample_point(rng, hw)
            if ref_position != ORIGIN and (ref_position.x, ref_position.y) != (0, 0):
                break
        if config.heading_policy == HeadingPolicy.FACE_REFERENCE:
            heading = heading_toward(ORIGIN, ref_position)
        else:
            heading = Heading.PLUS_Y
        viewer = Pose(ORIGIN, heading)
        target_position = _sample_near(rng, ref_position, hw, config.adjacency, {ORIGIN})
        target = ColoredBlock(colors.pop(0), target_position)
        reference = ColoredBlock(colors.pop(0), ref_position)
        occupied = {ORIGIN, target.position}
        if not config.allow_reference_overlap:
            occupied.add(reference.position)
        gold = relation_oracle_allo(viewer, reference.position, target.position)

    distractors: List[ColoredBlock] = []
    for color in colors[:config.distractor_count]:
        while True:
            point = _sample_point(rng, hw)
            if point not in occupied:
                break
        occupied.add(point)
        distractors.append(ColoredBlock(color, point))

    named = [target] + ([reference] if reference is not None else []) + distractors
    listing = tuple(named[i] for i in rng.permutation(len(named)))
    return OLScene(viewer, target, reference, tuple(distractors), hw, config.mode,
                   make_relation_set(gold), listing)


def generate_batch(config: OLConfig, size: int, seed: int) -> List[OLScene]:
    scenes = [generate_scene(config, make_rng(s)) for s in record_seeds(seed, size)]
    logger.info("generated %d %s scenes (%s)", size, config.mode.value, config.adjacency.value)
    return scenes
