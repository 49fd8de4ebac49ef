from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from base import TaskFamily
from combo import ComboInstance, combo_gold, generate_combo
from constants import ComboConfig, NavConfig, OLConfig, StructureConfig
from enums import (
    CLOCKWISE, Color, Compass, Dimensionality, FrameMode, Heading, HeadingPolicy, MoveDirection,
    Relation, ShapeKind, StructureStyle, TaskKind, ViewMode,
)
from errors import ConfigError, GoldMismatchError
from grid import ORIGIN, START_POSE, Coordinate, Pose, Step, execute_path
from localization import (
    ColoredBlock, OLScene, generate_scene, make_relation_set, relation_oracle_allo, relation_oracle_ego,
    spatial_overlap,
)
from navigation import (
    Card2EgoInstance, CardinalStep, NavInstance, compass_endpoint, generate_path,
    instructor_gold, make_card2ego_instance, make_instance, score_chain, score_follower,
    stratified_step_counts,
)
from parsing import SynonymTable, extract_ans_span, extract_relations, parse_coordinate, parse_instructions
from prompts import (
    CARD2EGO_PREAMBLE, STRUCTURE_PREAMBLE, allo_ol_answer, allo_ol_preamble, allo_ol_question,
    card2ego_answer, card2ego_question, card2ego_reasoning, chain_answer, combo_preamble, combo_question,
    ego_ol_answer, ego_ol_preamble, ego_ol_question, follower_answer, follower_instruction,
    follower_question, follower_reasoning, instructor_instruction, instructor_question,
    instructor_reasoning, navigation_preamble, ol_reasoning, structure_answer, structure_question,
    structure_reasoning,
)
from seeds import make_rng
from structures import (
    ColorScheme, GoldTerms, Shape, Structure, generate_structure, serialize,
    structure_scores, style_for_index, to_blocks,
)

logger = logging.getLogger(__name__)


def _steps(values: List[str]) -> Tuple[Step, ...]:
    steps = []
    for value in values:
        direction, length = value.split()
        steps.append(Step(MoveDirection(direction), int(length)))
    return tuple(steps)


def _point(values: List[int]) -> Coordinate:
    return Coordinate(*values)


def _relations(values: List[str]) -> frozenset:
    return frozenset(Relation(v) for v in values)


def _sorted_relations(relations) -> List[str]:
    return sorted(r.value for r in relations)


def _nav_score(score) -> Dict[str, float]:
    return {'accuracy': float(score.accuracy), 'distance': score.distance}


class NavFollowerTask(TaskFamily[NavInstance]):
    """Instructions in, final coordinate out."""

    kind = TaskKind.NAV_FOLLOWER
    config_type = NavConfig
    metrics = ('accuracy', 'distance')

    def batch_params(self, config: NavConfig, size: int, rng: np.random.Generator) -> List[Dict[str, Any]]:
        return [{'num_steps': n} for n in stratified_step_counts(config, size, rng)]

    def build(self, config: NavConfig, seed: int, params: Dict[str, Any]) -> NavInstance:
        path = generate_path(config, make_rng(seed), params.get('num_steps'))
        return make_instance(path, seed)

    def gold(self, instance: NavInstance) -> Dict[str, Any]:
        return {
            'final': list(instance.final.as_tuple()),
            'steps': [str(s) for s in instance.path.steps],
        }

    def check_gold(self, instance: NavInstance) -> None:
        path = instance.path
        recovered = instructor_gold(instance.intermediates, path.mode, path.dimensionality)
        if tuple(recovered) != path.steps or instance.intermediates[-1] != instance.final:
            raise GoldMismatchError(f"follower gold for seed {instance.seed} does not retrace its path")

    def gold_answer(self, instance: NavInstance) -> str:
        return follower_answer(instance.final, instance.path.dimensionality)

    def prompt_parts(self, config: NavConfig, instance: NavInstance) -> Tuple[str, str]:
        preamble = f"{navigation_preamble(config.mode, config.dimensionality)} {follower_instruction(config.dimensionality)}"
        return preamble, follower_question(instance.path.steps)

    def worked_example(self, config: NavConfig) -> Optional[Tuple[str, str]]:
        steps = [Step(MoveDirection.RIGHT, 3), Step(MoveDirection.DOWN, 2),
                 Step(MoveDirection.BACKWARD, 4), Step(MoveDirection.LEFT, 2)]
        if config.dimensionality == Dimensionality.TWO_D:
            steps = [s for s in steps if not s.direction.is_vertical]
        return follower_question(steps), follower_reasoning(steps, config.mode, config.dimensionality)

    def metadata(self, instance: NavInstance) -> Dict[str, Any]:
        path = instance.path
        return {
            'mode': path.mode.value,
            'dimensionality': path.dimensionality.value,
            'path_length': len(path.steps),
            'directions': [s.direction.value for s in path.steps],
            'step_lengths': [s.length for s in path.steps],
            'seed': instance.seed,
        }

    def score(self, text: str, gold: Dict[str, Any], config: NavConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        predicted = parse_coordinate(extract_ans_span(text), config.dimensionality)
        return _nav_score(score_follower(predicted, _point(gold['final'])))

    def reasoning(self, instance: NavInstance) -> Optional[str]:
        return follower_reasoning(instance.path.steps, instance.path.mode, instance.path.dimensionality)


class NavInstructorTask(NavFollowerTask):
    """Coordinates in, instruction chain out."""

    kind = TaskKind.NAV_INSTRUCTOR

    def gold(self, instance: NavInstance) -> Dict[str, Any]:
        return {
            'steps': [str(s) for s in instance.path.steps],
            'intermediates': [list(p.as_tuple()) for p in instance.intermediates],
            'final': list(instance.final.as_tuple()),
        }

    def check_gold(self, instance: NavInstance) -> None:
        path = instance.path
        _, visited = execute_path(START_POSE, path.steps, path.mode, path.dimensionality)
        if tuple(visited) != instance.intermediates:
            raise GoldMismatchError(f"instructor waypoints for seed {instance.seed} are not reproducible")
        super().check_gold(instance)

    def gold_answer(self, instance: NavInstance) -> str:
        return chain_answer(instance.path.steps)

    def prompt_parts(self, config: NavConfig, instance: NavInstance) -> Tuple[str, str]:
        preamble = f"{navigation_preamble(config.mode, config.dimensionality)} {instructor_instruction()}"
        return preamble, instructor_question(instance.intermediates, config.dimensionality)

    def worked_example(self, config: NavConfig) -> Optional[Tuple[str, str]]:
        waypoints = [Coordinate(3, 0, 0), Coordinate(3, 1, 0), Coordinate(3, -1, 0)]
        if config.dimensionality == Dimensionality.THREE_D:
            waypoints.append(Coordinate(3, -1, 2))
        steps = instructor_gold(waypoints, config.mode, config.dimensionality)
        return (instructor_question(waypoints, config.dimensionality),
                instructor_reasoning(steps, config.mode, config.dimensionality))

    def score(self, text: str, gold: Dict[str, Any], config: NavConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        predicted = parse_instructions(extract_ans_span(text), table)
        return _nav_score(score_chain(predicted, _steps(gold['steps']), config.mode, config.dimensionality))

    def reasoning(self, instance: NavInstance) -> Optional[str]:
        return instructor_reasoning(instance.path.steps, instance.path.mode, instance.path.dimensionality)


class Card2EgoTask(TaskFamily[Card2EgoInstance]):
    """Compass legs in, body-relative instruction chain out."""

    kind = TaskKind.CARD2EGO
    config_type = NavConfig
    metrics = ('accuracy', 'distance')

    def batch_params(self, config: NavConfig, size: int, rng: np.random.Generator) -> List[Dict[str, Any]]:
        return [{'num_steps': n} for n in stratified_step_counts(config, size, rng)]

    def build(self, config: NavConfig, seed: int, params: Dict[str, Any]) -> Card2EgoInstance:
        return make_card2ego_instance(config, seed, params.get('num_steps'))

    def gold(self, instance: Card2EgoInstance) -> Dict[str, Any]:
        return {
            'path': [str(leg) for leg in instance.path],
            'steps': [str(s) for s in instance.steps],
            'final': list(compass_endpoint(instance.path).as_tuple()),
        }

    def check_gold(self, instance: Card2EgoInstance) -> None:
        final, _ = execute_path(START_POSE, instance.steps, FrameMode.EGOCENTRIC, Dimensionality.TWO_D)
        if final.position != compass_endpoint(instance.path):
            raise GoldMismatchError(f"card2ego chain for seed {instance.seed} ends off the compass endpoint")

    def gold_answer(self, instance: Card2EgoInstance) -> str:
        return card2ego_answer(instance.steps)

    def prompt_parts(self, config: NavConfig, instance: Card2EgoInstance) -> Tuple[str, str]:
        return CARD2EGO_PREAMBLE, card2ego_question(instance.path)

    def worked_example(self, config: NavConfig) -> Optional[Tuple[str, str]]:
        path = (CardinalStep(Compass.WEST, 2), CardinalStep(Compass.NORTH, 3), CardinalStep(Compass.EAST, 1))
        steps = (Step(MoveDirection.LEFT, 2), Step(MoveDirection.RIGHT, 3), Step(MoveDirection.RIGHT, 1))
        return card2ego_question(path), card2ego_reasoning(path, steps)

    def metadata(self, instance: Card2EgoInstance) -> Dict[str, Any]:
        return {
            'path_length': len(instance.path),
            'compass': [leg.compass.value for leg in instance.path],
            'directions': [s.direction.value for s in instance.steps],
            'step_lengths': [s.length for s in instance.steps],
            'seed': instance.seed,
        }

    def score(self, text: str, gold: Dict[str, Any], config: NavConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        predicted = parse_instructions(extract_ans_span(text), table)
        return _nav_score(score_chain(predicted, _steps(gold['steps']),
                                      FrameMode.EGOCENTRIC, Dimensionality.TWO_D))

    def reasoning(self, instance: Card2EgoInstance) -> Optional[str]:
        return card2ego_reasoning(instance.path, instance.steps)


def _rotated_relations(heading: Heading, delta: Tuple[int, int, int], allocentric: bool) -> frozenset:
    """Relations read off `delta` after turning the world so `heading` points up the y axis."""
    quarter = np.array([[0, -1], [1, 0]])
    local = np.linalg.matrix_power(quarter, CLOCKWISE.index(heading)) @ np.array(delta[:2])
    side, ahead = int(local[0]), int(local[1])
    if allocentric:
        ahead = -ahead
    relations = set()
    if side:
        relations.add(Relation.RIGHT if side > 0 else Relation.LEFT)
    if ahead:
        relations.add(Relation.FRONT if ahead > 0 else Relation.BACK)
    if delta[2]:
        relations.add(Relation.ABOVE if delta[2] > 0 else Relation.BELOW)
    return frozenset(relations)


class _LocalizationTask(TaskFamily[OLScene]):
    config_type = OLConfig
    metrics = ('spatial_overlap',)
    view_mode: ViewMode

    def build(self, config: OLConfig, seed: int, params: Dict[str, Any]) -> OLScene:
        if config.mode != self.view_mode:
            raise ConfigError(f"{self.kind.value} needs a {self.view_mode.value} scene config")
        return generate_scene(config, make_rng(seed))

    def gold(self, instance: OLScene) -> Dict[str, Any]:
        return {'relations': _sorted_relations(instance.gold)}

    def check_gold(self, instance: OLScene) -> None:
        anchor = instance.reference.position if instance.reference else instance.viewer.position
        delta = instance.target.position - anchor
        if _rotated_relations(instance.viewer.heading, delta, instance.reference is not None) != instance.gold:
            raise GoldMismatchError(f"localization gold {_sorted_relations(instance.gold)} disagrees "
                                    "with the rotated-frame reading")

    def metadata(self, instance: OLScene) -> Dict[str, Any]:
        anchor = instance.reference.position if instance.reference else instance.viewer.position
        metadata = {
            'mode': instance.mode.value,
            'heading': instance.viewer.heading.label,
            'relation_count': len(instance.gold),
            'relations': _sorted_relations(instance.gold),
            'target_color': instance.target.color.value,
            'viewer_distance': float(np.linalg.norm(instance.target.position - instance.viewer.position)),
            'anchor_distance': float(np.linalg.norm(instance.target.position - anchor)),
        }
        if instance.reference is not None:
            metadata['reference_color'] = instance.reference.color.value
        return metadata

    def score(self, text: str, gold: Dict[str, Any], config: OLConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        predicted = extract_relations(extract_ans_span(text).raw, table)
        return {'spatial_overlap': spatial_overlap(predicted, _relations(gold['relations']))}


class OLEgoTask(_LocalizationTask):
    """Where is a block relative to the viewer."""

    kind = TaskKind.OL_EGO
    view_mode = ViewMode.EGOCENTRIC

    def gold_answer(self, instance: OLScene) -> str:
        return ego_ol_answer(instance.target, instance.gold)

    def prompt_parts(self, config: OLConfig, instance: OLScene) -> Tuple[str, str]:
        return ego_ol_preamble(config.half_width), ego_ol_question(instance.viewer, instance.listing, instance.target)

    def worked_example(self, config: OLConfig) -> Optional[Tuple[str, str]]:
        viewer = Pose(Coordinate(2, 2, 0), Heading.MINUS_Y)
        target = ColoredBlock(Color.BLUE, Coordinate(-3, -1, 0))
        answer = ego_ol_answer(target, relation_oracle_ego(viewer, target.position))
        return (ego_ol_question(viewer, (target,), target),
                ol_reasoning(viewer.heading, viewer.position, target, 'me', 'my', False, answer))

    def reasoning(self, instance: OLScene) -> Optional[str]:
        return ol_reasoning(instance.viewer.heading, instance.viewer.position, instance.target,
                            'me', 'my', False, self.gold_answer(instance))


class OLAlloTask(_LocalizationTask):
    """Where is a block relative to another block, seen by the viewer."""

    kind = TaskKind.OL_ALLO
    view_mode = ViewMode.ALLOCENTRIC

    def default_config(self) -> OLConfig:
        return OLConfig(mode=ViewMode.ALLOCENTRIC, heading_policy=HeadingPolicy.FIXED_PLUS_Y, distractor_count=3)

    @staticmethod
    def _names(instance: OLScene) -> Tuple[str, str]:
        return f"{instance.target.color.value} block", f"{instance.reference.color.value} block"

    def gold_answer(self, instance: OLScene) -> str:
        return allo_ol_answer(*self._names(instance), instance.gold)

    def prompt_parts(self, config: OLConfig, instance: OLScene) -> Tuple[str, str]:
        facing = config.heading_policy == HeadingPolicy.FACE_REFERENCE
        return allo_ol_preamble(config.half_width), allo_ol_question(
            instance.viewer, instance.listing, instance.target, instance.reference, facing)

    def worked_example(self, config: OLConfig) -> Optional[Tuple[str, str]]:
        viewer = Pose(ORIGIN, Heading.PLUS_Y)
        reference = ColoredBlock(Color.RED, Coordinate(0, 8, -7))
        target = ColoredBlock(Color.BLUE, Coordinate(0, 7, -8))
        relations = relation_oracle_allo(viewer, reference.position, target.position)
        answer = allo_ol_answer('blue block', 'red block', relations)
        return (allo_ol_question(viewer, (reference, target), target, reference, False),
                ol_reasoning(viewer.heading, reference.position, target, 'the red block', "the red block's",
                             True, answer))

    def reasoning(self, instance: OLScene) -> Optional[str]:
        reference = instance.reference
        anchor = f"the {reference.color.value} block"
        return ol_reasoning(instance.viewer.heading, reference.position, instance.target, anchor,
                            f"{anchor}'s", True, self.gold_answer(instance))


class StructDescTask(TaskFamily[Structure]):
    """Block list in, prose description out."""

    kind = TaskKind.STRUCT_DESC
    config_type = StructureConfig
    metrics = ('spatial_overlap', 'color_overlap', 'shape_overlap', 'numeric_overlap')

    def batch_params(self, config: StructureConfig, size: int, rng: np.random.Generator) -> List[Dict[str, Any]]:
        return [{'style': style_for_index(config, i).value} for i in range(size)]

    def build(self, config: StructureConfig, seed: int, params: Dict[str, Any]) -> Structure:
        style = params.get('style')
        # Exemplars carry no params; their style follows the seed.
        style = StructureStyle(style) if style else style_for_index(config, seed)
        return generate_structure(style, make_rng(seed), config)

    def gold(self, instance: Structure) -> Dict[str, Any]:
        return {'description': instance.gold_description, **instance.gold_terms.to_dict()}

    def check_gold(self, instance: Structure) -> None:
        expected = sum(len(to_blocks(shape)) for shape in instance.shapes)
        if expected != len(instance.blocks) or len(set(b.position for b in instance.blocks)) != expected:
            raise GoldMismatchError("structure blocks overlap or were dropped")
        scores = structure_scores(instance.gold_description, instance.gold_terms)
        if any(value != 100.0 for value in scores.values()):
            raise GoldMismatchError(f"description {instance.gold_description!r} does not score itself: {scores}")

    def gold_answer(self, instance: Structure) -> str:
        return structure_answer(instance.gold_description)

    def prompt_parts(self, config: StructureConfig, instance: Structure) -> Tuple[str, str]:
        return STRUCTURE_PREAMBLE, structure_question(serialize(instance.blocks, config.representation))

    def worked_example(self, config: StructureConfig) -> Optional[Tuple[str, str]]:
        column = Shape(ShapeKind.COLUMN, (1, 1, 6), ORIGIN, ColorScheme.solid(Color.ORANGE))
        blocks = to_blocks(column)
        return (structure_question(serialize(blocks, config.representation)),
                structure_reasoning("6 orange blocks in a column", len(blocks)))

    def metadata(self, instance: Structure) -> Dict[str, Any]:
        return {
            'style': instance.style.value,
            'block_count': len(instance.blocks),
            'shapes': [shape.kind.value for shape in instance.shapes],
            'colors': sorted({b.color.value for b in instance.blocks}),
            'relations': _sorted_relations(instance.gold_terms.relations),
        }

    def config_metadata(self, config: StructureConfig) -> Dict[str, Any]:
        return {'representation': config.representation.value}

    def score(self, text: str, gold: Dict[str, Any], config: StructureConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        return structure_scores(extract_ans_span(text).raw, GoldTerms.from_dict(gold), table)

    def reasoning(self, instance: Structure) -> Optional[str]:
        return structure_reasoning(instance.gold_description, len(instance.blocks))


class ComboTask(TaskFamily[ComboInstance]):
    """Walk a path, then locate one structure relative to another."""

    kind = TaskKind.COMBO
    config_type = ComboConfig
    metrics = ('spatial_overlap',)

    def build(self, config: ComboConfig, seed: int, params: Dict[str, Any]) -> ComboInstance:
        return generate_combo(config, make_rng(seed))

    def gold(self, instance: ComboInstance) -> Dict[str, Any]:
        return {
            'relations': _sorted_relations(instance.gold),
            'target': instance.target.kind.value,
            'reference': instance.reference.kind.value,
        }

    def check_gold(self, instance: ComboInstance) -> None:
        final, _ = execute_path(START_POSE, instance.steps, FrameMode.EGOCENTRIC)
        if final != instance.final or combo_gold(final, instance.target, instance.reference) != instance.gold:
            raise GoldMismatchError("combo gold disagrees with the replayed path")
        if make_relation_set(instance.gold) != instance.gold:
            raise GoldMismatchError("combo gold is not a valid relation set")

    def gold_answer(self, instance: ComboInstance) -> str:
        return allo_ol_answer(instance.target.kind.value, instance.reference.kind.value, instance.gold)

    def prompt_parts(self, config: ComboConfig, instance: ComboInstance) -> Tuple[str, str]:
        return combo_preamble(), combo_question(instance.blocks, instance.steps,
                                                instance.target.kind.value, instance.reference.kind.value)

    def worked_example(self, config: ComboConfig) -> Optional[Tuple[str, str]]:
        return None

    def metadata(self, instance: ComboInstance) -> Dict[str, Any]:
        return {
            'path_length': len(instance.steps),
            'heading': instance.final.heading.label,
            'target': instance.target.kind.value,
            'reference': instance.reference.kind.value,
            'relation_count': len(instance.gold),
            'block_count': len(instance.blocks),
        }

    def score(self, text: str, gold: Dict[str, Any], config: ComboConfig,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        predicted = extract_relations(extract_ans_span(text).raw, table)
        return {'spatial_overlap': spatial_overlap(predicted, _relations(gold['relations']))}
