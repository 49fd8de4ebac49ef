"""Prompt templates, gold-answer phrasing and worked reasoning traces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from constants import BenchConfig
from enums import Dimensionality, FrameMode, Heading, MoveDirection, Relation, Representation, ShotMode, TaskKind
from grid import START_POSE, Coordinate, Pose, Step, apply_step, rotate, world_axis
from localization import ColoredBlock
from navigation import CardinalStep, format_cardinal, format_steps
from structures import relation_phrase, serialize

CONFIG = BenchConfig()

VALID_SHOTS = {kind: tuple(ShotMode) for kind in TaskKind}
VALID_SHOTS[TaskKind.COMBO] = (ShotMode.ZERO,)


@dataclass(frozen=True)
class PromptParts:
    preamble: str
    question: str
    # (question, worked answer) for one-shot prompting
    worked_example: Optional[Tuple[str, str]] = None
    # (question, answer) pairs for few-shot prompting
    exemplars: Tuple[Tuple[str, str], ...] = field(default_factory=tuple)


def tag(answer: str) -> str:
    return f"{CONFIG.ANS_OPEN} {answer} {CONFIG.ANS_CLOSE}"


def render_prompt(parts: PromptParts, shots: ShotMode) -> str:
    sections = [parts.preamble]
    if shots == ShotMode.ONE_WITH_REASONING and parts.worked_example:
        question, worked = parts.worked_example
        sections += [f"Let's start with an example: {question}", worked, "Now, let's try a real problem!"]
    elif shots == ShotMode.FEW_NO_REASONING and parts.exemplars:
        sections.append("Here are some examples:")
        for question, answer in parts.exemplars:
            sections += [question, answer]
        sections.append("Now, let's try a real problem!")
    sections.append(parts.question)
    return '\n\n'.join(sections)


# Shared phrasing

def format_point(point: Coordinate, dimensionality: Dimensionality = Dimensionality.THREE_D) -> str:
    if dimensionality == Dimensionality.TWO_D:
        return f"({point.x}, {point.y})"
    return f"({point.x}, {point.y}, {point.z})"


def _axis_label(vector: Tuple[int, int, int]) -> str:
    axis = next(i for i, v in enumerate(vector) if v)
    sign = 'positive' if vector[axis] > 0 else 'negative'
    return f"{sign} {'xyz'[axis]}"


def _right_of(heading: Heading) -> str:
    return rotate(heading, MoveDirection.RIGHT).label


def list_blocks(blocks: Iterable[ColoredBlock]) -> str:
    return serialize(list(blocks), Representation.TEXT)


# Navigation

def navigation_preamble(mode: FrameMode, dimensionality: Dimensionality) -> str:
    if dimensionality == Dimensionality.TWO_D:
        text = ("You are in a 2D environment with (x, y) coordinates set up like a standard horizontal "
                "Cartesian plane. You will start at the origin (0, 0), which is at the center of this grid.")
    else:
        text = ("You are in a 3D environment with (x, y, z) coordinates set up like a standard Cartesian plane. "
                "The x and y dimensions are horizontal, while the z dimension is the vertical component. "
                "You will start at the origin (0, 0, 0), which is at the center of this grid.")
    if mode == FrameMode.EGOCENTRIC:
        text += (" You are currently facing the positive y direction, with the positive x direction to your "
                 "right. However, when you move in a direction you must turn to face that direction, rotating "
                 "your frame of reference. For example, if you move left, you will rotate 90 degrees and be "
                 "facing the negative x direction with positive y to your right.")
    else:
        text += (" You are facing the positive y direction, with the positive x direction to your right. "
                 "Directions are fixed to the grid and never rotate: moving forward always increases y, "
                 "backward decreases y, right increases x and left decreases x.")
        if dimensionality == Dimensionality.THREE_D:
            text += " Moving up increases z and moving down decreases z."
    return text


_STEP_PHRASES = {
    MoveDirection.LEFT: 'to your left',
    MoveDirection.RIGHT: 'to your right',
    MoveDirection.FORWARD: 'forward',
    MoveDirection.BACKWARD: 'backward',
    MoveDirection.UP: 'up',
    MoveDirection.DOWN: 'down',
}
_MIDDLE_OPENERS = ("You then move", "Next, you move", "You move", "You also move")


def _steps_word(length: int) -> str:
    return f"{length} step" if length == 1 else f"{length} steps"


def narrate_steps(steps: Sequence[Step]) -> str:
    """'First, you move 7 steps to your right. You then move 5 steps forward. Lastly, ...'"""
    sentences = []
    for i, step in enumerate(steps):
        motion = f"{_steps_word(step.length)} {_STEP_PHRASES[step.direction]}"
        if i == 0:
            opener = "First, you move" if len(steps) > 1 else "You move"
        elif i == len(steps) - 1:
            opener = "Lastly, you move"
        else:
            opener = _MIDDLE_OPENERS[(i - 1) % len(_MIDDLE_OPENERS)]
        sentences.append(f"{opener} {motion}.")
    return ' '.join(sentences)


def follower_instruction(dimensionality: Dimensionality) -> str:
    shape = "(x, y)" if dimensionality == Dimensionality.TWO_D else "(x, y, z)"
    return (f"Explain your final coordinates after travelling. Please format your final coordinates as: "
            f"{tag(shape)}. Let's go!")


def follower_question(steps: Sequence[Step]) -> str:
    return f"{narrate_steps(steps)} Where are you now?"


def follower_answer(final: Coordinate, dimensionality: Dimensionality) -> str:
    return f"Our final position is {tag(format_point(final, dimensionality))}"


def follower_reasoning(steps: Sequence[Step], mode: FrameMode, dimensionality: Dimensionality) -> str:
    origin = format_point(START_POSE.position, dimensionality)
    lines = ["To solve this, we should break down the steps we take.",
             f"1. We start at {origin} facing the positive y direction, with positive x to our right."]
    pose = START_POSE
    for number, step in enumerate(steps, start=2):
        frame = pose.heading if mode == FrameMode.EGOCENTRIC else Heading.PLUS_Y
        vector = world_axis(frame, step.direction)
        axis = _axis_label(vector)
        change = 'increasing' if sum(vector) > 0 else 'decreasing'
        pose = apply_step(pose, step, mode)
        text = (f"{number}. Moving {_steps_word(step.length)} {step.direction.value} means moving along {axis}, "
                f"i.e. {change} the {axis[-1]} value by {step.length}. So, our new position is "
                f"{format_point(pose.position, dimensionality)}.")
        if mode == FrameMode.CARDINAL:
            text += " Directions are fixed, so we still face positive y."
        elif step.direction.is_vertical:
            text += (f" Moving up and down doesn't change our heading, so we are still facing "
                     f"{pose.heading.label} with {_right_of(pose.heading)} to our right.")
        else:
            text += f" We turned to face {pose.heading.label}, so now {_right_of(pose.heading)} is to our right."
        lines.append(text)
    lines.append(follower_answer(pose.position, dimensionality))
    return '\n\n'.join(lines)


def instructor_instruction() -> str:
    return ("Format your answer as a series of directions and distances, e.g. "
            f"{tag('forward 2, right 3, back 1')}. Let's go!")


def instructor_question(intermediates: Sequence[Coordinate], dimensionality: Dimensionality) -> str:
    points = [START_POSE.position] + list(intermediates)
    parts = [f"Start at {format_point(points[0], dimensionality)}."]
    parts += [f"Go to {format_point(p, dimensionality)}." for p in points[1:-1]]
    parts.append(f"End at {format_point(points[-1], dimensionality)}.")
    return ' '.join(parts) + " Describe the path that you will take to traverse the provided coordinates."


def chain_answer(steps: Sequence[Step]) -> str:
    return f"So, my path is {tag(format_steps(steps))}."


def instructor_reasoning(steps: Sequence[Step], mode: FrameMode, dimensionality: Dimensionality) -> str:
    lines = []
    if mode == FrameMode.EGOCENTRIC:
        lines.append("I must remember that each time I move left, right, or back, I will be turning to face a "
                     "new direction.")
    pose = START_POSE
    for number, step in enumerate(steps, start=1):
        start = pose.position
        pose = apply_step(pose, step, mode)
        text = (f"{number}. To get from {format_point(start, dimensionality)} to "
                f"{format_point(pose.position, dimensionality)}, I must move "
                f"{_steps_word(step.length)} {step.direction.value}.")
        if mode == FrameMode.EGOCENTRIC and not step.direction.is_vertical:
            text += (f" I will now be facing the {pose.heading.label} direction, with "
                     f"{_right_of(pose.heading)} to my right.")
        lines.append(text)
    lines.append(chain_answer(steps))
    return '\n\n'.join(lines)


CARD2EGO_PREAMBLE = (
    "You are on a 2D grid and will be given a path using cardinal directions (North, East, South, West) "
    "that you need to convert into egocentric directions (left, right, forward, backward). Keep in mind that "
    "to move in a cardinal direction, you must turn to face it. This means that the egocentric instructions "
    "will not map directly to cardinal ones, but change depending on the direction you last moved. E.g. if "
    "you just moved East and then want to move South, then the egocentric instruction is to move right, "
    "since South is to your right if you're facing East. Format your answer as "
    f"{tag('left 2, right 3, right 1')}."
)


def card2ego_question(path: Sequence[CardinalStep]) -> str:
    return (f"You start facing North and the path is: {format_cardinal(path)}. "
            "What is the path expressed with egocentric directions?")


def card2ego_answer(steps: Sequence[Step]) -> str:
    return f"Putting it all together: {tag(format_steps(steps))}"


_EGO_WHERE = {
    MoveDirection.FORWARD: 'straight ahead',
    MoveDirection.RIGHT: 'to my right',
    MoveDirection.LEFT: 'to my left',
    MoveDirection.BACKWARD: 'behind me',
}


def card2ego_reasoning(path: Sequence[CardinalStep], steps: Sequence[Step]) -> str:
    lines = []
    facing = 'North'
    for number, (leg, step) in enumerate(zip(path, steps), start=1):
        lines.append(f"{number}. I am facing {facing} and must move {leg.compass.value}, which is "
                     f"{_EGO_WHERE[step.direction]}. So the instruction is {step}.")
        facing = leg.compass.value
    lines.append(card2ego_answer(steps))
    return '\n\n'.join(lines)


# Object localization

def ego_ol_preamble(half_width: int) -> str:
    return (
        "You are in a 3D environment with (x, y, z) coordinates set up like a standard Cartesian plane. "
        "The x and y dimensions are horizontal, while the z dimension is the vertical component. "
        f"All axes range from ({-half_width}, {half_width}). Your task is to describe where objects are "
        "relative to you, without using coordinates. Instead use relative descriptions like 'directly behind "
        "me' or 'to my left'. Explain your thought process and please format your final answer with [ANS] "
        f"tags like so: the green block is {tag('in front of me and to my left')}. Let's get started!"
    )


def allo_ol_preamble(half_width: int) -> str:
    return (
        "You are in a 3D environment with (x, y, z) coordinates set up like a standard Cartesian plane. "
        "The x and y dimensions are horizontal, while the z dimension is the vertical component. "
        f"All axes range from ({-half_width}, {half_width}). Your task is to describe where objects are "
        "relative to you and other objects, without using coordinates. Instead use relative descriptions like "
        "'directly in front of the blue cylinder'. Explain your thought process and please format your final "
        f"answer with [ANS] tags like so: the yellow block is {tag('below and to the back right of')} the "
        "purple block. Let's get started!"
    )


def ego_ol_question(viewer: Pose, listing: Sequence[ColoredBlock], target: ColoredBlock) -> str:
    return (f"You are at {format_point(viewer.position)}, facing the {viewer.heading.label} direction, so "
            f"{_right_of(viewer.heading)} is to your right. The positive z axis is always up. "
            f"There is {list_blocks(listing)}. Where is the {target.color.value} block relative to you?")


def allo_ol_question(viewer: Pose, listing: Sequence[ColoredBlock], target: ColoredBlock,
                     reference: ColoredBlock, facing_reference: bool) -> str:
    if facing_reference:
        facing = (f"You are facing the {viewer.heading.label} direction, toward the "
                  f"{reference.color.value} block.")
    else:
        facing = f"You may assume that you are facing the {viewer.heading.label} direction."
    return (f"You are at the origin. There is {list_blocks(listing)}. {facing} The positive z axis is always "
            f"up. Where is the {target.color.value} block relative to the {reference.color.value} block given "
            "your point of view?")


_EGO_PHRASES = {
    Relation.FRONT: 'in front of me',
    Relation.BACK: 'behind me',
    Relation.LEFT: 'to my left',
    Relation.RIGHT: 'to my right',
    Relation.ABOVE: 'above me',
    Relation.BELOW: 'below me',
}
_PHRASE_ORDER = (Relation.FRONT, Relation.BACK, Relation.LEFT, Relation.RIGHT, Relation.ABOVE, Relation.BELOW)


def ego_relation_phrase(relations: Iterable[Relation]) -> str:
    present = set(relations)
    parts = [_EGO_PHRASES[r] for r in _PHRASE_ORDER if r in present]
    if len(parts) <= 1:
        return ''.join(parts)
    return f"{', '.join(parts[:-1])} and {parts[-1]}"


def ego_ol_answer(target: ColoredBlock, relations: Iterable[Relation]) -> str:
    return f"The {target.color.value} block is {tag(ego_relation_phrase(relations))}"


def allo_ol_answer(target_name: str, reference_name: str, relations: Iterable[Relation]) -> str:
    return f"The {target_name} is {tag(relation_phrase(relations))} the {reference_name}."


def _axis_reasoning(axis: int, heading: Heading, mine: int, theirs: int, subject: str,
                    anchor: str, owner: str, allocentric: bool) -> str:
    name = 'xyz'[axis]
    comparison = f"{owner.capitalize()} {name} coordinate is {mine} and the {subject}'s is {theirs}."
    if axis == 2:
        if mine == theirs:
            verdict = "they are level"
        else:
            verdict = f"it is {'above' if theirs > mine else 'below'} {anchor}"
        return (f"For the z dimension, orientation does not matter. Higher z values are above and lower z "
                f"values are below. {comparison} So, {verdict}.")
    forward = heading.vector[axis]
    if forward:
        larger = 'in front of' if (forward > 0) != allocentric else 'behind'
        smaller = 'behind' if larger == 'in front of' else 'in front of'
        frame = f"I am facing {heading.label}"
    else:
        right = world_axis(heading, MoveDirection.RIGHT)[axis]
        larger = 'to the right of' if right > 0 else 'to the left of'
        smaller = 'to the left of' if right > 0 else 'to the right of'
        frame = f"{_right_of(heading)} is to my right"
    if mine == theirs:
        verdict = f"they do not differ along {name}"
    else:
        verdict = f"it is {larger if theirs > mine else smaller} {anchor}"
    return (f"For the {name} dimension, {frame}, so bigger {name} values are {larger} {anchor}. "
            f"{comparison} So, {verdict}.")


def ol_reasoning(heading: Heading, anchor_point: Coordinate, target: ColoredBlock, anchor: str,
                 owner: str, allocentric: bool, answer: str) -> str:
    subject = f"{target.color.value} block"
    lines = [
        _axis_reasoning(axis, heading, anchor_point.as_tuple()[axis], target.position.as_tuple()[axis],
                        subject, anchor, owner, allocentric)
        for axis in range(3)
    ]
    if allocentric:
        lines.insert(0, "Since I am describing the view from where I stand, blocks nearer to me along the "
                        "direction I face are in front of the blocks farther away.")
    lines.append(f"Putting that together: {answer}")
    return '\n\n'.join(lines)


# Structure composition

STRUCTURE_PREAMBLE = (
    "You are in a 3D grid environment with (x, y, z) coordinates set up like a standard Cartesian plane. "
    "The x and y dimensions are horizontal, while the z dimension is the vertical component. Your task is to "
    "describe a set of blocks to someone without mentioning coordinates or axes, instead describe the "
    f"structures as a whole. Format your answer with [ANS] tags like so: there are "
    f"{tag('6 orange blocks in a column')}."
)


def structure_question(serialized: str) -> str:
    return f"Blocks:\nThe blocks placed on the grid are:\n{serialized}\nNow describe the structure they made."


def structure_answer(description: str) -> str:
    return f"There is {tag(description)}"


def structure_reasoning(description: str, block_count: int) -> str:
    return (f"There are {block_count} blocks. Grouping them by color and by the axes along which they extend "
            f"shows the shapes they form.\n\n{structure_answer(description)}")


# Combination

def combo_preamble() -> str:
    return (
        "You are in a 3D environment with (x, y, z) coordinates set up like a standard Cartesian plane. "
        "The x and y dimensions are horizontal, while the z dimension is the vertical component. "
        "You are at the origin (0, 0, 0), which is at the center of this grid, facing the positive y "
        "direction, with the positive x direction to your right. However, when you move in a direction you "
        "must turn to face that direction, rotating your frame of reference. For example, if you move left, "
        "you will rotate 90 degrees counterclockwise and be facing the negative x direction with positive y "
        f"to your right. Format your answer with [ANS] tags like so: the cube is {tag('behind and above')} "
        "the column."
    )


def combo_question(blocks: Sequence[ColoredBlock], steps: Sequence[Step], target_name: str,
                   reference_name: str) -> str:
    return (f"There is {list_blocks(blocks)}.\n{narrate_steps(steps)}\nNow, where is the {target_name} "
            f"relative to the {reference_name} given your point of view?")
