from enum import Enum


class Heading(Enum):
    PLUS_X = (1, 0)
    MINUS_X = (-1, 0)
    PLUS_Y = (0, 1)
    MINUS_Y = (0, -1)

    @property
    def label(self) -> str:
        """Prose name used in prompts, e.g. 'negative y'."""
        dx, dy = self.value
        sign = 'positive' if dx + dy > 0 else 'negative'
        return f"{sign} {'x' if dx else 'y'}"

    @property
    def vector(self) -> tuple[int, int, int]:
        return (self.value[0], self.value[1], 0)


# Clockwise as seen from above.
CLOCKWISE = (Heading.PLUS_Y, Heading.PLUS_X, Heading.MINUS_Y, Heading.MINUS_X)


class MoveDirection(Enum):
    LEFT = "left"
    RIGHT = "right"
    FORWARD = "forward"
    BACKWARD = "backward"
    UP = "up"
    DOWN = "down"

    @property
    def is_vertical(self) -> bool:
        return self in (MoveDirection.UP, MoveDirection.DOWN)

    @property
    def quarter_turns(self) -> int:
        """Clockwise quarter turns applied to the heading before moving."""
        return {
            MoveDirection.FORWARD: 0,
            MoveDirection.RIGHT: 1,
            MoveDirection.BACKWARD: 2,
            MoveDirection.LEFT: 3,
        }.get(self, 0)


HORIZONTAL_DIRECTIONS = (
    MoveDirection.LEFT, MoveDirection.RIGHT, MoveDirection.FORWARD, MoveDirection.BACKWARD
)


class Dimensionality(Enum):
    TWO_D = "2d"
    THREE_D = "3d"


class FrameMode(Enum):
    CARDINAL = "cardinal"
    EGOCENTRIC = "egocentric"


class Compass(Enum):
    NORTH = "North"
    EAST = "East"
    SOUTH = "South"
    WEST = "West"

    @property
    def heading(self) -> Heading:
        return {
            Compass.NORTH: Heading.PLUS_Y,
            Compass.EAST: Heading.PLUS_X,
            Compass.SOUTH: Heading.MINUS_Y,
            Compass.WEST: Heading.MINUS_X,
        }[self]


class Relation(Enum):
    LEFT = "left"
    RIGHT = "right"
    FRONT = "front"
    BACK = "back"
    ABOVE = "above"
    BELOW = "below"

    @classmethod
    def opposite(cls, relation: 'Relation') -> 'Relation':
        pairs = {
            cls.LEFT: cls.RIGHT, cls.RIGHT: cls.LEFT,
            cls.FRONT: cls.BACK, cls.BACK: cls.FRONT,
            cls.ABOVE: cls.BELOW, cls.BELOW: cls.ABOVE,
        }
        return pairs[relation]


class Color(Enum):
    RED = "red"
    ORANGE = "orange"
    YELLOW = "yellow"
    GREEN = "green"
    BLUE = "blue"
    PURPLE = "purple"


class ViewMode(Enum):
    EGOCENTRIC = "egocentric"
    ALLOCENTRIC = "allocentric"


class Adjacency(Enum):
    ADJACENT = "adjacent"
    RANDOM = "random"


class HeadingPolicy(Enum):
    SAMPLED_HORIZONTAL = "sampled"
    FIXED_PLUS_Y = "plus_y"
    FACE_REFERENCE = "face_reference"


class ShapeKind(Enum):
    ROW = "row"
    COLUMN = "column"
    TOWER = "tower"
    PLANE = "plane"
    CUBE = "cube"


class SchemeKind(Enum):
    SOLID = "solid"
    HALVES = "halves"
    ALTERNATING = "alternating"


class StructureStyle(Enum):
    SIMPLE = "simple"
    COHESIVE = "cohesive"
    COMPOSITE = "composite"


class Representation(Enum):
    PLAIN = "plain"
    DICT = "dict"
    SET = "set"
    TEXT = "text"


class TaskKind(Enum):
    NAV_FOLLOWER = "nav_follower"
    NAV_INSTRUCTOR = "nav_instructor"
    CARD2EGO = "card2ego"
    OL_EGO = "ol_ego"
    OL_ALLO = "ol_allo"
    STRUCT_DESC = "struct_desc"
    COMBO = "combo"


class ShotMode(Enum):
    ZERO = "zero"
    ONE_WITH_REASONING = "one"
    FEW_NO_REASONING = "few"


class AnswerSource(Enum):
    TAGGED_SPAN = "tagged"
    WHOLE_TEXT = "whole"
