from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, ClassVar, Dict, Optional

from enums import (
    Adjacency, Color, Dimensionality, FrameMode, HeadingPolicy, Representation,
    ShapeKind, StructureStyle, ViewMode,
)
from errors import ConfigError


@dataclass
class BenchConfig:
    # Dataset sizes
    TEST_SET_SIZE: int = 100
    TRAIN_SET_SIZE: int = 3000

    # Few-shot exemplars come from a seed range disjoint from any dataset seed
    EXEMPLAR_SEED_OFFSET: int = 2**32  # record seeds are uint32
    FEW_SHOT_COUNT: int = 3

    # Answer tags
    ANS_OPEN: str = '[ANS]'
    ANS_CLOSE: str = '[/ANS]'

    # Output locations
    REPORT_DIR: str = 'reports'
    LOG_DIR: str = 'logs'


# Pairs not listed score 0 (row/cube, row/plane, column/cube, column/plane).
SHAPE_PARTIAL_CREDIT: Dict[frozenset, float] = {
    frozenset({ShapeKind.ROW, ShapeKind.COLUMN}): 0.6,
    frozenset({ShapeKind.COLUMN, ShapeKind.TOWER}): 0.6,
    frozenset({ShapeKind.TOWER, ShapeKind.CUBE}): 0.5,
    frozenset({ShapeKind.TOWER, ShapeKind.PLANE}): 0.1,
    frozenset({ShapeKind.PLANE, ShapeKind.CUBE}): 0.1,
    frozenset({ShapeKind.ROW, ShapeKind.TOWER}): 0.2,
}


def partial_credit(a: ShapeKind, b: ShapeKind,
                   table: Optional[Dict[frozenset, float]] = None) -> float:
    if a == b:
        return 1.0
    return (table or SHAPE_PARTIAL_CREDIT).get(frozenset({a, b}), 0.0)


class SnapshotMixin:
    """Round-trips a config dataclass through plain JSON values."""

    _enums: ClassVar[Dict[str, type]] = {}

    def to_snapshot(self) -> Dict[str, Any]:
        snapshot = {}
        for f in fields(self):
            value = getattr(self, f.name)
            snapshot[f.name] = value.value if isinstance(value, Enum) else value
        return snapshot

    @classmethod
    def from_snapshot(cls, snapshot: Dict[str, Any]):
        kwargs = {}
        for f in fields(cls):
            if f.name not in snapshot:
                continue
            value = snapshot[f.name]
            enum_type = cls._enums.get(f.name)
            if enum_type is not None and value is not None:
                value = enum_type(value)
            kwargs[f.name] = value
        return cls(**kwargs)


@dataclass(frozen=True)
class NavConfig(SnapshotMixin):
    _enums: ClassVar[Dict[str, type]] = {'mode': FrameMode, 'dimensionality': Dimensionality}

    mode: FrameMode = FrameMode.EGOCENTRIC
    dimensionality: Dimensionality = Dimensionality.TWO_D
    min_steps: int = 1
    max_steps: int = 4
    min_length: int = 1
    max_length: int = 10

    def __post_init__(self):
        if not 1 <= self.min_steps <= self.max_steps <= 4:
            raise ConfigError(f"invalid step-count range [{self.min_steps}, {self.max_steps}]")
        if not 1 <= self.min_length <= self.max_length <= 10:
            raise ConfigError(f"invalid step-length range [{self.min_length}, {self.max_length}]")


@dataclass(frozen=True)
class OLConfig(SnapshotMixin):
    _enums: ClassVar[Dict[str, type]] = {
        'mode': ViewMode, 'adjacency': Adjacency, 'heading_policy': HeadingPolicy,
    }

    mode: ViewMode = ViewMode.EGOCENTRIC
    adjacency: Adjacency = Adjacency.RANDOM
    distractor_count: int = 4
    heading_policy: HeadingPolicy = HeadingPolicy.SAMPLED_HORIZONTAL
    half_width: int = 20
    allow_reference_overlap: bool = False

    def __post_init__(self):
        if self.mode == ViewMode.EGOCENTRIC and self.heading_policy != HeadingPolicy.SAMPLED_HORIZONTAL:
            raise ConfigError("egocentric scenes sample their heading")
        if self.mode == ViewMode.ALLOCENTRIC and self.heading_policy == HeadingPolicy.SAMPLED_HORIZONTAL:
            raise ConfigError("allocentric scenes face +Y or the reference block")
        if self.allow_reference_overlap and self.mode != ViewMode.ALLOCENTRIC:
            raise ConfigError("reference overlap only applies to allocentric scenes")
        named = 2 if self.mode == ViewMode.ALLOCENTRIC else 1
        # Colors are drawn without replacement from the six block colors.
        if not 0 <= self.distractor_count <= 6 - named:
            raise ConfigError(f"distractor_count must be in [0, {6 - named}]")
        if self.half_width < 1:
            raise ConfigError("half_width must be positive")


@dataclass(frozen=True)
class StructureConfig(SnapshotMixin):
    _enums: ClassVar[Dict[str, type]] = {'style': StructureStyle, 'representation': Representation}

    # None draws a balanced mix of the three styles
    style: Optional[StructureStyle] = None
    representation: Representation = Representation.SET
    min_blocks: int = 2
    max_blocks: int = 199
    max_side: int = 10
    max_footprint_side: int = 4
    max_cube_side: int = 5
    hollow_probability: float = 0.5
    max_attempts: int = 200

    def __post_init__(self):
        if not 3 <= self.max_side <= 10:
            raise ConfigError("max_side must be in [3, 10]")
        if not 2 <= self.max_footprint_side <= self.max_side:
            raise ConfigError("max_footprint_side must be in [2, max_side]")
        if not 2 <= self.max_cube_side <= self.max_side:
            raise ConfigError("max_cube_side must be in [2, max_side]")
        if self.min_blocks < 2 or self.max_blocks < self.min_blocks:
            raise ConfigError("invalid block-count range")


@dataclass(frozen=True)
class ComboConfig(SnapshotMixin):
    _enums: ClassVar[Dict[str, type]] = {'field_color': Color}

    min_steps: int = 3
    max_steps: int = 8
    max_length: int = 10
    half_width: int = 15
    distractor_count: int = 10
    # Every block in the field shares one color so structures are found by shape alone.
    field_color: Color = Color.RED
    max_side: int = 7
    max_attempts: int = 200

    def __post_init__(self):
        if not 1 <= self.min_steps <= self.max_steps:
            raise ConfigError("invalid step-count range")
        if not 1 <= self.max_length <= 10:
            raise ConfigError("max_length must be in [1, 10]")
        if not 3 <= self.max_side <= 10:
            raise ConfigError("max_side must be in [3, 10]")
        if self.half_width < self.max_side:
            raise ConfigError("half_width must leave room for two structures")

    @property
    def structure(self) -> StructureConfig:
        return StructureConfig(
            max_side=self.max_side,
            max_footprint_side=min(4, self.max_side),
            max_cube_side=min(5, self.max_side),
        )
