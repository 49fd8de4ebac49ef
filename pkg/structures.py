"""Block structures: shape voxelization, gold descriptions, block-list formats and overlap metrics."""
from __future__ import annotations

import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from constants import StructureConfig, partial_credit
from enums import Color, Heading, Relation, Representation, SchemeKind, ShapeKind, StructureStyle
from errors import DegenerateSceneError, GenerationError, InvalidCompositeError, InvalidShapeError
from grid import ORIGIN, Coordinate, Pose
from localization import ColoredBlock, RelationSet, relation_oracle_allo, spatial_overlap
from parsing import SynonymTable, color_counts, extract_numbers, extract_relations, extract_shape_mentions
from seeds import make_rng, record_seeds

logger = logging.getLogger(__name__)

MAX_SIDE = 10
MIN_BLOCKS = 2
MAX_BLOCKS = 199

Dims = Tuple[int, int, int]


@dataclass(frozen=True)
class ColorScheme:
    kind: SchemeKind
    primary: Color
    secondary: Optional[Color] = None
    # Split axis for halves (0 = x, 1 = y, 2 = z)
    axis: Optional[int] = None

    def __post_init__(self):
        if self.kind == SchemeKind.SOLID:
            if self.secondary is not None:
                raise InvalidShapeError("solid schemes use one color")
            return
        if self.secondary is None or self.secondary == self.primary:
            raise InvalidShapeError(f"{self.kind.value} schemes need two distinct colors")
        if self.kind == SchemeKind.HALVES and self.axis not in (0, 1, 2):
            raise InvalidShapeError("halves need a split axis")

    @classmethod
    def solid(cls, color: Color) -> ColorScheme:
        return cls(SchemeKind.SOLID, color)

    @classmethod
    def halves(cls, first: Color, second: Color, axis: int) -> ColorScheme:
        return cls(SchemeKind.HALVES, first, second, axis)

    @classmethod
    def alternating(cls, first: Color, second: Color) -> ColorScheme:
        return cls(SchemeKind.ALTERNATING, first, second)


def _check_dims(kind: ShapeKind, dims: Dims, hollow: bool) -> None:
    dx, dy, dz = dims
    if any(d < 1 or d > MAX_SIDE for d in dims):
        raise InvalidShapeError(f"dims {dims} must lie in [1, {MAX_SIDE}]")
    units = sum(1 for d in dims if d == 1)
    valid = {
        ShapeKind.ROW: dz == 1 and units == 2,
        ShapeKind.COLUMN: dx == dy == 1 and dz > 1,
        ShapeKind.TOWER: units == 0 and not dx == dy == dz,
        ShapeKind.PLANE: units == 1,
        ShapeKind.CUBE: dx == dy == dz > 1,
    }[kind]
    if not valid:
        raise InvalidShapeError(f"dims {dims} do not describe a {kind.value}")
    if hollow:
        if kind != ShapeKind.PLANE:
            raise InvalidShapeError("only planes can be hollow")
        if any(d < 3 for d in dims if d != 1):
            raise InvalidShapeError(f"hollow plane {dims} has no interior")


@dataclass(frozen=True)
class Shape:
    kind: ShapeKind
    dims: Dims
    anchor: Coordinate
    colors: ColorScheme
    hollow: bool = False

    def __post_init__(self):
        _check_dims(self.kind, self.dims, self.hollow)
        if self.colors.kind == SchemeKind.HALVES and self.dims[self.colors.axis] < 2:
            raise InvalidShapeError(f"cannot split {self.dims} in half along axis {self.colors.axis}")

    @property
    def far_corner(self) -> Coordinate:
        dx, dy, dz = self.dims
        return self.anchor.shifted((dx - 1, dy - 1, dz - 1))

    @property
    def center(self) -> np.ndarray:
        return np.array(self.anchor.as_tuple(), dtype=float) + (np.array(self.dims) - 1) / 2


def to_blocks(shape: Shape) -> List[ColoredBlock]:
    """One block per lattice cell, ordered by (x, y, z)."""
    dims = np.array(shape.dims)
    cells = np.indices(shape.dims).reshape(3, -1).T
    if shape.hollow:
        edge = np.zeros(len(cells), dtype=bool)
        for axis in np.flatnonzero(dims > 1):
            edge |= (cells[:, axis] == 0) | (cells[:, axis] == dims[axis] - 1)
        cells = cells[edge]

    scheme = shape.colors
    if scheme.kind == SchemeKind.HALVES:
        first = cells[:, scheme.axis] < dims[scheme.axis] // 2
    elif scheme.kind == SchemeKind.ALTERNATING:
        first = cells[:, int(np.argmax(dims))] % 2 == 0
    else:
        first = np.ones(len(cells), dtype=bool)

    return [
        ColoredBlock(scheme.primary if is_first else scheme.secondary, shape.anchor.shifted(tuple(int(v) for v in cell)))
        for cell, is_first in zip(cells, first)
    ]


def _positions(shape: Shape) -> Set[Coordinate]:
    return {block.position for block in to_blocks(shape)}


_VIEWER = Pose(ORIGIN, Heading.PLUS_Y)


def composite_relations(shapes: Sequence[Shape]) -> Tuple[RelationSet, RelationSet]:
    """Where the second and third shapes sit relative to the first, for a viewer facing +Y."""
    if len(shapes) != 3:
        raise InvalidCompositeError(f"composites have 3 shapes, got {len(shapes)}")
    cells = [_positions(s) for s in shapes]
    for (i, a), (j, b) in itertools.combinations(enumerate(cells), 2):
        if a & b:
            raise InvalidCompositeError(f"shapes {i} and {j} overlap")
    links = []
    for other in shapes[1:]:
        try:
            links.append(relation_oracle_allo(_VIEWER, shapes[0].center, other.center))
        except DegenerateSceneError as e:
            raise InvalidCompositeError("shapes share a center") from e
    return links[0], links[1]


@dataclass(frozen=True)
class GoldTerms:
    relations: Counter = field(default_factory=Counter)
    colors: Counter = field(default_factory=Counter)
    shapes: Counter = field(default_factory=Counter)
    numbers: FrozenSet[int] = frozenset()

    def __add__(self, other: GoldTerms) -> GoldTerms:
        return GoldTerms(self.relations + other.relations, self.colors + other.colors,
                         self.shapes + other.shapes, self.numbers | other.numbers)

    def to_dict(self) -> Dict[str, object]:
        return {
            'relations': {r.value: n for r, n in self.relations.items()},
            'colors': {c.value: n for c, n in self.colors.items()},
            'shapes': {s.value: n for s, n in self.shapes.items()},
            'numbers': sorted(self.numbers),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> GoldTerms:
        return cls(
            Counter({Relation(k): v for k, v in data.get('relations', {}).items()}),
            Counter({Color(k): v for k, v in data.get('colors', {}).items()}),
            Counter({ShapeKind(k): v for k, v in data.get('shapes', {}).items()}),
            frozenset(data.get('numbers', ())),
        )


@dataclass(frozen=True)
class Structure:
    style: StructureStyle
    shapes: Tuple[Shape, ...]
    blocks: Tuple[ColoredBlock, ...]
    gold_description: str
    gold_terms: GoldTerms

    def __post_init__(self):
        expected = 3 if self.style == StructureStyle.COMPOSITE else 1
        if len(self.shapes) != expected:
            raise InvalidShapeError(f"{self.style.value} structures have {expected} shape(s)")
        if not MIN_BLOCKS <= len(self.blocks) <= MAX_BLOCKS:
            raise InvalidShapeError(f"{len(self.blocks)} blocks is outside [{MIN_BLOCKS}, {MAX_BLOCKS}]")


# Description templates

def _with_article(text: str) -> str:
    return re.sub(r"\ba (?=[aeiou8])", "an ", text)


def _shape_phrase(shape: Shape, rng: np.random.Generator, color: Optional[Color]) -> Tuple[str, GoldTerms]:
    c = f"{color.value} " if color is not None else ""
    dx, dy, dz = shape.dims
    kind = shape.kind
    if kind == ShapeKind.ROW:
        n = max(dx, dy)
        options = [f"a row of {n} {c}blocks", f"{n} {c}blocks in a row", f"a line of {n} {c}blocks"]
        numbers = {n}
    elif kind == ShapeKind.COLUMN:
        options = [f"a column of {dz} {c}blocks", f"{dz} {c}blocks in a column", f"a vertical line of {dz} {c}blocks"]
        numbers = {dz}
    elif kind == ShapeKind.TOWER:
        options = [f"a {dz} x {dx} x {dy} {c}tower",
                   f"a {c}rectangular prism {dz} high, {dx} wide and {dy} deep"]
        numbers = {dx, dy, dz}
        if dx == dy:
            options.append(f"a tower of {c}blocks {dz} high and {dx} wide")
    elif kind == ShapeKind.PLANE:
        a, b = (d for d in shape.dims if d != 1)
        if shape.hollow:
            options = [f"a empty {a} x {b} {c}wall", f"a {a} x {b} {c}ring"]
        elif dz != 1:
            options = [f"a {a} x {b} {c}wall"]
        else:
            options = [f"a {a} x {b} {c}platform", f"a {a} x {b} {c}plane"]
        numbers = {a, b}
    else:
        options = [f"a {dx} x {dx} x {dx} {c}cube", f"a {c}cube {dx} blocks wide"]
        numbers = {dx}
    text = options[int(rng.integers(len(options)))]
    colors = Counter({color: 1}) if color is not None else Counter()
    return text, GoldTerms(Counter(), colors, Counter({kind: 1}), frozenset(numbers))


_HALF_NAMES = {0: ('left', 'right'), 1: ('front', 'back'), 2: ('bottom', 'top')}
_HALF_RELATIONS = {0: (Relation.LEFT, Relation.RIGHT), 1: (Relation.FRONT, Relation.BACK), 2: ()}


def _scheme_phrase(scheme: ColorScheme) -> Tuple[str, GoldTerms]:
    colors = Counter({scheme.primary: 1, scheme.secondary: 1})
    if scheme.kind == SchemeKind.ALTERNATING:
        text = f"made of alternating {scheme.primary.value} and {scheme.secondary.value} blocks"
        return text, GoldTerms(colors=colors)
    first, second = _HALF_NAMES[scheme.axis]
    text = f"with a {scheme.primary.value} {first} half and a {scheme.secondary.value} {second} half"
    return text, GoldTerms(relations=Counter(_HALF_RELATIONS[scheme.axis]), colors=colors)


_RELATION_ORDER = (Relation.FRONT, Relation.BACK, Relation.LEFT, Relation.RIGHT, Relation.ABOVE, Relation.BELOW)
_RELATION_PHRASES = {
    Relation.FRONT: 'in front of',
    Relation.BACK: 'behind',
    Relation.LEFT: 'to the left of',
    Relation.RIGHT: 'to the right of',
    Relation.ABOVE: 'above',
    Relation.BELOW: 'below',
}


def relation_phrase(relations: Iterable[Relation]) -> str:
    """'in front of', 'in front of and below', 'behind, to the right of and above'."""
    present = set(relations)
    parts = [_RELATION_PHRASES[r] for r in _RELATION_ORDER if r in present]
    if len(parts) <= 1:
        return ''.join(parts)
    return f"{', '.join(parts[:-1])} and {parts[-1]}"


def describe(style: StructureStyle, shapes: Sequence[Shape], rng: np.random.Generator) -> Tuple[str, GoldTerms]:
    """Gold description and the terms it mentions, tallied piece by piece."""
    if style == StructureStyle.SIMPLE:
        text, terms = _shape_phrase(shapes[0], rng, shapes[0].colors.primary)
    elif style == StructureStyle.COHESIVE:
        base, terms = _shape_phrase(shapes[0], rng, None)
        scheme_text, scheme_terms = _scheme_phrase(shapes[0].colors)
        text, terms = f"{base} {scheme_text}", terms + scheme_terms
    else:
        text, terms = _shape_phrase(shapes[0], rng, shapes[0].colors.primary)
        parts = []
        for shape, link in zip(shapes[1:], composite_relations(shapes)):
            piece, piece_terms = _shape_phrase(shape, rng, shape.colors.primary)
            parts.append(f"{piece} {relation_phrase(link)} it")
            terms = terms + piece_terms + GoldTerms(relations=Counter(link))
        text = f"{text} with {parts[0]} and {parts[1]}"
    return _with_article(text), terms


# Generation

def sample_dims(kind: ShapeKind, rng: np.random.Generator, config: StructureConfig) -> Tuple[Dims, bool]:
    def draw(low: int, high: int) -> int:
        return int(rng.integers(low, high + 1))

    hollow = False
    if kind == ShapeKind.ROW:
        n = draw(2, config.max_side)
        dims = (n, 1, 1) if rng.random() < 0.5 else (1, n, 1)
    elif kind == ShapeKind.COLUMN:
        dims = (1, 1, draw(2, config.max_side))
    elif kind == ShapeKind.TOWER:
        while True:
            dims = (draw(2, config.max_footprint_side), draw(2, config.max_footprint_side), draw(2, config.max_side))
            if not dims[0] == dims[1] == dims[2]:
                break
    elif kind == ShapeKind.PLANE:
        a, b = draw(2, config.max_side), draw(2, config.max_side)
        unit_axis = int(rng.integers(3))
        sides = iter((a, b))
        dims = tuple(1 if axis == unit_axis else next(sides) for axis in range(3))
        hollow = min(a, b) >= 3 and rng.random() < config.hollow_probability
    else:
        a = draw(2, config.max_cube_side)
        dims = (a, a, a)
    return dims, hollow


def _distinct_colors(rng: np.random.Generator, count: int) -> List[Color]:
    palette = list(Color)
    return [palette[i] for i in rng.permutation(len(palette))[:count]]


def _random_kind(rng: np.random.Generator) -> ShapeKind:
    kinds = list(ShapeKind)
    return kinds[int(rng.integers(len(kinds)))]


# Faces a neighbour may attach to: (axis, sign)
FACES = ((0, 1), (0, -1), (1, 1), (1, -1), (2, 1))


def attach(base: Shape, dims: Dims, face: Tuple[int, int]) -> Coordinate:
    """Anchor placing a `dims` box flush against one face of `base`, aligned to its anchor."""
    axis, sign = face
    anchor = list(base.anchor.as_tuple())
    if sign > 0:
        anchor[axis] = base.anchor.as_tuple()[axis] + base.dims[axis]
    else:
        anchor[axis] = base.anchor.as_tuple()[axis] - dims[axis]
    if axis != 2:
        anchor[2] = base.anchor.z
    return Coordinate(*anchor)


def _simple_shape(rng: np.random.Generator, config: StructureConfig) -> Shape:
    kind = _random_kind(rng)
    dims, hollow = sample_dims(kind, rng, config)
    return Shape(kind, dims, ORIGIN, ColorScheme.solid(_distinct_colors(rng, 1)[0]), hollow)


def _cohesive_shape(rng: np.random.Generator, config: StructureConfig) -> Shape:
    kind = _random_kind(rng)
    dims, hollow = sample_dims(kind, rng, config)
    first, second = _distinct_colors(rng, 2)
    if rng.random() < 0.5:
        axes = [axis for axis in range(3) if dims[axis] >= 2]
        scheme = ColorScheme.halves(first, second, axes[int(rng.integers(len(axes)))])
    else:
        scheme = ColorScheme.alternating(first, second)
    return Shape(kind, dims, ORIGIN, scheme, hollow)


def _composite_shapes(rng: np.random.Generator, config: StructureConfig) -> Tuple[Shape, ...]:
    for _ in range(config.max_attempts):
        colors = _distinct_colors(rng, 3)
        kind = _random_kind(rng)
        dims, hollow = sample_dims(kind, rng, config)
        base = Shape(kind, dims, ORIGIN, ColorScheme.solid(colors[0]), hollow)
        faces = [FACES[i] for i in rng.permutation(len(FACES))[:2]]
        shapes = [base]
        for color, face in zip(colors[1:], faces):
            kind = _random_kind(rng)
            dims, hollow = sample_dims(kind, rng, config)
            shapes.append(Shape(kind, dims, attach(base, dims, face), ColorScheme.solid(color), hollow))
        total = sum(len(to_blocks(s)) for s in shapes)
        if total > config.max_blocks or _positions(shapes[1]) & _positions(shapes[2]):
            continue
        try:
            composite_relations(shapes)
        except InvalidCompositeError:
            continue
        return tuple(shapes)
    raise GenerationError(f"no valid composite after {config.max_attempts} attempts")


def build_structure(style: StructureStyle, shapes: Sequence[Shape], rng: np.random.Generator) -> Structure:
    blocks = tuple(block for shape in shapes for block in to_blocks(shape))
    description, terms = describe(style, shapes, rng)
    return Structure(style, tuple(shapes), blocks, description, terms)


def generate_structure(style: StructureStyle, rng: np.random.Generator,
                       config: Optional[StructureConfig] = None) -> Structure:
    config = config or StructureConfig()
    if style == StructureStyle.SIMPLE:
        shapes = (_simple_shape(rng, config),)
    elif style == StructureStyle.COHESIVE:
        shapes = (_cohesive_shape(rng, config),)
    else:
        shapes = _composite_shapes(rng, config)
    structure = build_structure(style, shapes, rng)
    logger.debug("generated %s structure with %d blocks", style.value, len(structure.blocks))
    return structure


def style_for_index(config: StructureConfig, index: int) -> StructureStyle:
    if config.style is not None:
        return config.style
    styles = list(StructureStyle)
    return styles[index % len(styles)]


def generate_batch(config: StructureConfig, size: int, seed: int) -> List[Structure]:
    structures = [
        generate_structure(style_for_index(config, i), make_rng(s), config)
        for i, s in enumerate(record_seeds(seed, size))
    ]
    logger.info("generated %d structures", size)
    return structures


# Block-list formats

def _text_entry(block: ColoredBlock) -> str:
    # Always the bare article: "a orange block".
    p = block.position
    return f"a {block.color.value} block at ({p.x}, {p.y}, {p.z})"


def serialize(blocks: Sequence[ColoredBlock], representation: Representation) -> str:
    if not blocks:
        raise ValueError("cannot serialize an empty block list")
    if representation == Representation.PLAIN:
        return '\n'.join(f"{b.color.value} {b.position.x} {b.position.y} {b.position.z}" for b in blocks)
    if representation == Representation.SET:
        entries = (f"({b.color.value}, {b.position.x}, {b.position.y}, {b.position.z})" for b in blocks)
        return '{' + ', '.join(entries) + '}'
    if representation == Representation.DICT:
        entries = (f"(color = {b.color.value}, x = {b.position.x}, y = {b.position.y}, z = {b.position.z})"
                   for b in blocks)
        return '{' + ', '.join(entries) + '}'
    entries = [_text_entry(b) for b in blocks]
    if len(entries) == 1:
        return entries[0]
    return ', '.join(entries[:-1]) + ', and ' + entries[-1]


_INT = r"(-?\d+)"
_PATTERNS = {
    Representation.PLAIN: re.compile(rf"^\s*(\w+) {_INT} {_INT} {_INT}\s*$", re.MULTILINE),
    Representation.SET: re.compile(rf"\((\w+), {_INT}, {_INT}, {_INT}\)"),
    Representation.DICT: re.compile(rf"\(color = (\w+), x = {_INT}, y = {_INT}, z = {_INT}\)"),
    Representation.TEXT: re.compile(rf"\ban? (\w+) block at \({_INT}, {_INT}, {_INT}\)"),
}


def deserialize(text: str, representation: Representation) -> List[ColoredBlock]:
    return [
        ColoredBlock(Color(color), Coordinate(int(x), int(y), int(z)))
        for color, x, y, z in _PATTERNS[representation].findall(text)
    ]


# Overlap metrics

def _count_overlap(predicted: Counter, gold: Counter) -> float:
    keys = set(predicted) | set(gold)
    high = sum(max(predicted[k], gold[k]) for k in keys)
    if high == 0:
        return 100.0
    return 100.0 * sum(min(predicted[k], gold[k]) for k in keys) / high


def color_overlap(predicted_text: str, gold_terms: GoldTerms, table: Optional[SynonymTable] = None) -> float:
    return _count_overlap(color_counts(predicted_text, table), gold_terms.colors)


def _best_partial_pairs(predicted: List[ShapeKind], gold: List[ShapeKind]) -> List[float]:
    """Credits of the partial matches maximizing total credit; zero-credit pairs are dropped."""
    best: List[float] = []
    if not predicted or not gold:
        return best
    if len(predicted) <= len(gold):
        pairings = ((predicted, perm) for perm in itertools.permutations(gold, len(predicted)))
    else:
        pairings = ((perm, gold) for perm in itertools.permutations(predicted, len(gold)))
    for left, right in pairings:
        credits = [c for c in (partial_credit(a, b) for a, b in zip(left, right)) if c > 0]
        if sum(credits) > sum(best):
            best = credits
    return best


def shape_overlap(predicted_text: str, gold_terms: GoldTerms, table: Optional[SynonymTable] = None) -> float:
    predicted = extract_shape_mentions(predicted_text, table)
    gold = gold_terms.shapes
    kinds = set(predicted) | set(gold)
    exact = sum(min(predicted[k], gold[k]) for k in kinds)
    high = sum(max(predicted[k], gold[k]) for k in kinds)
    if high == 0:
        return 100.0
    leftover_gold = list((gold - predicted).elements())
    # Predictions beyond the number of unmatched gold shapes can never pair up.
    leftover_predicted = [
        kind for kind, n in sorted((predicted - gold).items(), key=lambda kv: kv[0].value)
        for _ in range(min(n, len(leftover_gold)))
    ]
    credits = _best_partial_pairs(leftover_predicted, leftover_gold)
    return 100.0 * (exact + sum(credits)) / (high - len(credits))


def numeric_overlap(predicted_text: str, gold_terms: GoldTerms, table: Optional[SynonymTable] = None) -> float:
    predicted, gold = extract_numbers(predicted_text, table), gold_terms.numbers
    union = predicted | gold
    if not union:
        return 100.0
    return 100.0 * len(predicted & gold) / len(union)


def relation_overlap(predicted_text: str, gold_terms: GoldTerms, table: Optional[SynonymTable] = None) -> float:
    return spatial_overlap(extract_relations(predicted_text, table), set(gold_terms.relations))


def structure_scores(predicted_text: str, gold_terms: GoldTerms,
                     table: Optional[SynonymTable] = None) -> Dict[str, float]:
    return {
        'spatial_overlap': relation_overlap(predicted_text, gold_terms, table),
        'color_overlap': color_overlap(predicted_text, gold_terms, table),
        'shape_overlap': shape_overlap(predicted_text, gold_terms, table),
        'numeric_overlap': numeric_overlap(predicted_text, gold_terms, table),
    }
