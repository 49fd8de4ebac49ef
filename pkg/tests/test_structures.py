import re
from collections import Counter
from itertools import combinations
from pathlib import Path

import pytest

from constants import SHAPE_PARTIAL_CREDIT, StructureConfig, partial_credit
from enums import Color, Relation, Representation, ShapeKind, StructureStyle
from errors import InvalidCompositeError, InvalidShapeError
from grid import ORIGIN, Coordinate
from localization import ColoredBlock
from seeds import make_rng
from structures import (
    ColorScheme, GoldTerms, Shape, build_structure, color_overlap, composite_relations, describe,
    deserialize, generate_batch, generate_structure, numeric_overlap, relation_phrase, serialize,
    shape_overlap, structure_scores, to_blocks,
)

FIXTURES = Path(__file__).parent / 'fixtures'
DUMP_ENTRY = re.compile(r"color : (\w+), x : (-?\d+), y : (-?\d+), z : (-?\d+)")


def composite_fixture():
    return (
        Shape(ShapeKind.TOWER, (2, 2, 8), ORIGIN, ColorScheme.solid(Color.PURPLE)),
        Shape(ShapeKind.TOWER, (2, 2, 5), Coordinate(0, -2, 0), ColorScheme.solid(Color.YELLOW)),
        Shape(ShapeKind.PLANE, (4, 5, 1), Coordinate(0, 0, 8), ColorScheme.solid(Color.RED), hollow=True),
    )


def load_dump():
    text = (FIXTURES / 'composite_dump.txt').read_text()
    return [ColoredBlock(Color(c), Coordinate(int(x), int(y), int(z))) for c, x, y, z in DUMP_ENTRY.findall(text)]


class TestShapes:
    @pytest.mark.parametrize("kind,dims,hollow", [
        (ShapeKind.ROW, (1, 1, 4), False),
        (ShapeKind.COLUMN, (2, 1, 4), False),
        (ShapeKind.CUBE, (2, 2, 3), False),
        (ShapeKind.TOWER, (3, 3, 3), False),
        (ShapeKind.PLANE, (2, 2, 2), False),
        (ShapeKind.TOWER, (2, 2, 11), False),
        (ShapeKind.CUBE, (3, 3, 3), True),
        (ShapeKind.PLANE, (2, 5, 1), True),
    ])
    def test_invalid_dims(self, kind, dims, hollow):
        with pytest.raises(InvalidShapeError):
            Shape(kind, dims, ORIGIN, ColorScheme.solid(Color.RED), hollow)

    def test_schemes_need_distinct_colors(self):
        with pytest.raises(InvalidShapeError):
            ColorScheme.alternating(Color.RED, Color.RED)
        with pytest.raises(InvalidShapeError):
            ColorScheme.halves(Color.RED, Color.BLUE, axis=3)

    def test_block_counts(self):
        assert len(to_blocks(Shape(ShapeKind.CUBE, (3, 3, 3), ORIGIN, ColorScheme.solid(Color.RED)))) == 27
        ring = Shape(ShapeKind.PLANE, (4, 5, 1), ORIGIN, ColorScheme.solid(Color.RED), hollow=True)
        assert len(to_blocks(ring)) == 14
        small = Shape(ShapeKind.PLANE, (3, 1, 3), ORIGIN, ColorScheme.solid(Color.RED), hollow=True)
        assert Coordinate(1, 0, 1) not in {b.position for b in to_blocks(small)}
        assert len(to_blocks(small)) == 8

    def test_halves_split_along_axis(self):
        row = Shape(ShapeKind.ROW, (4, 1, 1), ORIGIN, ColorScheme.halves(Color.RED, Color.BLUE, axis=0))
        assert [b.color for b in to_blocks(row)] == [Color.RED, Color.RED, Color.BLUE, Color.BLUE]

    def test_alternating_follows_longest_axis(self):
        column = Shape(ShapeKind.COLUMN, (1, 1, 3), ORIGIN, ColorScheme.alternating(Color.GREEN, Color.ORANGE))
        assert [b.color for b in to_blocks(column)] == [Color.GREEN, Color.ORANGE, Color.GREEN]


class TestComposite:
    def test_blocks_match_dump(self):
        shapes = composite_fixture()
        blocks = [b for s in shapes for b in to_blocks(s)]
        assert len(blocks) == 66
        assert blocks == load_dump()

    def test_relations(self):
        yellow, red = composite_relations(composite_fixture())
        assert yellow == {Relation.FRONT, Relation.BELOW}
        assert red == {Relation.RIGHT, Relation.BACK, Relation.ABOVE}

    @pytest.mark.parametrize("seed", range(25))
    def test_description_scores_itself_perfectly(self, seed):
        text, terms = describe(StructureStyle.COMPOSITE, composite_fixture(), make_rng(seed))
        assert terms.numbers == {2, 4, 5, 8}
        assert terms.colors == Counter({Color.PURPLE: 1, Color.YELLOW: 1, Color.RED: 1})
        assert terms.shapes == Counter({ShapeKind.TOWER: 2, ShapeKind.PLANE: 1})
        assert structure_scores(text, terms) == {
            'spatial_overlap': 100.0, 'color_overlap': 100.0, 'shape_overlap': 100.0, 'numeric_overlap': 100.0,
        }

    def test_overlapping_shapes_rejected(self):
        base, yellow, _ = composite_fixture()
        clash = Shape(ShapeKind.COLUMN, (1, 1, 3), Coordinate(1, 1, 0), ColorScheme.solid(Color.RED))
        with pytest.raises(InvalidCompositeError):
            composite_relations((base, yellow, clash))

    def test_needs_three_shapes(self):
        with pytest.raises(InvalidCompositeError):
            composite_relations(composite_fixture()[:2])


def test_relation_phrase():
    assert relation_phrase([Relation.BELOW, Relation.FRONT]) == "in front of and below"
    assert relation_phrase([Relation.ABOVE, Relation.RIGHT, Relation.BACK]) == "behind, to the right of and above"
    assert relation_phrase([Relation.LEFT]) == "to the left of"


def test_simple_description():
    column = Shape(ShapeKind.COLUMN, (1, 1, 6), ORIGIN, ColorScheme.solid(Color.ORANGE))
    structure = build_structure(StructureStyle.SIMPLE, [column], make_rng(0))
    assert len(structure.blocks) == 6
    assert structure.gold_terms.numbers == {6}
    assert "orange" in structure.gold_description


class TestSerialization:
    blocks = [ColoredBlock(Color.RED, Coordinate(0, 0, 0)), ColoredBlock(Color.ORANGE, Coordinate(1, -2, 3))]

    @pytest.mark.parametrize("representation,expected", [
        (Representation.PLAIN, "red 0 0 0\norange 1 -2 3"),
        (Representation.SET, "{(red, 0, 0, 0), (orange, 1, -2, 3)}"),
        (Representation.DICT, "{(color = red, x = 0, y = 0, z = 0), (color = orange, x = 1, y = -2, z = 3)}"),
        (Representation.TEXT, "a red block at (0, 0, 0), and a orange block at (1, -2, 3)"),
    ])
    def test_formats(self, representation, expected):
        assert serialize(self.blocks, representation) == expected

    @pytest.mark.parametrize("representation", list(Representation))
    def test_composite_survives_every_format(self, representation):
        blocks = [b for s in composite_fixture() for b in to_blocks(s)]
        assert deserialize(serialize(blocks, representation), representation) == blocks

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            serialize([], Representation.SET)

    def test_text_reads_older_article_form(self):
        text = "a red block at (0, 0, 0), and an orange block at (1, -2, 3)"
        assert deserialize(text, Representation.TEXT) == self.blocks


class TestMetrics:
    def test_color_overlap(self):
        gold = GoldTerms(colors=Counter({Color.PURPLE: 1, Color.YELLOW: 1, Color.RED: 1}))
        assert color_overlap("a purple tower", gold) == pytest.approx(100 / 3)
        assert color_overlap("a purple row", GoldTerms(colors=Counter({Color.PURPLE: 1, Color.YELLOW: 1}))) == 50.0

    def test_repeated_colors_count(self):
        gold = GoldTerms(colors=Counter({Color.RED: 1}))
        assert color_overlap("a red cube on a red plane", gold) == 50.0

    @pytest.mark.parametrize("text,gold,expected", [
        ("a row of blocks", ShapeKind.COLUMN, 60.0),
        ("a tower", ShapeKind.CUBE, 50.0),
        ("a row", ShapeKind.CUBE, 0.0),
        ("an upright line of blocks", ShapeKind.COLUMN, 100.0),
        ("a wall", ShapeKind.PLANE, 100.0),
    ])
    def test_shape_overlap(self, text, gold, expected):
        assert shape_overlap(text, GoldTerms(shapes=Counter({gold: 1}))) == pytest.approx(expected)

    def test_shape_overlap_extra_prediction(self):
        gold = GoldTerms(shapes=Counter({ShapeKind.TOWER: 1}))
        assert shape_overlap("a tower on a cube", gold) == pytest.approx(50.0)

    def test_partial_credit_is_symmetric(self):
        for a, b in combinations(ShapeKind, 2):
            assert partial_credit(a, b) == partial_credit(b, a)
        assert all(0 < credit < 1 for credit in SHAPE_PARTIAL_CREDIT.values())

    def test_numeric_overlap(self):
        gold = GoldTerms(numbers=frozenset({2, 4}))
        assert numeric_overlap("a 2 block wide thing", gold) == 50.0
        assert numeric_overlap("seven blocks", gold) == 0.0
        assert numeric_overlap("a 2 x 4 plane", gold) == 100.0

    def test_empty_gold_and_prediction(self):
        assert structure_scores("", GoldTerms())['numeric_overlap'] == 100.0


class TestGeneration:
    def test_balanced_batch(self):
        structures = generate_batch(StructureConfig(), 99, seed=4)
        assert Counter(s.style for s in structures) == {style: 33 for style in StructureStyle}
        kinds = {shape.kind for s in structures for shape in s.shapes}
        colors = {b.color for s in structures for b in s.blocks}
        assert kinds == set(ShapeKind)
        assert colors == set(Color)

    def test_generated_structures_are_valid(self):
        for structure in generate_batch(StructureConfig(), 60, seed=12):
            positions = [b.position for b in structure.blocks]
            assert len(positions) == len(set(positions))
            assert 2 <= len(positions) <= 199
            assert all(v == 100.0 for v in structure_scores(structure.gold_description,
                                                             structure.gold_terms).values())

    @pytest.mark.parametrize("style", list(StructureStyle))
    def test_fixed_style(self, style):
        structure = generate_structure(style, make_rng(30))
        assert structure.style == style
        assert len(structure.shapes) == (3 if style == StructureStyle.COMPOSITE else 1)

    def test_deterministic(self):
        config = StructureConfig(style=StructureStyle.COMPOSITE)
        assert generate_batch(config, 10, seed=1) == generate_batch(config, 10, seed=1)
