"""Extraction of structured answers from free-text model output."""
from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Pattern, Sequence, Tuple, Union

import yaml

from enums import AnswerSource, Color, Dimensionality, MoveDirection, Relation, ShapeKind
from errors import InvalidStepError, SynonymTableError
from grid import Coordinate, Step

logger = logging.getLogger(__name__)

DEFAULT_SYNONYMS_PATH = Path(__file__).resolve().parent / 'data' / 'synonyms.yaml'

_CATEGORIES = {
    'relations': Relation,
    'colors': Color,
    'shapes': ShapeKind,
    'directions': MoveDirection,
    'numbers': int,
}


@dataclass(frozen=True)
class AnswerSpan:
    raw: str
    source: AnswerSource


class _TermMatcher:
    """Finds surface forms of one category and maps them to canonical terms."""

    def __init__(self, category: str, buckets: Mapping[object, Sequence[str]]):
        self.lookup: Dict[str, object] = {}
        folded, exact = [], []
        for canonical, surfaces in buckets.items():
            for surface in surfaces:
                surface = str(surface).strip()
                case_sensitive = surface.isupper()
                key = surface if case_sensitive else surface.lower()
                if key in self.lookup and self.lookup[key] != canonical:
                    raise SynonymTableError(
                        f"'{surface}' maps to both '{self.lookup[key]}' and '{canonical}' in {category}")
                self.lookup[key] = canonical
                (exact if case_sensitive else folded).append(surface)
        self._patterns: List[Tuple[Pattern, bool]] = []
        if folded:
            self._patterns.append((self._compile(folded, re.IGNORECASE), False))
        if exact:
            self._patterns.append((self._compile(exact, 0), True))

    @staticmethod
    def _compile(surfaces: Sequence[str], flags: int) -> Pattern:
        ordered = sorted(set(surfaces), key=len, reverse=True)
        alternation = '|'.join(r'\s+'.join(map(re.escape, s.split())) for s in ordered)
        return re.compile(rf"(?<!\w)(?:{alternation})(?!\w)", flags)

    def match_spans(self, text: str) -> List[Tuple[int, object]]:
        """(start offset, canonical term) for every surface form, sorted by offset."""
        hits = []
        for pattern, case_sensitive in self._patterns:
            for match in pattern.finditer(text):
                surface = ' '.join(match.group(0).split())
                hits.append((match.start(), self.lookup[surface if case_sensitive else surface.lower()]))
        return sorted(hits, key=lambda hit: hit[0])

    def find(self, text: str) -> List[object]:
        """Canonical terms in order of appearance."""
        return [term for _, term in self.match_spans(text)]


class SynonymTable:
    """
    Canonical term -> surface forms, per category.

    Loaded from YAML so graders can extend the vocabulary; each surface form
    belongs to exactly one canonical term within its category.
    """

    def __init__(self, data: Mapping[str, Mapping]):
        self.buckets: Dict[str, Dict[object, Tuple[str, ...]]] = {}
        for category, enum_type in _CATEGORIES.items():
            raw = data.get(category)
            if not raw:
                raise SynonymTableError(f"synonym table lacks the '{category}' category")
            try:
                self.buckets[category] = {enum_type(key): tuple(forms) for key, forms in raw.items()}
            except ValueError as e:
                raise SynonymTableError(f"unknown term in '{category}': {e}") from e
        self.vertical_modifiers = tuple(data.get('shape_modifiers', {}).get('vertical', ()))
        self.matchers = {c: _TermMatcher(c, b) for c, b in self.buckets.items()}
        self.vertical = _TermMatcher('shape_modifiers', {'vertical': self.vertical_modifiers})

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> SynonymTable:
        data = yaml.safe_load(Path(path).read_text(encoding='utf-8')) or {}
        return cls(data)

    def find(self, category: str, text: str) -> List[object]:
        return self.matchers[category].find(text)


@lru_cache(maxsize=None)
def load_synonyms(path: Optional[str] = None) -> SynonymTable:
    table = SynonymTable.from_yaml(path or DEFAULT_SYNONYMS_PATH)
    logger.debug("loaded synonym table from %s", path or DEFAULT_SYNONYMS_PATH)
    return table


def _table(table: Optional[SynonymTable]) -> SynonymTable:
    return table if table is not None else load_synonyms()


def _text(span: Union[AnswerSpan, str]) -> str:
    return span.raw if isinstance(span, AnswerSpan) else span


_ANS_SPAN = re.compile(r"\[ANS\]((?:(?!\[/?ANS\]).)*)\[/ANS\]", re.DOTALL)


def extract_ans_span(text: str) -> AnswerSpan:
    spans = _ANS_SPAN.findall(text or '')
    if spans:
        return AnswerSpan(spans[-1].strip(), AnswerSource.TAGGED_SPAN)
    return AnswerSpan((text or '').strip(), AnswerSource.WHOLE_TEXT)


_TUPLE = re.compile(r"\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*(?:,\s*([+-]?\d+)\s*)?\)")
_LABELED = re.compile(r"""['"]?\b([xyz])\b['"]?\s*[:=]\s*([+-]?\d+)""", re.IGNORECASE)


def parse_coordinate(span: Union[AnswerSpan, str],
                     dimensionality: Dimensionality = Dimensionality.THREE_D) -> Optional[Coordinate]:
    """
    Last coordinate tuple in the text, or a labeled x/y/z form; None if neither.

    In 2D a third component is accepted only when it is 0.
    """
    text = _text(span)
    tuples = _TUPLE.findall(text)
    if tuples:
        x, y, z = tuples[-1]
        coordinate = Coordinate(int(x), int(y), int(z) if z else 0)
    else:
        labeled = {axis.lower(): int(value) for axis, value in _LABELED.findall(text)}
        if 'x' not in labeled or 'y' not in labeled:
            return None
        coordinate = Coordinate(labeled['x'], labeled['y'], labeled.get('z', 0))
    if dimensionality == Dimensionality.TWO_D and coordinate.z != 0:
        return None
    return coordinate


_CHAIN_SPLIT = re.compile(r"[,;\n]|\band\b|\bthen\b", re.IGNORECASE)
_DIGITS = re.compile(r"(?<![\w.])\d+(?![\w.]\d)")


def _lengths(chunk: str, table: SynonymTable) -> List[int]:
    found = [(m.start(), int(m.group(0))) for m in _DIGITS.finditer(chunk)]
    found += table.matchers['numbers'].match_spans(chunk)
    return [value for _, value in sorted(found)]


def parse_instructions(span: Union[AnswerSpan, str],
                       table: Optional[SynonymTable] = None) -> Optional[List[Step]]:
    """
    Parse 'right 3, left 1, back 2' style chains.

    Returns None when any chunk has a number without a known direction, a
    direction without a number, or two different directions.
    """
    table = _table(table)
    steps: List[Step] = []
    for chunk in _CHAIN_SPLIT.split(_text(span)):
        directions = set(table.find('directions', chunk))
        lengths = _lengths(chunk, table)
        if not directions and not lengths:
            continue
        if len(directions) != 1 or not lengths:
            return None
        try:
            steps.append(Step(directions.pop(), lengths[0]))
        except InvalidStepError:
            return None
    return steps or None


def extract_relations(text: str, table: Optional[SynonymTable] = None) -> FrozenSet[Relation]:
    return frozenset(_table(table).find('relations', text or ''))


def color_counts(text: str, table: Optional[SynonymTable] = None) -> Counter:
    return Counter(_table(table).find('colors', text or ''))


def count_color_terms(text: str, color: Color, table: Optional[SynonymTable] = None) -> int:
    return color_counts(text, table)[color]


_DIMENSIONS = re.compile(r"(\d+)\s*[x×]\s*(\d+)(?:\s*[x×]\s*(\d+))?", re.IGNORECASE)


def extract_numbers(text: str, table: Optional[SynonymTable] = None) -> FrozenSet[int]:
    numbers = set()

    def _take(match: re.Match) -> str:
        numbers.update(int(g) for g in match.groups() if g)
        return ' '
    rest = _DIMENSIONS.sub(_take, text or '')
    numbers.update(int(d) for d in re.findall(r"\d+", rest))
    numbers.update(_table(table).find('numbers', rest))
    return frozenset(numbers)


_CLAUSE_SPLIT = re.compile(r"[,;:!?\n]|\.(?!\d)|\band\b|\bwith\b", re.IGNORECASE)


def extract_shape_mentions(text: str, table: Optional[SynonymTable] = None) -> Counter:
    table = _table(table)
    counts: Counter = Counter()
    for clause in _CLAUSE_SPLIT.split(text or ''):
        vertical = bool(table.vertical.find(clause))
        for kind in table.find('shapes', clause):
            if vertical and kind == ShapeKind.ROW:
                kind = ShapeKind.COLUMN
            counts[kind] += 1
    return counts
