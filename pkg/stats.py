"""Distribution statistics for a generated dataset."""
import logging
import statistics
from collections import Counter
from typing import Any, Dict, Iterable, List, Sequence

from dataset import TaskRecord
from enums import MoveDirection, TaskKind
from errors import ConfigError
from grid import Step
from navigation import direction_changes

logger = logging.getLogger(__name__)

# Block-count buckets for structure sets
SMALL_STRUCTURE = 15
LARGE_STRUCTURE = 85


def _shares(values: Iterable[Any]) -> Dict[str, float]:
    counts = Counter(str(v) for v in values)
    total = sum(counts.values())
    return {key: counts[key] / total for key in sorted(counts)} if total else {}


def _histogram(values: Iterable[Any]) -> Dict[str, int]:
    counts = Counter(str(v) for v in values)
    return {key: counts[key] for key in sorted(counts, key=lambda k: (len(k), k))}


def _chain_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    directions = [d for r in records for d in r.metadata['directions']]
    lengths = [n for r in records for n in r.metadata['step_lengths']]
    changed = transitions = 0
    for record in records:
        steps = [Step(MoveDirection(d), n)
                 for d, n in zip(record.metadata['directions'], record.metadata['step_lengths'])]
        c, t = direction_changes(steps)
        changed, transitions = changed + c, transitions + t
    return {
        'direction_shares': _shares(directions),
        'path_length_histogram': _histogram(r.metadata['path_length'] for r in records),
        'mean_step_length': statistics.mean(lengths),
        'direction_change_fraction': changed / transitions if transitions else 0.0,
    }


def _navigation_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    return _chain_stats(records)


def _card2ego_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    report = _chain_stats(records)
    report['compass_shares'] = _shares(c for r in records for c in r.metadata['compass'])
    return report


def _relation_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    relations = [rel for r in records for rel in r.gold['relations']]
    return {
        'relation_count_shares': _shares(len(r.gold['relations']) for r in records),
        'relation_shares': _shares(relations),
        'heading_shares': _shares(r.metadata.get('heading', 'n/a') for r in records),
    }


def _localization_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    report = _relation_stats(records)
    report['mean_viewer_distance'] = statistics.mean(r.metadata['viewer_distance'] for r in records)
    report['mean_anchor_distance'] = statistics.mean(r.metadata['anchor_distance'] for r in records)
    return report


def _block_bucket(count: int) -> str:
    if count < SMALL_STRUCTURE:
        return f"<{SMALL_STRUCTURE}"
    if count < LARGE_STRUCTURE:
        return f"{SMALL_STRUCTURE}-{LARGE_STRUCTURE}"
    return f">={LARGE_STRUCTURE}"


def _structure_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    counts = [r.metadata['block_count'] for r in records]
    return {
        'style_shares': _shares(r.metadata['style'] for r in records),
        'block_count': {
            'mean': statistics.mean(counts),
            'min': min(counts),
            'max': max(counts),
            'buckets': _shares(_block_bucket(c) for c in counts),
        },
        'shape_shares': _shares(s for r in records for s in r.metadata['shapes']),
        'color_shares': _shares(c for r in records for c in r.metadata['colors']),
        'colors_per_structure': _histogram(len(r.metadata['colors']) for r in records),
        'relation_shares': _shares(rel for r in records for rel in r.metadata['relations']),
    }


def _combo_stats(records: Sequence[TaskRecord]) -> Dict[str, Any]:
    report = _relation_stats(records)
    report['path_length_histogram'] = _histogram(r.metadata['path_length'] for r in records)
    report['structure_shares'] = _shares(
        kind for r in records for kind in (r.metadata['target'], r.metadata['reference']))
    return report


_REPORTERS = {
    TaskKind.NAV_FOLLOWER: _navigation_stats,
    TaskKind.NAV_INSTRUCTOR: _navigation_stats,
    TaskKind.CARD2EGO: _card2ego_stats,
    TaskKind.OL_EGO: _localization_stats,
    TaskKind.OL_ALLO: _localization_stats,
    TaskKind.STRUCT_DESC: _structure_stats,
    TaskKind.COMBO: _combo_stats,
}


def dataset_stats(records: List[TaskRecord]) -> Dict[str, Any]:
    """Distribution report for a single-task dataset; an empty dataset gives an empty report."""
    if not records:
        return {}
    kinds = {r.task for r in records}
    if len(kinds) != 1:
        raise ConfigError(f"stats needs a single-task dataset, got {sorted(k.value for k in kinds)}")
    kind = kinds.pop()
    report = {'task': kind.value, 'size': len(records), **_REPORTERS[kind](records)}
    logger.info("computed %s statistics over %d records", kind.value, len(records))
    return report


def format_stats(report: Dict[str, Any], indent: int = 0) -> str:
    lines = []
    pad = '  ' * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(format_stats(value, indent + 1))
        elif isinstance(value, float):
            lines.append(f"{pad}{key}: {value:.3f}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return '\n'.join(line for line in lines if line)
