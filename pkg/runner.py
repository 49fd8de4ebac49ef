import logging
import os
import statistics
from collections import defaultdict
from datetime import datetime
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field
from tqdm import tqdm

from base import TaskFamily
from constants import BenchConfig
from dataset import Generation, TaskRecord
from enums import TaskKind
from errors import OrphanGenerationError
from parsing import SynonymTable
from registry import get_task

logger = logging.getLogger(__name__)

MISSING_CELL = 'n/a'
DEFAULT_BREAKDOWN_KEYS = ('heading', 'path_length')


class RecordScore(BaseModel):
    id: str
    task: TaskKind
    scores: Dict[str, float]
    # Set when the generation was an error marker or absent
    unanswered: bool = False
    cells: Dict[str, str] = Field(default_factory=dict)


class ScoreReport(BaseModel):
    records: List[RecordScore] = Field(default_factory=list)
    aggregates: Dict[str, float] = Field(default_factory=dict)
    # breakdown key -> cell value -> metric -> mean, plus 'count'
    breakdowns: Dict[str, Dict[str, Dict[str, float]]] = Field(default_factory=dict)
    unanswered: int = 0


def _mean(values: Sequence[float]) -> float:
    return statistics.mean(values) if values else 0.0


class ScoringRunner:
    def __init__(self, dataset: Sequence[TaskRecord], generations: Sequence[Generation],
                 breakdown_keys: Sequence[str] = DEFAULT_BREAKDOWN_KEYS,
                 table: Optional[SynonymTable] = None):
        self.dataset = list(dataset)
        self.generations = {g.id: g for g in generations}
        self.breakdown_keys = tuple(breakdown_keys)
        self.table = table
        self._families: Dict[TaskKind, TaskFamily] = {}

        known = {record.id for record in self.dataset}
        orphans = set(self.generations) - known
        if orphans:
            raise OrphanGenerationError(orphans)

        self.stats = {
            'metrics': defaultdict(list),
            'cells': {key: defaultdict(lambda: defaultdict(list)) for key in self.breakdown_keys},
            'unanswered': 0,
        }

    def _family(self, kind: TaskKind) -> TaskFamily:
        if kind not in self._families:
            self._families[kind] = get_task(kind)
        return self._families[kind]

    def score_record(self, record: TaskRecord) -> RecordScore:
        """Score one record; error markers and missing generations count as unparseable text."""
        family = self._family(record.task)
        generation = self.generations.get(record.id)
        unanswered = generation is None or generation.failed
        text = '' if unanswered else (generation.text or '')
        scores = family.score(text, record.gold, family.load_config(record.config), self.table)
        cells = {key: str(record.metadata.get(key, MISSING_CELL)) for key in self.breakdown_keys}
        return RecordScore(id=record.id, task=record.task, scores=scores, unanswered=unanswered, cells=cells)

    def _update_stats(self, result: RecordScore) -> None:
        if result.unanswered:
            self.stats['unanswered'] += 1
        for metric, value in result.scores.items():
            self.stats['metrics'][metric].append(value)
            for key, cell in result.cells.items():
                self.stats['cells'][key][cell][metric].append(value)

    def _cell_counts(self, results: Sequence[RecordScore], key: str) -> Dict[str, int]:
        counts: Dict[str, int] = defaultdict(int)
        for result in results:
            counts[result.cells[key]] += 1
        return counts

    def _calculate_final_stats(self, results: List[RecordScore]) -> ScoreReport:
        aggregates = {metric: _mean(values) for metric, values in self.stats['metrics'].items()}
        breakdowns: Dict[str, Dict[str, Dict[str, float]]] = {}
        for key in self.breakdown_keys:
            counts = self._cell_counts(results, key)
            breakdowns[key] = {
                cell: {**{m: _mean(v) for m, v in metrics.items()}, 'count': float(counts[cell])}
                for cell, metrics in sorted(self.stats['cells'][key].items())
            }
        return ScoreReport(records=results, aggregates=aggregates, breakdowns=breakdowns,
                           unanswered=self.stats['unanswered'])

    def run(self, progress: bool = True) -> ScoreReport:
        results = []
        for record in tqdm(self.dataset, desc="Scoring", disable=not progress):
            result = self.score_record(record)
            self._update_stats(result)
            results.append(result)
        report = self._calculate_final_stats(results)
        logger.info("scored %d records (%d unanswered)", len(results), report.unanswered)
        return report


def score_dataset(generations: Sequence[Generation], dataset: Sequence[TaskRecord],
                  breakdown_keys: Sequence[str] = DEFAULT_BREAKDOWN_KEYS,
                  table: Optional[SynonymTable] = None, progress: bool = False) -> ScoreReport:
    return ScoringRunner(dataset, generations, breakdown_keys, table).run(progress)


def format_report(report: ScoreReport) -> str:
    """Aligned plain-text table of aggregates and breakdown cells."""
    metrics = sorted(report.aggregates)
    header = ['cell', 'count'] + metrics
    rows = [['all', str(len(report.records))] + [f"{report.aggregates[m]:.2f}" for m in metrics]]
    for key, cells in report.breakdowns.items():
        for cell, values in cells.items():
            rows.append([f"{key}={cell}", str(int(values['count']))]
                        + [f"{values[m]:.2f}" if m in values else '-' for m in metrics])
    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]

    def line(cells: List[str]) -> str:
        return '  '.join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))

    lines = ["=== Score Report ===", line(header), line(['-' * w for w in widths])]
    lines += [line(row) for row in rows]
    lines.append(f"Unanswered: {report.unanswered}")
    return '\n'.join(lines)


def save_report(report: ScoreReport, path: Optional[str] = None, report_dir: Optional[str] = None) -> str:
    """
    Write the report as JSON plus a text table next to it.

    Returns:
        Path of the JSON report
    """
    if path is None:
        report_dir = report_dir or BenchConfig().REPORT_DIR
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        path = os.path.join(report_dir, f'score_{timestamp}.json')
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(report.model_dump_json(indent=2))
    with open(os.path.splitext(path)[0] + '.txt', 'w', encoding='utf-8') as f:
        f.write(format_report(report) + '\n')
    logger.info("report saved to %s", path)
    return path
