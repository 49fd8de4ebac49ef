import inspect
import logging
from typing import Dict, List, Optional, Type

from tqdm import tqdm

import tasks as tasks_module
from base import TaskFamily
from constants import SnapshotMixin
from dataset import TaskRecord
from enums import ShotMode, TaskKind
from errors import ConfigError
from seeds import make_rng, record_seeds

logger = logging.getLogger(__name__)


def get_available_tasks() -> Dict[TaskKind, Type[TaskFamily]]:
    families = {}
    for _, obj in inspect.getmembers(tasks_module):
        if (inspect.isclass(obj)
                and issubclass(obj, TaskFamily)
                and not inspect.isabstract(obj)
                and obj.__module__ == tasks_module.__name__):
            families[obj.kind] = obj
    return families


def get_task(kind: TaskKind) -> TaskFamily:
    families = get_available_tasks()
    if kind not in families:
        raise ConfigError(f"no task family registered for {kind.value}")
    return families[kind]()


def build_records(family: TaskFamily, config: SnapshotMixin, size: int, seed: int,
                  shots: ShotMode = ShotMode.ZERO, with_reasoning: bool = False,
                  progress: bool = True) -> List[TaskRecord]:
    """
    Generate a dataset for one task family.

    Args:
        family: Task family to draw from
        config: Family configuration, stored with every record
        size: Number of records
        seed: Batch seed; each record gets its own derived seed
        shots: Prompting mode
        with_reasoning: Attach a synthetic reasoning trace to each record
        progress: Show a tqdm progress bar

    Returns:
        Records in index order
    """
    params = family.batch_params(config, size, make_rng(seed))
    seeds = record_seeds(seed, size)
    records = []
    for index in tqdm(range(size), desc=f"Generating {family.kind.value}", disable=not progress):
        records.append(family.make_record(config, seeds[index], index, params[index], shots, with_reasoning))
    logger.info("built %d %s records from seed %d", size, family.kind.value, seed)
    return records


def render_gold_answer(record: TaskRecord, family: Optional[TaskFamily] = None) -> str:
    """Gold answer text for a record, rebuilt from its seed."""
    family = family or get_task(record.task)
    return family.gold_answer(family.rebuild(record))
