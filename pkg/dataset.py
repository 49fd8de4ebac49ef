"""JSONL dataset and generation files."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError

from enums import ShotMode, TaskKind
from errors import DatasetLoadError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Model = TypeVar('Model', bound=BaseModel)


class TaskRecord(BaseModel):
    """One benchmark instance: prompt, gold answer and everything needed to rebuild it."""
    id: str
    task: TaskKind
    seed: int
    config: Dict[str, Any]
    # Per-record draws fixed by the batch (e.g. the stratified step count)
    params: Dict[str, Any] = Field(default_factory=dict)
    shots: ShotMode = ShotMode.ZERO
    prompt: str
    gold: Dict[str, Any]
    gold_answer: str
    metadata: Dict[str, Any] = Field(default_factory=dict)
    reasoning: Optional[str] = None


class Generation(BaseModel):
    """A model's reply to one record; `error` is set when the request failed."""
    id: str
    text: Optional[str] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def _write_lines(items: Iterable[BaseModel], path: PathLike) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open('w', encoding='utf-8') as f:
        for item in items:
            f.write(item.model_dump_json() + '\n')
            count += 1
    return count


def _read_lines(model: Type[Model], path: PathLike) -> List[Model]:
    items = []
    with Path(path).open('r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                items.append(model.model_validate_json(line))
            except ValidationError as e:
                raise DatasetLoadError(str(path), line_number, str(e).splitlines()[0]) from e
    return items


def write_dataset(records: Iterable[TaskRecord], path: PathLike) -> None:
    count = _write_lines(records, path)
    logger.info("wrote %d records to %s", count, path)


def read_dataset(path: PathLike) -> List[TaskRecord]:
    return _read_lines(TaskRecord, path)


def write_generations(generations: Iterable[Generation], path: PathLike) -> None:
    count = _write_lines(generations, path)
    logger.info("wrote %d generations to %s", count, path)


def read_generations(path: PathLike) -> List[Generation]:
    return _read_lines(Generation, path)
