from abc import ABC, abstractmethod
from typing import Any, ClassVar, Dict, Generic, List, Optional, Tuple, TypeVar

import numpy as np

from constants import BenchConfig, SnapshotMixin
from dataset import TaskRecord
from enums import ShotMode, TaskKind
from errors import ConfigError, GoldMismatchError
from parsing import SynonymTable
from prompts import VALID_SHOTS, PromptParts, render_prompt
from seeds import exemplar_seeds

Instance = TypeVar('Instance')


class TaskFamily(ABC, Generic[Instance]):
    """Base class for every benchmark task family."""

    kind: ClassVar[TaskKind]
    config_type: ClassVar[type]
    metrics: ClassVar[Tuple[str, ...]]

    def __init__(self, bench: Optional[BenchConfig] = None):
        self.bench = bench or BenchConfig()

    def default_config(self) -> SnapshotMixin:
        return self.config_type()

    def config_metadata(self, config: SnapshotMixin) -> Dict[str, Any]:
        return {}

    def batch_params(self, config: SnapshotMixin, size: int, rng: np.random.Generator) -> List[Dict[str, Any]]:
        """Per-record draws that must be balanced across a batch."""
        return [{} for _ in range(size)]

    @abstractmethod
    def build(self, config: SnapshotMixin, seed: int, params: Dict[str, Any]) -> Instance:
        """
        Build one instance from its own seed.

        Args:
            config: Task configuration
            seed: Record seed
            params: Batch-level draws for this record, possibly empty

        Returns:
            The instance with its gold answer computed
        """

    @abstractmethod
    def gold(self, instance: Instance) -> Dict[str, Any]:
        pass

    @abstractmethod
    def check_gold(self, instance: Instance) -> None:
        """Recompute the gold by an independent route; raise GoldMismatchError on disagreement."""

    @abstractmethod
    def gold_answer(self, instance: Instance) -> str:
        pass

    @abstractmethod
    def prompt_parts(self, config: SnapshotMixin, instance: Instance) -> Tuple[str, str]:
        """(preamble, question) for an instance."""

    @abstractmethod
    def worked_example(self, config: SnapshotMixin) -> Optional[Tuple[str, str]]:
        pass

    @abstractmethod
    def metadata(self, instance: Instance) -> Dict[str, Any]:
        pass

    @abstractmethod
    def score(self, text: str, gold: Dict[str, Any], config: SnapshotMixin,
              table: Optional[SynonymTable] = None) -> Dict[str, float]:
        pass

    def reasoning(self, instance: Instance) -> Optional[str]:
        return None

    def load_config(self, snapshot: Dict[str, Any]) -> SnapshotMixin:
        return self.config_type.from_snapshot(snapshot)

    def rebuild(self, record: TaskRecord) -> Instance:
        return self.build(self.load_config(record.config), record.seed, record.params)

    def exemplars(self, config: SnapshotMixin, seed: int) -> Tuple[List[int], Tuple[Tuple[str, str], ...]]:
        seeds = exemplar_seeds(self.bench.EXEMPLAR_SEED_OFFSET, seed, self.bench.FEW_SHOT_COUNT)
        pairs = []
        for exemplar_seed in seeds:
            instance = self.build(config, exemplar_seed, {})
            _, question = self.prompt_parts(config, instance)
            pairs.append((question, self.gold_answer(instance)))
        return seeds, tuple(pairs)

    def make_record(self, config: SnapshotMixin, seed: int, index: int, params: Dict[str, Any],
                    shots: ShotMode = ShotMode.ZERO, with_reasoning: bool = False) -> TaskRecord:
        if shots not in VALID_SHOTS[self.kind]:
            raise ConfigError(f"{self.kind.value} does not support {shots.value}-shot prompts")
        instance = self.build(config, seed, params)
        self.check_gold(instance)
        gold = self.gold(instance)
        if self.gold(self.build(config, seed, params)) != gold:
            raise GoldMismatchError(f"{self.kind.value} record {index} is not reproducible from its seed")

        preamble, question = self.prompt_parts(config, instance)
        metadata = {**self.metadata(instance), **self.config_metadata(config)}
        parts = PromptParts(preamble, question)
        if shots == ShotMode.ONE_WITH_REASONING:
            parts = PromptParts(preamble, question, worked_example=self.worked_example(config))
        elif shots == ShotMode.FEW_NO_REASONING:
            seeds, pairs = self.exemplars(config, seed)
            parts = PromptParts(preamble, question, exemplars=pairs)
            metadata['exemplar_seeds'] = seeds

        return TaskRecord(
            id=f"{self.kind.value}-{index:05d}",
            task=self.kind,
            seed=seed,
            config=config.to_snapshot(),
            params=params,
            shots=shots,
            prompt=render_prompt(parts, shots),
            gold=gold,
            gold_answer=self.gold_answer(instance),
            metadata=metadata,
            reasoning=self.reasoning(instance) if with_reasoning else None,
        )
