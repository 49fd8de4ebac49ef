"""
Seed derivation for deterministic dataset generation.
"""
from typing import List

import numpy as np


def record_seeds(batch_seed: int, size: int) -> List[int]:
    """
    Derive one independent seed per record of a batch.

    Args:
        batch_seed: Seed given on the command line
        size: Number of records in the batch

    Returns:
        Per-record seeds; a record is rebuilt from its own seed alone
    """
    if size <= 0:
        return []
    state = np.random.SeedSequence(batch_seed).generate_state(size, dtype=np.uint32)
    return [int(s) for s in state]


def make_rng(seed: int) -> np.random.Generator:
    """
    Create the generator every sampler draws from.

    Args:
        seed: Record or batch seed

    Returns:
        Seeded numpy Generator
    """
    return np.random.default_rng(seed)


def exemplar_seeds(offset: int, record_seed: int, count: int) -> List[int]:
    """
    Seeds for few-shot exemplars, drawn from a range disjoint from dataset seeds.

    Args:
        offset: Start of the exemplar seed range
        record_seed: Seed of the record the exemplars are attached to
        count: Number of exemplars

    Returns:
        Exemplar seeds, each at or above `offset`
    """
    rng = make_rng((offset, record_seed))
    return [offset + int(v) for v in rng.integers(0, 2**31, size=count)]
