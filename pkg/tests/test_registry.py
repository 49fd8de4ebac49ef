from collections import Counter

import pytest

import registry
from constants import NavConfig
from enums import TaskKind
from errors import ConfigError
from registry import build_records, get_available_tasks, get_task, render_gold_answer
from tasks import NavFollowerTask


def test_every_task_kind_is_registered():
    families = get_available_tasks()
    assert set(families) == set(TaskKind)
    assert families[TaskKind.NAV_FOLLOWER] is NavFollowerTask


def test_get_task_returns_fresh_instance():
    family = get_task(TaskKind.OL_EGO)
    assert family.kind == TaskKind.OL_EGO
    assert family is not get_task(TaskKind.OL_EGO)


def test_unregistered_kind(monkeypatch):
    monkeypatch.setattr(registry, 'get_available_tasks', lambda: {})
    with pytest.raises(ConfigError):
        get_task(TaskKind.COMBO)


def test_build_records_ids_and_strata():
    records = build_records(get_task(TaskKind.NAV_FOLLOWER), NavConfig(), 100, 3, progress=False)
    assert [r.id for r in records[:2]] == ['nav_follower-00000', 'nav_follower-00001']
    assert len({r.seed for r in records}) == 100
    assert Counter(r.metadata['path_length'] for r in records) == {1: 25, 2: 25, 3: 25, 4: 25}
    assert all(r.params['num_steps'] == r.metadata['path_length'] for r in records)


def test_empty_batch():
    assert build_records(get_task(TaskKind.CARD2EGO), NavConfig(), 0, 3, progress=False) == []


@pytest.mark.parametrize("kind", list(TaskKind))
def test_render_gold_answer_rebuilds(kind):
    family = get_task(kind)
    record = build_records(family, family.default_config(), 2, 77, progress=False)[1]
    assert render_gold_answer(record) == record.gold_answer
