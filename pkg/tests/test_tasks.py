import pytest

from constants import NavConfig, OLConfig, StructureConfig
from enums import Dimensionality, FrameMode, HeadingPolicy, Representation, ShotMode, TaskKind, ViewMode
from errors import ConfigError
from registry import build_records, get_task
from structures import serialize

NAV_SETTINGS = [NavConfig(mode=mode, dimensionality=dim) for mode in FrameMode for dim in Dimensionality]


def perfect(family, scores):
    for metric in family.metrics:
        if metric == 'distance':
            assert scores[metric] == 0.0
        else:
            assert scores[metric] == (1.0 if metric == 'accuracy' else 100.0)


def assert_self_scoring(kind, config, size=30, seed=0):
    family = get_task(kind)
    records = build_records(family, config, size, seed, progress=False)
    for record in records:
        perfect(family, family.score(record.gold_answer, record.gold, family.load_config(record.config)))
    return records


class TestSelfScoring:
    @pytest.mark.parametrize("config", NAV_SETTINGS)
    def test_follower(self, config):
        assert_self_scoring(TaskKind.NAV_FOLLOWER, config)

    @pytest.mark.parametrize("config", NAV_SETTINGS)
    def test_instructor(self, config):
        assert_self_scoring(TaskKind.NAV_INSTRUCTOR, config)

    def test_card2ego(self):
        assert_self_scoring(TaskKind.CARD2EGO, NavConfig())

    def test_ol_ego(self):
        assert_self_scoring(TaskKind.OL_EGO, OLConfig())

    @pytest.mark.parametrize("policy", [HeadingPolicy.FIXED_PLUS_Y, HeadingPolicy.FACE_REFERENCE])
    def test_ol_allo(self, policy):
        assert_self_scoring(TaskKind.OL_ALLO, OLConfig(mode=ViewMode.ALLOCENTRIC, heading_policy=policy))

    @pytest.mark.parametrize("representation", list(Representation))
    def test_struct_desc(self, representation):
        records = assert_self_scoring(TaskKind.STRUCT_DESC, StructureConfig(representation=representation))
        assert {r.metadata['representation'] for r in records} == {representation.value}

    def test_combo(self):
        family = get_task(TaskKind.COMBO)
        assert_self_scoring(TaskKind.COMBO, family.default_config(), size=20)


class TestScoring:
    def test_follower_wrong_answer(self):
        family = get_task(TaskKind.NAV_FOLLOWER)
        config = NavConfig(dimensionality=Dimensionality.THREE_D)
        scores = family.score("I end at [ANS] (7, 0, -10) [/ANS]", {'final': [7, 0, 10]}, config)
        assert scores == {'accuracy': 0.0, 'distance': 20.0}

    def test_follower_unparseable(self):
        family = get_task(TaskKind.NAV_FOLLOWER)
        scores = family.score("I am lost", {'final': [20, 20, 20]}, NavConfig(dimensionality=Dimensionality.THREE_D))
        assert scores['accuracy'] == 0.0
        assert scores['distance'] == pytest.approx(34.64, abs=0.01)

    def test_follower_2d_rejects_third_component(self):
        family = get_task(TaskKind.NAV_FOLLOWER)
        scores = family.score("[ANS] (1, 2, 5) [/ANS]", {'final': [1, 2]}, NavConfig())
        assert scores['accuracy'] == 0.0
        assert scores['distance'] == pytest.approx(5 ** 0.5)

    def test_instructor_synonyms_match(self):
        family = get_task(TaskKind.NAV_INSTRUCTOR)
        gold = {'steps': ['right 3', 'left 1', 'backward 2']}
        scores = family.score("[ANS] right 3, left 1, back 2 [/ANS]", gold, NavConfig())
        assert scores == {'accuracy': 1.0, 'distance': 0.0}

    def test_ol_partial_answer(self):
        family = get_task(TaskKind.OL_ALLO)
        scores = family.score("It is [ANS] in front of [/ANS] it", {'relations': ['below', 'front']},
                              family.default_config())
        assert scores == {'spatial_overlap': 50.0}


class TestPrompts:
    def test_zero_shot(self):
        family = get_task(TaskKind.NAV_FOLLOWER)
        record = build_records(family, NavConfig(), 1, 0, progress=False)[0]
        assert "Let's start with an example" not in record.prompt
        assert record.prompt.endswith("Where are you now?")

    @pytest.mark.parametrize("kind", [k for k in TaskKind if k != TaskKind.COMBO])
    def test_one_shot_has_worked_example(self, kind):
        family = get_task(kind)
        record = build_records(family, family.default_config(), 1, 0, ShotMode.ONE_WITH_REASONING,
                               progress=False)[0]
        assert "Let's start with an example" in record.prompt
        assert record.prompt.count("[ANS]") >= 2

    def test_one_shot_follower_example(self):
        family = get_task(TaskKind.NAV_FOLLOWER)
        config = NavConfig(dimensionality=Dimensionality.THREE_D)
        _, worked = family.worked_example(config)
        assert worked.endswith("[ANS] (-1, -2, -2) [/ANS]")

    def test_one_shot_instructor_example(self):
        family = get_task(TaskKind.NAV_INSTRUCTOR)
        _, worked = family.worked_example(NavConfig())
        assert worked.endswith("[ANS] right 3, left 1, backward 2 [/ANS].")

    def test_worked_examples_for_localization(self):
        _, ego = get_task(TaskKind.OL_EGO).worked_example(OLConfig())
        assert ego.endswith("[ANS] in front of me and to my right [/ANS]")
        allo = get_task(TaskKind.OL_ALLO)
        _, answer = allo.worked_example(allo.default_config())
        assert answer.endswith("[ANS] in front of and below [/ANS] the red block.")

    @pytest.mark.parametrize("kind", [k for k in TaskKind if k != TaskKind.COMBO])
    def test_few_shot_exemplars(self, kind):
        family = get_task(kind)
        record = build_records(family, family.default_config(), 1, 5, ShotMode.FEW_NO_REASONING,
                               progress=False)[0]
        seeds = record.metadata['exemplar_seeds']
        assert len(seeds) == 3
        assert all(s >= 2**32 for s in seeds)
        assert "Here are some examples:" in record.prompt
        assert record.prompt.count("[ANS]") >= 4

    @pytest.mark.parametrize("kind,blocks", [
        (TaskKind.OL_EGO, lambda scene: scene.listing),
        (TaskKind.OL_ALLO, lambda scene: scene.listing),
        (TaskKind.COMBO, lambda scene: scene.blocks),
    ])
    def test_block_lists_use_text_representation(self, kind, blocks):
        family = get_task(kind)
        for record in build_records(family, family.default_config(), 5, 17, progress=False):
            listing = serialize(list(blocks(family.rebuild(record))), Representation.TEXT)
            assert listing in record.prompt
            assert " an " not in listing

    def test_combo_is_zero_shot_only(self):
        family = get_task(TaskKind.COMBO)
        with pytest.raises(ConfigError):
            build_records(family, family.default_config(), 1, 0, ShotMode.FEW_NO_REASONING, progress=False)
        assert family.worked_example(family.default_config()) is None

    @pytest.mark.parametrize("kind", [k for k in TaskKind if k != TaskKind.COMBO])
    def test_reasoning_ends_with_gold_answer(self, kind):
        family = get_task(kind)
        record = build_records(family, family.default_config(), 3, 8, with_reasoning=True, progress=False)[0]
        assert record.reasoning.endswith(record.gold_answer)


class TestRebuild:
    @pytest.mark.parametrize("kind", list(TaskKind))
    def test_gold_rebuilds_from_seed(self, kind):
        family = get_task(kind)
        for record in build_records(family, family.default_config(), 6, 13, progress=False):
            assert family.gold(family.rebuild(record)) == record.gold

    def test_same_seed_same_records(self):
        family = get_task(TaskKind.STRUCT_DESC)
        first = build_records(family, StructureConfig(), 9, 21, progress=False)
        second = build_records(family, StructureConfig(), 9, 21, progress=False)
        assert [r.model_dump() for r in first] == [r.model_dump() for r in second]

    def test_mode_mismatch(self):
        family = get_task(TaskKind.OL_EGO)
        config = OLConfig(mode=ViewMode.ALLOCENTRIC, heading_policy=HeadingPolicy.FIXED_PLUS_Y)
        with pytest.raises(ConfigError):
            family.build(config, 1, {})
