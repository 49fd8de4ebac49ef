import json

import httpx
import pytest

from client import ModelClientConfig, RequestTemplate, evaluate
from dataset import TaskRecord
from enums import TaskKind
from errors import ConfigError


def make_records(count):
    return [
        TaskRecord(id=f"ol_ego-{i:05d}", task=TaskKind.OL_EGO, seed=i, config={}, prompt=f"prompt {i}",
                   gold={'relations': ['left']}, gold_answer="[ANS] to my left [/ANS]")
        for i in range(count)
    ]


def chat_handler(request):
    body = json.loads(request.content)
    prompt = body['messages'][0]['content']
    if prompt == 'prompt 3':
        return httpx.Response(500, json={'error': 'overloaded'})
    return httpx.Response(200, json={'choices': [{'message': {'content': f"echo {prompt}"}}]})


def test_results_keep_dataset_order_and_mark_failures():
    config = ModelClientConfig(endpoint='https://models.test/v1/chat', model='m', max_concurrency=2)
    generations = evaluate(make_records(6), config, transport=httpx.MockTransport(chat_handler),
                           show_progress=False)
    assert [g.id for g in generations] == [f"ol_ego-{i:05d}" for i in range(6)]
    assert generations[0].text == "echo prompt 0"
    assert generations[3].failed
    assert generations[3].text is None
    assert sum(g.failed for g in generations) == 1


def test_completion_template():
    def handler(request):
        body = json.loads(request.content)
        assert 'messages' not in body
        assert body['temperature'] == 0.0
        return httpx.Response(200, json={'choices': [{'text': body['prompt'].upper()}]})

    config = ModelClientConfig(endpoint='https://models.test/v1/completions', model='m',
                               template=RequestTemplate.COMPLETION)
    generations = evaluate(make_records(2), config, transport=httpx.MockTransport(handler), show_progress=False)
    assert [g.text for g in generations] == ["PROMPT 0", "PROMPT 1"]


def test_malformed_body_is_an_error_marker():
    config = ModelClientConfig(endpoint='https://models.test/v1/chat', model='m')
    transport = httpx.MockTransport(lambda request: httpx.Response(200, json={'choices': []}))
    generations = evaluate(make_records(1), config, transport=transport, show_progress=False)
    assert generations[0].failed
    assert generations[0].error.startswith("IndexError")


def test_credential_header(monkeypatch):
    monkeypatch.setenv('BENCH_TEST_KEY', 'secret')
    seen = {}

    def handler(request):
        seen['auth'] = request.headers['authorization']
        return httpx.Response(200, json={'choices': [{'message': {'content': 'ok'}}]})

    config = ModelClientConfig(endpoint='https://models.test/v1/chat', model='m', credential_env='BENCH_TEST_KEY')
    evaluate(make_records(1), config, transport=httpx.MockTransport(handler), show_progress=False)
    assert seen['auth'] == 'Bearer secret'


def test_missing_credential(monkeypatch):
    monkeypatch.delenv('BENCH_TEST_KEY', raising=False)
    config = ModelClientConfig(endpoint='https://models.test/v1/chat', model='m', credential_env='BENCH_TEST_KEY')
    with pytest.raises(ConfigError):
        evaluate(make_records(1), config, transport=httpx.MockTransport(chat_handler), show_progress=False)


def test_config_from_yaml(tmp_path):
    path = tmp_path / 'client.yaml'
    path.write_text("endpoint: https://models.test/v1/chat\nmodel: tiny\nmax_concurrency: 4\ntemperature: 0.5\n")
    config = ModelClientConfig.from_yaml(path)
    assert (config.model, config.max_concurrency, config.temperature) == ('tiny', 4, 0.5)
    assert config.template == RequestTemplate.CHAT


@pytest.mark.parametrize("text", ["model: tiny\n", "endpoint: x\nmodel: m\nmax_concurrency: 0\n", "endpoint: [\n"])
def test_bad_yaml_config(tmp_path, text):
    path = tmp_path / 'client.yaml'
    path.write_text(text)
    with pytest.raises(ConfigError):
        ModelClientConfig.from_yaml(path)


def test_missing_yaml_file(tmp_path):
    with pytest.raises(ConfigError):
        ModelClientConfig.from_yaml(tmp_path / 'absent.yaml')
