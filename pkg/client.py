"""Concurrent model client for running a dataset against a completion endpoint."""
from __future__ import annotations

import asyncio
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import httpx
import yaml
from pydantic import BaseModel, Field, ValidationError
from tqdm import tqdm

from dataset import Generation, TaskRecord
from errors import ConfigError

logger = logging.getLogger(__name__)


class RequestTemplate(str, Enum):
    CHAT = "chat"
    COMPLETION = "completion"


class ModelClientConfig(BaseModel):
    endpoint: str
    model: str
    # Name of the environment variable holding the API key; the key itself is never stored.
    credential_env: Optional[str] = None
    template: RequestTemplate = RequestTemplate.CHAT
    temperature: float = 0.0
    max_tokens: int = 1024
    top_p: float = 1.0
    max_concurrency: int = Field(default=8, ge=1)
    timeout: float = Field(default=120.0, gt=0)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> ModelClientConfig:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
            return cls.model_validate(data)
        except (OSError, yaml.YAMLError, ValidationError) as e:
            raise ConfigError(f"cannot load client config {path}: {e}") from e

    def headers(self) -> Dict[str, str]:
        headers = {'Content-Type': 'application/json'}
        if self.credential_env:
            key = os.environ.get(self.credential_env)
            if not key:
                raise ConfigError(f"environment variable {self.credential_env} is not set")
            headers['Authorization'] = f"Bearer {key}"
        return headers

    def payload(self, prompt: str) -> Dict[str, Any]:
        body: Dict[str, Any] = {
            'model': self.model,
            'temperature': self.temperature,
            'max_tokens': self.max_tokens,
            'top_p': self.top_p,
        }
        if self.template == RequestTemplate.CHAT:
            body['messages'] = [{'role': 'user', 'content': prompt}]
        else:
            body['prompt'] = prompt
        return body

    def extract_text(self, data: Dict[str, Any]) -> str:
        choice = data['choices'][0]
        if self.template == RequestTemplate.CHAT:
            return choice['message']['content']
        return choice['text']


async def _request(client: httpx.AsyncClient, config: ModelClientConfig, record: TaskRecord,
                   semaphore: asyncio.Semaphore, progress: tqdm) -> Generation:
    async with semaphore:
        try:
            response = await client.post(config.endpoint, json=config.payload(record.prompt))
            response.raise_for_status()
            generation = Generation(id=record.id, text=config.extract_text(response.json()))
        except (httpx.HTTPError, KeyError, IndexError, TypeError, ValueError) as e:
            logger.warning("request for %s failed: %s", record.id, e)
            generation = Generation(id=record.id, error=f"{type(e).__name__}: {e}")
        finally:
            progress.update(1)
    return generation


async def run_eval(records: Sequence[TaskRecord], config: ModelClientConfig,
                   transport: Optional[httpx.AsyncBaseTransport] = None,
                   show_progress: bool = True) -> List[Generation]:
    """
    Send every record's prompt to the endpoint.

    Failed requests come back as generations with `error` set, so the
    result always holds one generation per record, in dataset order.
    """
    headers = config.headers()
    semaphore = asyncio.Semaphore(config.max_concurrency)
    limits = httpx.Limits(max_connections=config.max_concurrency)
    async with httpx.AsyncClient(headers=headers, timeout=httpx.Timeout(config.timeout),
                                 limits=limits, transport=transport) as client:
        with tqdm(total=len(records), desc="Evaluating", disable=not show_progress) as progress:
            generations = await asyncio.gather(
                *(_request(client, config, record, semaphore, progress) for record in records)
            )
    failed = sum(1 for g in generations if g.failed)
    logger.info("evaluated %d records, %d failed", len(generations), failed)
    return list(generations)


def evaluate(records: Sequence[TaskRecord], config: ModelClientConfig,
             transport: Optional[httpx.AsyncBaseTransport] = None,
             show_progress: bool = True) -> List[Generation]:
    return asyncio.run(run_eval(records, config, transport, show_progress))
