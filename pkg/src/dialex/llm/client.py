"""HTTP client for chat-completion model endpoints.

Completions go through the OpenAI-compatible ``/v1/chat/completions``
route: a single user message, temperature 0, and a small output budget,
so responses stay short and deterministic enough to parse.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import requests

from dialex.errors import ConfigError, ProtocolError, TransportError

# Test seam: monkeypatch to avoid real sleeps when exercising retries.
_sleep = time.sleep


@dataclass(frozen=True)
class ModelEndpointConfig:
    """Where and how to reach one model.

    ``api_key_env`` names an environment variable; the key itself is read
    at request time and never stored. ``None`` means no auth header.
    """

    base_url: str
    model_name: str
    api_key_env: str | None = None
    temperature: float = 0.0
    max_output_tokens: int = 20
    timeout: float = 30.0
    retries: int = 3
    backoff: float = 0.5

    def __post_init__(self) -> None:
        if not self.base_url:
            raise ConfigError("base_url must be non-empty")
        if not self.model_name:
            raise ConfigError("model_name must be non-empty")
        if self.temperature != 0.0:
            raise ConfigError("temperature must be 0 for reproducible runs")
        if self.max_output_tokens < 1:
            raise ConfigError("max_output_tokens must be at least 1")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.retries < 0:
            raise ConfigError("retries must be non-negative")
        if self.backoff < 0:
            raise ConfigError("backoff must be non-negative")


def _headers(endpoint: ModelEndpointConfig) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    if endpoint.api_key_env is not None:
        key = os.environ.get(endpoint.api_key_env)
        if not key:
            raise ConfigError(
                f"environment variable {endpoint.api_key_env} is not set"
            )
        headers["Authorization"] = f"Bearer {key}"
    return headers


def _extract_content(payload: object) -> str:
    try:
        choices = payload["choices"]  # type: ignore[index]
        message = choices[0]["message"]
        content = message["content"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ProtocolError(f"malformed completion body: {exc!r}") from exc
    if not isinstance(content, str):
        raise ProtocolError("completion content is not a string")
    return content


def complete(endpoint: ModelEndpointConfig, prompt: str) -> str:
    """Request one completion and return the raw content verbatim.

    Retries transient failures (connection errors, timeouts, HTTP 5xx
    and 429) with exponential backoff; other HTTP errors fail fast.
    """
    url = endpoint.base_url.rstrip("/") + "/v1/chat/completions"
    body = {
        "model": endpoint.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": 0,
        "max_tokens": endpoint.max_output_tokens,
    }
    headers = _headers(endpoint)
    attempts = endpoint.retries + 1
    last_error = ""
    for attempt in range(attempts):
        if attempt > 0:
            _sleep(endpoint.backoff * (2 ** (attempt - 1)))
        try:
            response = requests.post(
                url, json=body, headers=headers, timeout=endpoint.timeout
            )
        except requests.RequestException as exc:
            last_error = f"request failed: {exc}"
            continue
        if response.status_code == 200:
            try:
                payload = response.json()
            except ValueError as exc:
                raise ProtocolError(f"response is not JSON: {exc}") from exc
            return _extract_content(payload)
        if response.status_code >= 500 or response.status_code == 429:
            last_error = f"HTTP {response.status_code}"
            continue
        raise TransportError(
            f"HTTP {response.status_code} from {url}: {response.text[:200]}"
        )
    raise TransportError(
        f"giving up on {url} after {attempts} attempts ({last_error})"
    )
