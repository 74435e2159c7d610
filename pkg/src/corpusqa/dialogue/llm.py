"""Language-model backends behind one completion interface.

The HTTP client speaks a minimal completions contract. The scripted client
serves canned responses from substring-match rules; it exists so every
pipeline path can run deterministically with no model server at all.
"""

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from corpusqa.errors import ProtocolError, TransportError


@dataclass(frozen=True)
class LlmEndpointSpec:
    base_url: str
    model_name: str
    temperature: float = 0.0
    max_tokens: int = 512
    timeout: float = 60.0
    prompt_dialect: str = "llama2_inst"  # llama2_inst | plain
    auth_token: str = ""
    max_retries: int = 3
    backoff_start: float = 0.5
    max_concurrent: int = 4

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.prompt_dialect not in ("llama2_inst", "plain"):
            raise ValueError(f"unknown prompt dialect {self.prompt_dialect!r}")


class LlmClient(Protocol):
    dialect: str

    def complete(self, prompt: str) -> str: ...


class HttpLlmClient:
    """POST {base_url}/completions with {model, prompt, temperature, max_tokens},
    expecting {"text": ...} back. Retries transport failures with exponential
    backoff; concurrent requests are capped by the endpoint spec."""

    def __init__(self, spec: LlmEndpointSpec, sleep=time.sleep):
        self.spec = spec
        self.dialect = spec.prompt_dialect
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(spec.max_concurrent)

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.spec.model_name,
            "prompt": prompt,
            "temperature": self.spec.temperature,
            "max_tokens": self.spec.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.spec.auth_token}"} if self.spec.auth_token else None
        url = f"{self.spec.base_url.rstrip('/')}/completions"
        last_exc = None
        with self._slots:
            for attempt in range(1, self.spec.max_retries + 1):
                try:
                    resp = httpx.post(url, json=payload, headers=headers, timeout=self.spec.timeout)
                except httpx.HTTPError as exc:
                    last_exc = exc
                    if attempt < self.spec.max_retries:
                        self._sleep(self.spec.backoff_start * 2 ** (attempt - 1))
                    continue
                if resp.status_code >= 500:
                    last_exc = TransportError(f"HTTP {resp.status_code}", attempts=attempt)
                    if attempt < self.spec.max_retries:
                        self._sleep(self.spec.backoff_start * 2 ** (attempt - 1))
                    continue
                if resp.status_code != 200:
                    raise ProtocolError(f"completion endpoint returned {resp.status_code}")
                try:
                    data = resp.json()
                    return str(data["text"])
                except (ValueError, KeyError) as exc:
                    raise ProtocolError(f"malformed completion response: {exc}") from exc
        raise TransportError(
            f"completion failed after {self.spec.max_retries} attempts: {last_exc}",
            attempts=self.spec.max_retries,
        )


class ScriptedLlm:
    """Rule-driven stand-in: first rule whose ``match`` substring occurs in
    the prompt wins; otherwise the default response is returned."""

    def __init__(self, rules: list[tuple[str, str]], default: str = "", dialect: str = "plain"):
        self.rules = list(rules)
        self.default = default
        self.dialect = dialect
        self.calls: list[str] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedLlm":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        rules = [(rule["match"], rule["response"]) for rule in data.get("rules", [])]
        return cls(rules, default=data.get("default", ""))

    def complete(self, prompt: str) -> str:
        self.calls.append(prompt)
        for match, response in self.rules:
            if match in prompt:
                return response
        return self.default
