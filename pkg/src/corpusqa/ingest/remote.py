"""Generic paginated-JSON fetcher for live exports.

Stands in for vendor-specific source APIs: any endpoint that serves pages
of ``{"items": [...], "next": "<cursor>"}`` can feed the ingest pipeline.
"""

import json
import time
from dataclasses import dataclass

import httpx

from corpusqa.errors import AuthError, ProtocolError, TransportError

DEFAULT_TIMEOUT = 10.0


@dataclass(frozen=True)
class SourceSpec:
    base_url: str
    auth_token: str = ""
    kind: str = "messages"  # messages | replies | pages


def _get_page(client: httpx.Client, spec: SourceSpec, cursor, *, max_attempts, backoff_start, sleep):
    params = {"cursor": cursor} if cursor else None
    headers = {"Authorization": f"Bearer {spec.auth_token}"} if spec.auth_token else None
    last_exc = None
    for attempt in range(1, max_attempts + 1):
        try:
            resp = client.get(spec.base_url, params=params, headers=headers)
        except httpx.HTTPError as exc:
            last_exc = exc
            if attempt < max_attempts:
                sleep(backoff_start * 2 ** (attempt - 1))
            continue
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials (HTTP {resp.status_code})")
        if resp.status_code >= 500:
            last_exc = TransportError(f"HTTP {resp.status_code}", attempts=attempt)
            if attempt < max_attempts:
                sleep(backoff_start * 2 ** (attempt - 1))
            continue
        if resp.status_code != 200:
            raise ProtocolError(f"unexpected status {resp.status_code}")
        try:
            page = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"response is not valid JSON: {exc}") from exc
        if not isinstance(page, dict) or not isinstance(page.get("items"), list):
            raise ProtocolError("page is missing an 'items' array")
        return page
    raise TransportError(f"fetch failed after {max_attempts} attempts: {last_exc}", attempts=max_attempts)


def fetch_remote(
    spec: SourceSpec,
    *,
    max_attempts: int = 3,
    backoff_start: float = 0.5,
    timeout: float = DEFAULT_TIMEOUT,
    sleep=time.sleep,
) -> bytes:
    """Follow the ``next`` cursor until absent; return all items as one JSON export."""
    items: list = []
    cursor = None
    with httpx.Client(timeout=timeout) as client:
        while True:
            page = _get_page(
                client,
                spec,
                cursor,
                max_attempts=max_attempts,
                backoff_start=backoff_start,
                sleep=sleep,
            )
            items.extend(page["items"])
            cursor = page.get("next")
            if not cursor:
                break
    return json.dumps(items).encode("utf-8")
