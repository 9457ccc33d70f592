"""HTTP client that fetches emotion scores and persists them as a store file.

The remote service's schema is configurable (``field_paths``) because only
the request shape — ``POST {"text": ...}`` — is fixed. The client runs one
request at a time, honours a requests-per-second budget, retries transient
failures with exponential backoff, and flushes partial results so an
interrupted run can resume fetching only the missing keys.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import requests

from .corpus import Segment
from .emotion import (
    EMOTION_DIMENSIONS,
    EmotionScores,
    PrecomputedEmotionStore,
    load_precomputed,
)
from .errors import FetchError

logger = logging.getLogger(__name__)

_BACKOFF_BASE_SECONDS = 0.5


def _identity_fields() -> dict[str, str]:
    return {name: name for name in EMOTION_DIMENSIONS}


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    timeout_ms: int = 10_000
    max_retries: int = 3
    requests_per_second: float = 4.0
    field_paths: Mapping[str, str] = field(default_factory=_identity_fields)
    bearer_token: str | None = None

    def __post_init__(self) -> None:
        if not self.url:
            raise FetchError("endpoint url must be non-empty")
        if self.timeout_ms <= 0:
            raise FetchError(f"timeout_ms must be > 0, got {self.timeout_ms}")
        if self.max_retries < 0:
            raise FetchError(f"max_retries must be >= 0, got {self.max_retries}")
        if not self.requests_per_second > 0:
            raise FetchError(
                f"requests_per_second must be > 0, got {self.requests_per_second}"
            )
        missing = [d for d in EMOTION_DIMENSIONS if d not in self.field_paths]
        if missing:
            raise FetchError(f"field_paths missing entries for: {', '.join(missing)}")


def _parse_scores(payload: object, cfg: EndpointConfig) -> EmotionScores:
    if not isinstance(payload, dict):
        raise FetchError(f"response is not a JSON object: {payload!r}")
    values = []
    for name in EMOTION_DIMENSIONS:
        key = cfg.field_paths[name]
        if key not in payload:
            raise FetchError(f"response missing field {key!r}")
        try:
            value = float(payload[key])
        except (TypeError, ValueError):
            raise FetchError(f"field {key!r} is not a number: {payload[key]!r}") from None
        if math.isnan(value) or not 0.0 <= value <= 1.0:
            raise FetchError(f"field {key!r} out of range [0,1]: {value}")
        values.append(value)
    return EmotionScores(*values)


def fetch_scores(
    segments: Sequence[Segment],
    cfg: EndpointConfig,
    store_path: str | Path,
    *,
    sidecar_path: str | Path | None = None,
    _sleep: Callable[[float], None] = time.sleep,
    _clock: Callable[[], float] = time.monotonic,
) -> PrecomputedEmotionStore:
    """Fetch scores for every segment not already present in the store file.

    Successful results are flushed to ``store_path`` as they arrive; keys
    that still fail after retries are written to the sidecar (one key per
    line) instead of aborting the run.
    """
    store_path = Path(store_path)
    if sidecar_path is None:
        sidecar_path = store_path.with_name(store_path.name + ".failed")
    sidecar_path = Path(sidecar_path)

    store = load_precomputed(store_path) if store_path.exists() else PrecomputedEmotionStore()
    pending: list[Segment] = []
    seen = set(store.keys())
    for segment in segments:
        if segment.key not in seen:
            seen.add(segment.key)
            pending.append(segment)

    headers = {"Content-Type": "application/json"}
    if cfg.bearer_token:
        headers["Authorization"] = f"Bearer {cfg.bearer_token}"
    min_interval = 1.0 / cfg.requests_per_second
    last_request: float | None = None
    failed: list[str] = []

    with requests.Session() as session:
        for segment in pending:
            delay = _BACKOFF_BASE_SECONDS
            failure: str | None = None
            scores: EmotionScores | None = None
            for attempt in range(cfg.max_retries + 1):
                if attempt:
                    _sleep(delay)
                    delay *= 2.0
                if last_request is not None:
                    wait = last_request + min_interval - _clock()
                    if wait > 0:
                        _sleep(wait)
                last_request = _clock()
                try:
                    response = session.post(
                        cfg.url,
                        json={"text": segment.surface},
                        headers=headers,
                        timeout=cfg.timeout_ms / 1000.0,
                    )
                except requests.RequestException as exc:
                    failure = f"request failed: {exc}"
                    continue
                if response.status_code < 200 or response.status_code >= 300:
                    failure = f"HTTP {response.status_code}"
                    continue
                try:
                    scores = _parse_scores(response.json(), cfg)
                except (ValueError, FetchError) as exc:
                    # A well-formed HTTP reply with a bad body will not get
                    # better on retry; fail the key immediately.
                    failure = str(exc)
                    break
                failure = None
                break
            if scores is None:
                logger.warning("fetch failed for %s: %s", segment.key, failure)
                failed.append(segment.key)
                continue
            store.add(segment.key, scores)
            store.export(store_path)

    sidecar_path.write_text(
        "".join(f"{key}\n" for key in failed), encoding="utf-8", newline="\n"
    )
    if not store_path.exists():
        store.export(store_path)
    return store
