"""Chat-completion gateway with record/replay fixtures.

Live mode talks to any chat-completions style HTTPS endpoint (base URL and
API key come from configuration, never from fixtures). Record mode performs
the live call and persists (request hash -> response). Replay mode serves
recorded responses only and performs no network I/O, which makes the whole
generation pipeline deterministic and testable offline.

Fixture files contain the request messages and parameters plus the response
text, one JSON file per request hash. API keys are kept out of fixtures and
logs by construction, and a scrub check refuses to write a fixture that
contains the configured key.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import httpx

from .core import DEFAULT_TOL, Layout, Violation, validate_layout
from .grammar import GrammarError, NoRulesFound, parse_layout

log = logging.getLogger(__name__)

SCHEMA_FIXTURE = "roomweaver-fixture/1"
ENV_API_KEY = "ROOMWEAVER_API_KEY"
ENV_BASE_URL = "ROOMWEAVER_BASE_URL"
ENV_FIXTURE_DIR = "ROOMWEAVER_FIXTURE_DIR"
DEFAULT_BASE_URL = "https://api.openai.com/v1"


class GatewayError(Exception):
    """Base class for gateway failures."""


class AuthError(GatewayError):
    pass


class NetworkError(GatewayError):
    pass


class FixtureMiss(GatewayError):
    def __init__(self, request_hash: str):
        self.request_hash = request_hash
        super().__init__(f"no recorded response for request {request_hash}")


class GatewayMode(str, Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str


@dataclass(frozen=True)
class ChatParams:
    model: str = "gpt-4"
    temperature: float = 0.0
    max_tokens: int = 2048


@dataclass(frozen=True)
class ChatExchange:
    messages: tuple[ChatMessage, ...]
    params: ChatParams = field(default_factory=ChatParams)

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages or self.messages[-1].role != "user":
            raise ValueError("an exchange must end with a user message")


def request_payload(exchange: ChatExchange) -> dict:
    return {
        "messages": [{"role": m.role, "content": m.content} for m in exchange.messages],
        "params": {
            "model": exchange.params.model,
            "temperature": exchange.params.temperature,
            "max_tokens": exchange.params.max_tokens,
        },
    }


def request_hash(exchange: ChatExchange) -> str:
    """Stable digest over messages and parameters; key order never matters."""
    canonical = json.dumps(request_payload(exchange), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Gateway:
    """Shareable chat-completion client; see module docstring for the modes."""

    def __init__(
        self,
        mode: GatewayMode = GatewayMode.REPLAY,
        fixture_dir: str | os.PathLike | None = None,
        base_url: str | None = None,
        api_key: str | None = None,
        max_concurrency: int = 4,
        retries: int = 3,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.mode = GatewayMode(mode)
        self.fixture_dir = Path(fixture_dir or os.environ.get(ENV_FIXTURE_DIR, "fixtures"))
        self.base_url = (base_url or os.environ.get(ENV_BASE_URL, DEFAULT_BASE_URL)).rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(ENV_API_KEY)
        self.retries = retries
        self.timeout = timeout
        self.enabled = True
        self._transport = transport
        self._semaphore = threading.Semaphore(max_concurrency)
        self._fixture_lock = threading.Lock()
        self._sleep = time.sleep
        self._client: httpx.Client | None = None
        if self.mode in (GatewayMode.LIVE, GatewayMode.RECORD) and not self.api_key:
            raise AuthError(f"{self.mode.value} mode requires an API key ({ENV_API_KEY})")

    @classmethod
    def disabled(cls) -> "Gateway":
        """A gateway that performs no calls; optional passes skip themselves."""
        gw = cls(mode=GatewayMode.REPLAY, fixture_dir="/nonexistent")
        gw.enabled = False
        return gw

    def _http(self) -> httpx.Client:
        if self._client is None:
            self._client = httpx.Client(
                base_url=self.base_url,
                timeout=self.timeout,
                transport=self._transport,
            )
        return self._client

    def _call_live(self, exchange: ChatExchange) -> str:
        body = {
            "model": exchange.params.model,
            "messages": [
                {"role": m.role, "content": m.content} for m in exchange.messages
            ],
            "temperature": exchange.params.temperature,
            "max_tokens": exchange.params.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for attempt in range(self.retries):
            if attempt:
                self._sleep(0.5 * 2 ** (attempt - 1))
            try:
                with self._semaphore:
                    resp = self._http().post("/chat/completions", json=body, headers=headers)
            except httpx.HTTPError as exc:
                last_error = NetworkError(f"request failed: {exc}")
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"service rejected the API key (HTTP {resp.status_code})")
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = NetworkError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                continue
            if resp.status_code != 200:
                raise GatewayError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise GatewayError(f"malformed completion response: {exc}") from exc
        assert last_error is not None
        raise last_error

    def _fixture_path(self, digest: str) -> Path:
        return self.fixture_dir / f"{digest}.json"

    def _write_fixture(self, exchange: ChatExchange, digest: str, response: str) -> None:
        doc = {
            "schema": SCHEMA_FIXTURE,
            "hash": digest,
            "request": request_payload(exchange),
            "response": response,
        }
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if self.api_key and self.api_key in text:
            raise GatewayError("refusing to write a fixture containing the API key")
        with self._fixture_lock:
            self.fixture_dir.mkdir(parents=True, exist_ok=True)
            self._fixture_path(digest).write_text(text, encoding="utf-8")

    def _read_fixture(self, digest: str) -> str:
        path = self._fixture_path(digest)
        with self._fixture_lock:
            if not path.is_file():
                raise FixtureMiss(digest)
            doc = json.loads(path.read_text(encoding="utf-8"))
        return doc["response"]

    def complete(self, exchange: ChatExchange) -> str:
        """Resolve an exchange to the assistant's reply text, per the mode."""
        if not self.enabled:
            raise GatewayError("gateway is disabled")
        digest = request_hash(exchange)
        log.debug("complete: mode=%s hash=%s messages=%d",
                  self.mode.value, digest[:12], len(exchange.messages))
        if self.mode is GatewayMode.REPLAY:
            return self._read_fixture(digest)
        response = self._call_live(exchange)
        if self.mode is GatewayMode.RECORD:
            self._write_fixture(exchange, digest, response)
        return response

    def close(self) -> None:
        if self._client is not None:
            self._client.close()
            self._client = None


@dataclass(frozen=True)
class GenerationDiagnostics:
    """What happened during one layout generation."""

    attempts: int
    violations: tuple[Violation, ...]

    def to_dict(self) -> dict:
        return {
            "attempts": self.attempts,
            "violations": [
                {
                    "box_index": v.box_index,
                    "kind": v.kind,
                    "detail": v.detail,
                    **({"partner": v.partner} if v.partner is not None else {}),
                }
                for v in self.violations
            ],
        }


def _repair_message(violations: list[Violation]) -> str:
    listed = "; ".join(
        f"box {v.box_index}: {v.detail}" for v in violations
    )
    return (
        f"The layout violates the placement constraints: {listed}. "
        "Produce a corrected complete layout in the same CSS format, "
        "keeping every object."
    )


def generate_layout(
    query_room,
    bundle,
    gateway: Gateway,
    repair_attempts: int = 0,
    tol: float = DEFAULT_TOL,
    params: ChatParams | None = None,
) -> tuple[Layout, GenerationDiagnostics]:
    """Query the LLM with a prompt bundle and parse the reply into a Layout.

    Constraint violations never fail the call: they are returned in the
    diagnostics (and, when ``repair_attempts`` > 0, fed back to the LLM as an
    extra user message before re-querying). Parse failures are retried the
    same way and raised once attempts run out.
    """
    messages = list(bundle.to_messages())
    params = params or ChatParams()
    last_parse_error: GrammarError | None = None
    last_good: tuple[Layout, list[Violation]] | None = None
    attempts = 0
    for attempt in range(repair_attempts + 1):
        attempts += 1
        reply = gateway.complete(ChatExchange(tuple(messages), params))
        try:
            layout = parse_layout(reply, query_room)
        except GrammarError as exc:
            last_parse_error = exc
            log.warning("attempt %d: unparseable reply (%s)", attempts, exc)
            messages.append(ChatMessage("assistant", reply))
            messages.append(
                ChatMessage(
                    "user",
                    f"The reply could not be parsed ({exc}). "
                    "Respond again with CSS layout rules only.",
                )
            )
            continue
        violations = validate_layout(layout, tol)
        last_good = (layout, violations)
        if not violations or attempt == repair_attempts:
            break
        messages.append(ChatMessage("assistant", reply))
        messages.append(ChatMessage("user", _repair_message(violations)))
    if last_good is None:
        assert last_parse_error is not None
        raise last_parse_error
    layout, violations = last_good
    return layout, GenerationDiagnostics(attempts, tuple(violations))
