"""LLM access: one gateway, two backends.

The live backend speaks the common chat-completions + embeddings wire
shape over HTTP (httpx, injectable transport). The replay backend serves
previously recorded exchanges from disk and is what every test and rerun
uses; it never touches a network.

Transcripts are matched by (request_tag, digest) where the digest covers
(model_id, preamble, user_message, temperature). The tag exists because
sampled generation legitimately repeats the same request text (Step 4
runs the same prompt several times at temperature 1); the tag's
generation suffix keeps those exchanges distinct. Changing a prompt
changes the digest, so stale fixtures fail loudly instead of replaying
the wrong bytes.

Store layout: one JSON file per session under the store directory,
named after the tag's leading "session" segment (the part before the
first ":"). Schema:

    {"format": "llm-transcripts", "version": 1,
     "chats": [{"tag", "digest", "timestamp",
                "request": {"model_id", "preamble", "user_message",
                             "temperature", "max_output_tokens"},
                "response": {"text", "prompt_tokens", "completion_tokens",
                              "latency"}}],
     "embeddings": [{"digest", "model_id", "text", "vector"}]}

Embeddings are content-addressed only (model_id + text), since embedding
endpoints are deterministic for our purposes.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Protocol, Sequence

import httpx

from .config import GatewayConfig
from .errors import (
    DataFileError,
    MissingTranscriptError,
    ProviderError,
    TransportError,
    WorkbenchError,
)

STORE_FORMAT = "llm-transcripts"
STORE_VERSION = 1


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    user_message: str
    temperature: float
    preamble: str = ""
    max_output_tokens: Optional[int] = None
    request_tag: str = "untagged"

    def __post_init__(self):
        if not self.user_message.strip():
            raise WorkbenchError("chat request message must be non-empty")
        if not (0.0 <= self.temperature <= 2.0):
            raise WorkbenchError(
                f"temperature {self.temperature} outside the allowed range 0..2"
            )

    def digest(self) -> str:
        payload = json.dumps(
            {
                "model_id": self.model_id,
                "preamble": self.preamble,
                "user_message": self.user_message,
                "temperature": f"{self.temperature:.6f}",
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def session_segment(self) -> str:
        return self.request_tag.split(":", 1)[0] or "untagged"


@dataclass(frozen=True)
class ChatResponse:
    text: str
    model_id: str
    prompt_tokens: int
    completion_tokens: int
    latency: float
    transcript_id: str


@dataclass(frozen=True)
class EmbeddingBatch:
    inputs: tuple[str, ...]
    vectors: tuple[tuple[float, ...], ...]
    model_id: str

    def __post_init__(self):
        if len(self.inputs) != len(self.vectors):
            raise WorkbenchError("embedding batch inputs and vectors differ in length")
        dims = {len(v) for v in self.vectors}
        if len(dims) > 1:
            raise WorkbenchError("embedding vectors disagree in dimension")

    @property
    def dimension(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0


def embedding_digest(model_id: str, text: str) -> str:
    payload = json.dumps(
        {"model_id": model_id, "text": text}, sort_keys=True, ensure_ascii=False
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _transcript_id(tag: str, digest: str) -> str:
    return hashlib.sha256(f"{tag}\n{digest}".encode("utf-8")).hexdigest()[:16]


class Backend(Protocol):
    def chat(self, request: ChatRequest) -> ChatResponse: ...

    def embed(self, texts: Sequence[str], model_id: str) -> EmbeddingBatch: ...


# -- transcript store --------------------------------------------------------


class TranscriptStore:
    """On-disk chat/embedding exchanges, grouped one file per session."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._lock = threading.Lock()

    def _session_path(self, session: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in session)
        return self.root / f"{safe or 'untagged'}.json"

    def _read_doc(self, path: Path) -> dict:
        if not path.exists():
            return {
                "format": STORE_FORMAT,
                "version": STORE_VERSION,
                "chats": [],
                "embeddings": [],
            }
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFileError(f"transcript file {path} unreadable: {exc}") from exc
        if doc.get("format") != STORE_FORMAT:
            raise DataFileError(
                f"transcript file {path} has format {doc.get('format')!r}"
            )
        return doc

    def append_chat(
        self,
        request: ChatRequest,
        response: ChatResponse,
        timestamp: float,
    ) -> None:
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            path = self._session_path(request.session_segment())
            doc = self._read_doc(path)
            doc["chats"].append(
                {
                    "tag": request.request_tag,
                    "digest": request.digest(),
                    "timestamp": timestamp,
                    "request": {
                        "model_id": request.model_id,
                        "preamble": request.preamble,
                        "user_message": request.user_message,
                        "temperature": request.temperature,
                        "max_output_tokens": request.max_output_tokens,
                    },
                    "response": {
                        "text": response.text,
                        "prompt_tokens": response.prompt_tokens,
                        "completion_tokens": response.completion_tokens,
                        "latency": response.latency,
                    },
                }
            )
            self._write_doc(path, doc)

    def append_embeddings(
        self, model_id: str, texts: Sequence[str], vectors, session: str
    ) -> None:
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            path = self._session_path(session)
            doc = self._read_doc(path)
            known = {e["digest"] for e in doc["embeddings"]}
            for text, vector in zip(texts, vectors):
                digest = embedding_digest(model_id, text)
                if digest in known:
                    continue
                known.add(digest)
                doc["embeddings"].append(
                    {
                        "digest": digest,
                        "model_id": model_id,
                        "text": text,
                        "vector": list(vector),
                    }
                )
            self._write_doc(path, doc)

    @staticmethod
    def _write_doc(path: Path, doc: dict) -> None:
        path.write_text(
            json.dumps(doc, indent=1, ensure_ascii=False, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    def load_all(self) -> tuple[dict, dict]:
        """(chat index keyed by (tag, digest), embedding index by digest)."""
        chats: dict[tuple[str, str], dict] = {}
        embeddings: dict[str, dict] = {}
        if not self.root.exists():
            raise DataFileError(f"replay store {self.root} does not exist")
        for path in sorted(self.root.glob("*.json")):
            doc = self._read_doc(path)
            for entry in doc.get("chats", []):
                chats[(entry["tag"], entry["digest"])] = entry
            for entry in doc.get("embeddings", []):
                embeddings[entry["digest"]] = entry
        return chats, embeddings


# -- backends ----------------------------------------------------------------


class ReplayBackend:
    """Serves recorded exchanges; any unrecorded request is an error."""

    def __init__(self, store: TranscriptStore | Path):
        if not isinstance(store, TranscriptStore):
            store = TranscriptStore(Path(store))
        self._chats, self._embeddings = store.load_all()

    def chat(self, request: ChatRequest) -> ChatResponse:
        entry = self._chats.get((request.request_tag, request.digest()))
        if entry is None:
            raise MissingTranscriptError(request.digest(), request.request_tag)
        resp = entry["response"]
        return ChatResponse(
            text=resp["text"],
            model_id=entry["request"]["model_id"],
            prompt_tokens=resp["prompt_tokens"],
            completion_tokens=resp["completion_tokens"],
            latency=0.0,
            transcript_id=_transcript_id(entry["tag"], entry["digest"]),
        )

    def embed(self, texts: Sequence[str], model_id: str) -> EmbeddingBatch:
        vectors = []
        for text in texts:
            digest = embedding_digest(model_id, text)
            entry = self._embeddings.get(digest)
            if entry is None:
                raise MissingTranscriptError(digest, f"embedding:{text[:40]!r}")
            vectors.append(tuple(entry["vector"]))
        return EmbeddingBatch(tuple(texts), tuple(vectors), model_id)


class LiveBackend:
    """Chat-completions + embeddings over HTTP."""

    def __init__(
        self,
        config: GatewayConfig,
        transport: httpx.BaseTransport | None = None,
    ):
        self.config = config
        headers = {}
        key = config.api_key()
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._client = httpx.Client(
            base_url=config.base_url,
            headers=headers,
            timeout=config.timeout_seconds,
            transport=transport,
        )

    def chat(self, request: ChatRequest) -> ChatResponse:
        messages = []
        if request.preamble:
            messages.append({"role": "system", "content": request.preamble})
        messages.append({"role": "user", "content": request.user_message})
        payload: dict = {
            "model": request.model_id,
            "messages": messages,
            "temperature": request.temperature,
        }
        if request.max_output_tokens is not None:
            payload["max_tokens"] = request.max_output_tokens
        started = time.monotonic()
        data = self._post("/chat/completions", payload)
        latency = time.monotonic() - started
        try:
            text = data["choices"][0]["message"]["content"]
            usage = data.get("usage", {})
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(200, f"malformed chat payload: {exc}") from exc
        return ChatResponse(
            text=text,
            model_id=request.model_id,
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency=latency,
            transcript_id=_transcript_id(request.request_tag, request.digest()),
        )

    def embed(self, texts: Sequence[str], model_id: str) -> EmbeddingBatch:
        data = self._post("/embeddings", {"model": model_id, "input": list(texts)})
        try:
            rows = sorted(data["data"], key=lambda r: r["index"])
            vectors = tuple(tuple(float(x) for x in r["embedding"]) for r in rows)
        except (KeyError, TypeError) as exc:
            raise ProviderError(200, f"malformed embedding payload: {exc}") from exc
        return EmbeddingBatch(tuple(texts), vectors, model_id)

    def _post(self, path: str, payload: dict) -> dict:
        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise TransportError(f"request to {path} failed: {exc}") from exc
        if response.status_code >= 400:
            raise ProviderError(response.status_code, response.text[:500])
        try:
            return response.json()
        except json.JSONDecodeError as exc:
            raise ProviderError(
                response.status_code, "response body is not JSON"
            ) from exc

    def close(self):
        self._client.close()


# -- rate limiting -----------------------------------------------------------


class TokenBucket:
    """Requests-per-minute limiter; acquire blocks until a token frees up."""

    def __init__(
        self,
        per_minute: int,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if per_minute < 1:
            raise WorkbenchError("rate limit must allow at least 1 request/minute")
        self.capacity = float(per_minute)
        self.rate = per_minute / 60.0
        self.tokens = float(per_minute)
        self.updated = clock()
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self.tokens = min(
                    self.capacity, self.tokens + (now - self.updated) * self.rate
                )
                self.updated = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                wait = (1.0 - self.tokens) / self.rate
            self._sleep(wait)


# -- the gateway -------------------------------------------------------------


@dataclass
class _Policies:
    retries: int
    backoff: float
    sleep: Callable[[float], None] = time.sleep


class Gateway:
    """Retry, rate-limit, and concurrency discipline over a backend.

    `retries` counts attempts after the first: a call that keeps failing
    performs 1 + retries transport attempts, then raises TransportError.
    Provider 4xx responses other than 429 are not retried: the request
    itself is wrong, repeating it cannot help.
    """

    def __init__(
        self,
        backend: Backend,
        config: GatewayConfig | None = None,
        record_store: TranscriptStore | None = None,
        clock: Callable[[], float] = time.time,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.config = config or GatewayConfig()
        self.backend = backend
        self.record_store = record_store
        self._clock = clock
        self._policies = _Policies(
            retries=self.config.retries,
            backoff=self.config.backoff_seconds,
            sleep=sleep,
        )
        self._bucket = TokenBucket(self.config.requests_per_minute, sleep=sleep)
        self._in_flight = threading.BoundedSemaphore(self.config.max_in_flight)

    @classmethod
    def replay(cls, store_dir: Path | str, config: GatewayConfig | None = None):
        return cls(ReplayBackend(Path(store_dir)), config=config)

    @classmethod
    def live(cls, config: GatewayConfig | None = None, transport=None):
        config = config or GatewayConfig()
        return cls(LiveBackend(config, transport=transport), config=config)

    def recording(self, store_dir: Path | str) -> "Gateway":
        """Same backend, but every exchange is persisted as it happens."""
        self.record_store = TranscriptStore(Path(store_dir))
        return self

    def chat(self, request: ChatRequest) -> ChatResponse:
        response = self._call(lambda: self.backend.chat(request))
        if self.record_store is not None:
            self.record_store.append_chat(request, response, timestamp=self._clock())
        return response

    def embed(self, texts: Sequence[str], model_id: str | None = None) -> EmbeddingBatch:
        if not texts:
            raise WorkbenchError("embed requires at least one input text")
        for text in texts:
            if not text.strip():
                raise WorkbenchError("embed inputs must be non-blank")
        model = model_id or self.config.embedding_model
        batch = self._call(lambda: self.backend.embed(texts, model))
        if self.record_store is not None:
            self.record_store.append_embeddings(
                model, texts, batch.vectors, session="embeddings"
            )
        return batch

    def _call(self, op):
        with self._in_flight:
            attempts = 1 + self._policies.retries
            last: Exception | None = None
            for attempt in range(attempts):
                self._bucket.acquire()
                try:
                    return op()
                except TransportError as exc:
                    last = exc
                except ProviderError as exc:
                    if exc.status != 429 and exc.status < 500:
                        raise
                    last = exc
                except MissingTranscriptError:
                    raise  # replay misses are never transient
                if attempt < attempts - 1:
                    self._policies.sleep(self._policies.backoff * (2**attempt))
            if isinstance(last, ProviderError):
                raise TransportError(
                    f"provider kept failing after {attempts} attempts: {last}"
                ) from last
            raise TransportError(
                f"transport kept failing after {attempts} attempts: {last}"
            ) from last


class FakeBackend:
    """Programmable backend for tests and fixture authoring.

    Chat responses come from a (tag, digest) table or a fallback
    function; embeddings from a deterministic hash unless preloaded.
    """

    def __init__(self, respond: Callable[[ChatRequest], str] | None = None):
        self.respond = respond
        self.scripted: dict[tuple[str, str], str] = {}
        self.embeddings: dict[str, Sequence[float]] = {}
        self.chat_calls: list[ChatRequest] = []
        self.embed_calls: list[tuple[str, ...]] = []

    def script(self, request: ChatRequest, text: str) -> None:
        self.scripted[(request.request_tag, request.digest())] = text

    def chat(self, request: ChatRequest) -> ChatResponse:
        self.chat_calls.append(request)
        key = (request.request_tag, request.digest())
        if key in self.scripted:
            text = self.scripted[key]
        elif self.respond is not None:
            text = self.respond(request)
        else:
            raise MissingTranscriptError(request.digest(), request.request_tag)
        return ChatResponse(
            text=text,
            model_id=request.model_id,
            prompt_tokens=len(request.user_message.split()),
            completion_tokens=len(text.split()),
            latency=0.0,
            transcript_id=_transcript_id(request.request_tag, request.digest()),
        )

    def embed(self, texts: Sequence[str], model_id: str) -> EmbeddingBatch:
        self.embed_calls.append(tuple(texts))
        vectors = []
        for text in texts:
            if text in self.embeddings:
                vectors.append(tuple(float(x) for x in self.embeddings[text]))
            else:
                vectors.append(_hash_vector(model_id, text))
        return EmbeddingBatch(tuple(texts), tuple(vectors), model_id)


def _hash_vector(model_id: str, text: str, dim: int = 8) -> tuple[float, ...]:
    """Deterministic pseudo-embedding: stable across processes."""
    raw = hashlib.sha256(f"{model_id}\n{text}".encode("utf-8")).digest()
    vals = [int.from_bytes(raw[i : i + 4], "big") / 2**32 for i in range(0, 4 * dim, 4)]
    return tuple(round(v - 0.5, 9) for v in vals)
