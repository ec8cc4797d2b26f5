"""Runtime configuration, kept as plain dataclasses.

Defaults encode the workflow's operating points: deterministic chat for
Steps 1 through 3 (temperature 0), sampled generation for Step 4
(temperature 1, three solutions per principle).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_CHAT_MODEL = "gpt-4"
DEFAULT_EMBEDDING_MODEL = "text-embedding-ada-002"

STEP_TEMPERATURES = {1: 0.0, 2: 0.0, 3: 0.0, 4: 1.0}
DEFAULT_SOLUTION_COUNT = 3


@dataclass
class GatewayConfig:
    """Connection and resilience settings for the LLM gateway."""

    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "OPENAI_API_KEY"
    chat_model: str = DEFAULT_CHAT_MODEL
    embedding_model: str = DEFAULT_EMBEDDING_MODEL
    timeout_seconds: float = 60.0
    retries: int = 3
    backoff_seconds: float = 1.0
    requests_per_minute: int = 60
    max_in_flight: int = 4

    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env)


@dataclass
class WorkflowConfig:
    """Per-step knobs for the four-step session pipeline."""

    temperatures: dict[int, float] = field(
        default_factory=lambda: dict(STEP_TEMPERATURES)
    )
    solution_count: int = DEFAULT_SOLUTION_COUNT
    # Providers cap output server-side; None means "do not ask for less".
    max_output_tokens: int | None = None


@dataclass
class ProjectionConfig:
    """Keyword-projection settings.

    word_vector_path points at a pretrained static word-vector file in
    the word2vec text or binary layout. The file is never bundled with
    the package; without one, projection can fall back to the embedding
    API through the gateway.
    """

    word_vector_path: Path | None = None
    # None = infer from the file suffix (".bin" reads as binary).
    binary: bool | None = None
    seed: int = 42
    # Cap on vectors read from very large files; None reads everything.
    vocab_limit: int | None = None


@dataclass
class StorageConfig:
    """Where sessions, transcripts, and reports live on disk."""

    root: Path = field(default_factory=lambda: Path("workbench_data"))

    @property
    def sessions_dir(self) -> Path:
        return self.root / "sessions"

    @property
    def transcripts_dir(self) -> Path:
        return self.root / "transcripts"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    def ensure(self) -> "StorageConfig":
        for d in (self.sessions_dir, self.transcripts_dir, self.reports_dir):
            d.mkdir(parents=True, exist_ok=True)
        return self
