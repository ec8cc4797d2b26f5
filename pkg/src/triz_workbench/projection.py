"""2D projection of solution keywords for visual comparison.

Keywords come from manual coding of solution texts and are stored on
cases as (source tag, phrase) annotations. Embedding a phrase with a
static word-vector file (word2vec text or binary layout, path supplied
via ProjectionConfig) is the primary route: the phrase is tokenized,
out-of-vocabulary tokens are skipped, and the remaining token vectors
are averaged. Phrases with no in-vocabulary token at all are flagged
and omitted rather than silently dropped. Without a vector file, the
embedding API behind the gateway serves as fallback and embeds whole
phrases.

The PCA path is deterministic: plain SVD with a fixed sign convention,
no randomness anywhere. UMAP is optional (extra dependency) and runs
with a fixed seed when available.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import ProjectionConfig
from .errors import DataFileError, ShapeMismatchError, UsageError

_TOKEN = re.compile(r"[A-Za-z0-9']+")


class ProjectionMethod(str, Enum):
    PCA = "pca"
    UMAP = "umap"


@dataclass(frozen=True)
class KeywordPoint:
    label: str
    source: str
    x: float
    y: float


@dataclass(frozen=True)
class ProjectionFinding:
    """A keyword that could not be embedded, with the reason."""

    label: str
    source: str
    message: str


@dataclass
class ProjectionResult:
    method: str
    points: list[KeywordPoint] = field(default_factory=list)
    findings: list[ProjectionFinding] = field(default_factory=list)


class WordVectors:
    """Static word vectors loaded from a word2vec-layout file."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self._vectors = vectors
        self.dim = dim

    def __len__(self) -> int:
        return len(self._vectors)

    @classmethod
    def load(
        cls,
        path: Path | str,
        *,
        binary: bool | None = None,
        limit: int | None = None,
    ) -> "WordVectors":
        path = Path(path)
        if not path.exists():
            raise UsageError(f"word-vector file not found: {path}")
        if binary is None:
            binary = path.suffix == ".bin"
        reader = cls._read_binary if binary else cls._read_text
        try:
            vectors, dim = reader(path, limit)
        except (ValueError, IndexError) as exc:
            raise DataFileError(
                f"{path} is not in the word2vec {'binary' if binary else 'text'} layout: {exc}"
            ) from exc
        return cls(vectors, dim)

    @staticmethod
    def _read_text(path: Path, limit: int | None):
        with path.open("r", encoding="utf-8", errors="replace") as fh:
            head = fh.readline().split()
            count, dim = int(head[0]), int(head[1])
            take = count if limit is None else min(count, limit)
            vectors: dict[str, np.ndarray] = {}
            for _ in range(take):
                line = fh.readline()
                if not line:
                    raise ValueError("file ends before the declared vocabulary")
                parts = line.rstrip("\n").split(" ")
                vec = np.array(parts[1 : 1 + dim], dtype=float)
                if vec.size != dim:
                    raise ValueError(f"row for {parts[0]!r} has {vec.size} values")
                vectors[parts[0]] = vec
        return vectors, dim

    @staticmethod
    def _read_binary(path: Path, limit: int | None):
        with path.open("rb") as fh:
            head = fh.readline().decode("utf-8").split()
            count, dim = int(head[0]), int(head[1])
            take = count if limit is None else min(count, limit)
            vectors: dict[str, np.ndarray] = {}
            for _ in range(take):
                token = bytearray()
                while True:
                    ch = fh.read(1)
                    if not ch:
                        raise ValueError("file ends before the declared vocabulary")
                    if ch == b" ":
                        break
                    if ch != b"\n":  # record separator is optional
                        token += ch
                raw = fh.read(4 * dim)
                if len(raw) != 4 * dim:
                    raise ValueError(f"truncated vector for {bytes(token)!r}")
                vec = np.frombuffer(raw, dtype="<f4").astype(float)
                vectors[token.decode("utf-8", errors="replace")] = vec
        return vectors, dim

    def get(self, token: str) -> np.ndarray | None:
        hit = self._vectors.get(token)
        if hit is None:
            hit = self._vectors.get(token.lower())
        return hit

    def phrase(self, text: str) -> np.ndarray | None:
        """Mean of the in-vocabulary token vectors; None if all are OOV."""
        rows = [v for v in (self.get(t) for t in _TOKEN.findall(text)) if v is not None]
        if not rows:
            return None
        return np.mean(rows, axis=0)


def pca_2d(matrix: np.ndarray) -> np.ndarray:
    """Project row vectors onto their first two principal components.

    Fully deterministic: signs are fixed so the largest loading of each
    component is positive. Degenerate directions project to zero.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2:
        raise ShapeMismatchError("pca_2d expects a 2-D matrix of row vectors")
    centered = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    for i in range(min(2, vt.shape[0])):
        pivot = int(np.argmax(np.abs(vt[i])))
        if vt[i, pivot] < 0:
            vt[i] = -vt[i]
    coords = np.zeros((x.shape[0], 2))
    k = min(2, s.size)
    # scores via the loadings, not u*s: identical input rows then land
    # on bitwise-identical points
    coords[:, :k] = centered @ vt[:k].T
    return coords


def _reduce_umap(matrix: np.ndarray, seed: int) -> np.ndarray:
    try:
        import umap  # type: ignore[import-not-found]
    except ImportError as exc:
        raise UsageError(
            "the umap method needs the optional umap-learn package; "
            "install it or use method='pca'"
        ) from exc
    reducer = umap.UMAP(
        n_components=2,
        n_neighbors=min(15, matrix.shape[0] - 1),
        random_state=seed,
    )
    return np.asarray(reducer.fit_transform(matrix), dtype=float)


def project_keywords(
    keywords: Sequence[tuple[str, str]],
    method: str = "pca",
    *,
    vectors: WordVectors | None = None,
    gateway=None,
    config: ProjectionConfig | None = None,
) -> ProjectionResult:
    """Embed (label, source) keywords and reduce them to 2D points.

    Embedding source precedence: an explicit WordVectors object, then
    the configured word-vector file, then the gateway's embedding API.
    """
    cfg = config or ProjectionConfig()
    try:
        mode = ProjectionMethod(str(method).lower())
    except ValueError:
        raise UsageError(
            f"unknown projection method {method!r}; choose one of "
            + ", ".join(m.value for m in ProjectionMethod)
        ) from None
    pairs = [(str(label), str(source)) for label, source in keywords]
    if len(pairs) < 3:
        raise UsageError(f"projection needs at least 3 keywords, got {len(pairs)}")

    if vectors is None and cfg.word_vector_path is not None:
        vectors = WordVectors.load(
            cfg.word_vector_path, binary=cfg.binary, limit=cfg.vocab_limit
        )

    findings: list[ProjectionFinding] = []
    kept: list[tuple[str, str]] = []
    rows: list[np.ndarray] = []
    if vectors is not None:
        for label, source in pairs:
            vec = vectors.phrase(label)
            if vec is None:
                findings.append(
                    ProjectionFinding(
                        label, source, "all tokens out of vocabulary; point omitted"
                    )
                )
            else:
                kept.append((label, source))
                rows.append(vec)
    elif gateway is not None:
        batch = gateway.embed([label for label, _ in pairs])
        kept = pairs
        rows = [np.asarray(v, dtype=float) for v in batch.vectors]
    else:
        raise UsageError(
            "no word-vector source configured: set word_vector_path or "
            "pass a gateway for the embedding-API fallback"
        )

    if len(rows) < 3:
        raise UsageError(
            f"only {len(rows)} of {len(pairs)} keywords could be embedded; "
            "projection needs at least 3"
        )
    matrix = np.vstack(rows)
    if mode is ProjectionMethod.PCA:
        coords = pca_2d(matrix)
    else:
        coords = _reduce_umap(matrix, cfg.seed)
    points = [
        KeywordPoint(label, source, float(x), float(y))
        for (label, source), (x, y) in zip(kept, coords)
    ]
    return ProjectionResult(method=mode.value, points=points, findings=findings)


def nearest_neighbor_purity(points: Sequence[KeywordPoint]) -> float:
    """Fraction of points whose nearest neighbor shares their source tag."""
    if len(points) < 2:
        raise UsageError("purity needs at least 2 points")
    coords = np.array([[p.x, p.y] for p in points])
    same = 0
    for i in range(len(points)):
        dists = np.sum((coords - coords[i]) ** 2, axis=1)
        dists[i] = np.inf
        j = int(np.argmin(dists))
        same += points[j].source == points[i].source
    return same / len(points)
