"""Scoring primitives for the evaluation harness.

Contradiction sets are scored as recall and precision over pair sets:

    recall    = |match(G, O)| / |O|
    precision = |match(G, O)| / |G|

where G holds the generated pairs, O the pairs used in the source
literature, and match depends on the configured mode. In the default
OrderedPair mode a match is plain equality, so both numerators are
|G intersect O|. UnorderedPair ignores pair direction. ParameterLevel
counts a pair as matched when the two pairs share at least one
parameter (at least half of a pair's two slots).

Solution texts are scored by cosine similarity between embedding
vectors, averaged over the generated solutions for one ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeMismatchError, UndefinedMetricError, WorkbenchError
from .knowledge import PARAMETER_COUNT

Pair = tuple[int, int]


class MatchMode(str, Enum):
    ORDERED_PAIR = "ordered"
    UNORDERED_PAIR = "unordered"
    PARAMETER_LEVEL = "parameter"


@dataclass(frozen=True)
class MatchConfig:
    mode: MatchMode = MatchMode.ORDERED_PAIR
    notes: str = ""


@dataclass(frozen=True)
class PairSet:
    """A set of directional (improving, worsening) contradiction pairs."""

    pairs: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        for improving, worsening in self.pairs:
            if not (1 <= improving <= PARAMETER_COUNT):
                raise WorkbenchError(f"improving parameter {improving} outside 1..39")
            if not (1 <= worsening <= PARAMETER_COUNT):
                raise WorkbenchError(f"worsening parameter {worsening} outside 1..39")
            if improving == worsening:
                raise WorkbenchError(f"self-pair ({improving},{worsening}) not allowed")

    @classmethod
    def of(cls, pairs: Iterable[Pair]) -> "PairSet":
        return cls(frozenset((int(i), int(w)) for i, w in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


def _matches(g: Pair, o: Pair, mode: MatchMode) -> bool:
    if mode is MatchMode.ORDERED_PAIR:
        return g == o
    if mode is MatchMode.UNORDERED_PAIR:
        return g == o or (g[1], g[0]) == o
    return bool(set(g) & set(o))


def matched_generated(G: PairSet, O: PairSet, cfg: MatchConfig) -> PairSet:
    """Generated pairs that some reference pair matches under cfg."""
    return PairSet.of(g for g in G.pairs if any(_matches(g, o, cfg.mode) for o in O.pairs))


def matched_reference(G: PairSet, O: PairSet, cfg: MatchConfig) -> PairSet:
    """Reference pairs that some generated pair matches under cfg."""
    return PairSet.of(o for o in O.pairs if any(_matches(g, o, cfg.mode) for g in G.pairs))


def recall(G: PairSet, O: PairSet, cfg: MatchConfig | None = None) -> float:
    cfg = cfg or MatchConfig()
    if len(O) == 0:
        raise UndefinedMetricError("recall undefined: reference pair set is empty")
    return len(matched_reference(G, O, cfg)) / len(O)


def precision(G: PairSet, O: PairSet, cfg: MatchConfig | None = None) -> float:
    cfg = cfg or MatchConfig()
    if len(G) == 0:
        raise UndefinedMetricError("precision undefined: generated pair set is empty")
    return len(matched_generated(G, O, cfg)) / len(G)


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.ndim != 1 or vb.ndim != 1:
        raise ShapeMismatchError("cosine similarity takes 1-D vectors")
    if va.shape != vb.shape:
        raise ShapeMismatchError(
            f"vector dimensions differ: {va.shape[0]} vs {vb.shape[0]}"
        )
    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        raise UndefinedMetricError("cosine similarity undefined for a zero vector")
    return float(np.dot(va, vb) / (norm_a * norm_b))


def mean_cosine_to_reference(
    reference: Sequence[float], candidates: Sequence[Sequence[float]]
) -> float:
    """Mean cosine of each candidate vector against the reference vector."""
    if not candidates:
        raise UndefinedMetricError("no candidate vectors to score")
    return float(
        np.mean([cosine_similarity(reference, c) for c in candidates])
    )


def solution_similarity(gateway, ground_truth: str, generated: Sequence[str]) -> float:
    """Embed the ground truth and the generated solutions, then average
    the per-solution cosine similarities against the ground truth."""
    if not generated:
        raise UndefinedMetricError("no generated solutions to score")
    batch = gateway.embed([ground_truth, *generated])
    reference = batch.vectors[0]
    return mean_cosine_to_reference(reference, batch.vectors[1:])
