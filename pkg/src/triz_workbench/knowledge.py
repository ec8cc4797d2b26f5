"""The TRIZ knowledge core: 39 engineering parameters, 40 inventive
principles, and the classic contradiction matrix.

All three are shipped as versioned JSON files under ``data/`` and loaded
once into an immutable KnowledgeBase. Lookups are dictionary reads; the
only non-trivial logic is fuzzy parameter-name resolution, which exists
because language models rarely reproduce parameter names byte-for-byte.
"""

from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import AmbiguousNameError, DataFileError, KnowledgeError

PARAMETER_COUNT = 39
PRINCIPLE_COUNT = 40

_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})


def normalize_name(name: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return re.sub(r"\s+", " ", name.lower().translate(_PUNCT_TABLE)).strip()


@dataclass(frozen=True)
class EngineeringParameter:
    number: int
    name: str
    definition: str


@dataclass(frozen=True)
class InventivePrinciple:
    number: int
    name: str
    description: str

    def label(self) -> str:
        """Canonical short form, e.g. '1-Segmentation'."""
        return f"{self.number}-{self.name}"


@dataclass(frozen=True)
class ContradictionMatrix:
    """39x39 grid mapping (improving, worsening) to recommended principles.

    Only non-empty cells are stored; absent keys read as empty tuples.
    """

    cells: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def get(self, improving: int, worsening: int) -> tuple[int, ...]:
        return self.cells.get((improving, worsening), ())


@dataclass(frozen=True)
class ValidationFinding:
    rule: str
    detail: str

    def __str__(self) -> str:  # keeps CLI output readable
        return f"[{self.rule}] {self.detail}"


def _bundled_data_dir() -> Path:
    return Path(str(resources.files("triz_workbench"))) / "data"


def _read_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as exc:
        raise DataFileError(f"knowledge data file missing: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataFileError(f"knowledge data file unreadable: {path}: {exc}") from exc


class KnowledgeBase:
    """Immutable, validated view over the bundled TRIZ data files."""

    def __init__(
        self,
        parameters: Iterable[EngineeringParameter],
        principles: Iterable[InventivePrinciple],
        matrix: ContradictionMatrix,
    ):
        self.parameters: tuple[EngineeringParameter, ...] = tuple(parameters)
        self.principles: tuple[InventivePrinciple, ...] = tuple(principles)
        self.matrix = matrix
        self._params_by_number = {p.number: p for p in self.parameters}
        self._principles_by_number = {p.number: p for p in self.principles}
        self._params_by_norm_name = {
            normalize_name(p.name): p for p in self.parameters
        }

    # -- lookups ---------------------------------------------------------

    def parameter_by_number(self, n: int) -> EngineeringParameter:
        param = self._params_by_number.get(n)
        if param is None:
            raise KnowledgeError(
                f"engineering parameter number {n} out of range 1..{PARAMETER_COUNT}"
            )
        return param

    def parameter_by_name(
        self, name: str, fuzzy: bool = False
    ) -> Optional[EngineeringParameter]:
        """Resolve a parameter from free text.

        Exact mode compares normalized names for equality. Fuzzy mode
        additionally accepts a query whose token sequence contains a full
        parameter name as a contiguous run; the longest contained name
        wins, and a tie between distinct parameters raises
        AmbiguousNameError. Partial names never match: a query that drops
        a token of the official name resolves to nothing.
        """
        if not name or not name.strip():
            raise KnowledgeError("parameter name must be non-empty")
        norm = normalize_name(name)
        exact = self._params_by_norm_name.get(norm)
        if exact is not None or not fuzzy:
            return exact

        query_tokens = norm.split()
        best_len = 0
        best: list[EngineeringParameter] = []
        for target_norm, param in self._params_by_norm_name.items():
            tokens = target_norm.split()
            if not _contains_run(query_tokens, tokens):
                continue
            if len(tokens) > best_len:
                best_len = len(tokens)
                best = [param]
            elif len(tokens) == best_len:
                best.append(param)
        if not best:
            return None
        if len(best) > 1:
            raise AmbiguousNameError(name, sorted(p.number for p in best))
        return best[0]

    def principle_by_number(self, n: int) -> InventivePrinciple:
        principle = self._principles_by_number.get(n)
        if principle is None:
            raise KnowledgeError(
                f"inventive principle number {n} out of range 1..{PRINCIPLE_COUNT}"
            )
        return principle

    def matrix_lookup(
        self, improving: int, worsening: int
    ) -> list[InventivePrinciple]:
        """Principles of the addressed matrix cell, in stored order."""
        self.parameter_by_number(improving)
        self.parameter_by_number(worsening)
        return [
            self.principle_by_number(p) for p in self.matrix.get(improving, worsening)
        ]

    # -- validation ------------------------------------------------------

    def validate(self) -> list[ValidationFinding]:
        """Structural audit of the loaded data. Empty list means valid."""
        findings: list[ValidationFinding] = []

        if len(self.parameters) != PARAMETER_COUNT:
            findings.append(
                ValidationFinding(
                    "parameter-count",
                    f"expected {PARAMETER_COUNT} parameters, found {len(self.parameters)}",
                )
            )
        if len(self.principles) != PRINCIPLE_COUNT:
            findings.append(
                ValidationFinding(
                    "principle-count",
                    f"expected {PRINCIPLE_COUNT} principles, found {len(self.principles)}",
                )
            )

        seen_params: set[int] = set()
        for p in self.parameters:
            if p.number in seen_params:
                findings.append(
                    ValidationFinding("duplicate-parameter", f"number {p.number} repeats")
                )
            seen_params.add(p.number)
            if not (1 <= p.number <= PARAMETER_COUNT):
                findings.append(
                    ValidationFinding(
                        "parameter-range", f"parameter number {p.number} outside 1..39"
                    )
                )
            if not p.name.strip():
                findings.append(
                    ValidationFinding("parameter-name", f"parameter {p.number} unnamed")
                )
            if not p.definition.strip():
                findings.append(
                    ValidationFinding(
                        "parameter-definition", f"parameter {p.number} lacks a definition"
                    )
                )

        seen_principles: set[int] = set()
        for pr in self.principles:
            if pr.number in seen_principles:
                findings.append(
                    ValidationFinding("duplicate-principle", f"number {pr.number} repeats")
                )
            seen_principles.add(pr.number)
            if not (1 <= pr.number <= PRINCIPLE_COUNT):
                findings.append(
                    ValidationFinding(
                        "principle-range", f"principle number {pr.number} outside 1..40"
                    )
                )

        for (i, w), principles in self.matrix.cells.items():
            if not (1 <= i <= PARAMETER_COUNT and 1 <= w <= PARAMETER_COUNT):
                findings.append(
                    ValidationFinding("cell-range", f"cell ({i},{w}) outside the 39x39 grid")
                )
                continue
            if i == w and principles:
                findings.append(
                    ValidationFinding("diagonal", f"diagonal cell ({i},{w}) is non-empty")
                )
            for p in principles:
                if not (1 <= p <= PRINCIPLE_COUNT):
                    findings.append(
                        ValidationFinding(
                            "cell-principle-range",
                            f"cell ({i},{w}) references principle {p} outside 1..40",
                        )
                    )
        return findings


def _contains_run(haystack: list[str], needle: list[str]) -> bool:
    """True if needle occurs as a contiguous subsequence of haystack."""
    if not needle or len(needle) > len(haystack):
        return False
    return any(
        haystack[i : i + len(needle)] == needle
        for i in range(len(haystack) - len(needle) + 1)
    )


def load_knowledge_base(data_dir: Path | None = None) -> KnowledgeBase:
    """Load the bundled (or an alternate) knowledge base from disk."""
    base = data_dir if data_dir is not None else _bundled_data_dir()
    params_doc = _read_json(base / "parameters.json")
    prins_doc = _read_json(base / "principles.json")
    matrix_doc = _read_json(base / "matrix.json")

    parameters = [
        EngineeringParameter(e["number"], e["name"], e["definition"])
        for e in params_doc["parameters"]
    ]
    principles = [
        InventivePrinciple(e["number"], e["name"], e["description"])
        for e in prins_doc["principles"]
    ]
    cells: dict[tuple[int, int], tuple[int, ...]] = {}
    for key, value in matrix_doc["cells"].items():
        i_text, w_text = key.split(",")
        cells[(int(i_text), int(w_text))] = tuple(value)
    return KnowledgeBase(parameters, principles, ContradictionMatrix(cells))


_default_kb: KnowledgeBase | None = None


def default_knowledge_base() -> KnowledgeBase:
    """Process-wide cached instance of the bundled knowledge base."""
    global _default_kb
    if _default_kb is None:
        _default_kb = load_knowledge_base()
    return _default_kb


def validate_knowledge_base(kb: KnowledgeBase | None = None) -> list[ValidationFinding]:
    """Audit a knowledge base (the bundled one when none is given)."""
    return (kb or default_knowledge_base()).validate()
