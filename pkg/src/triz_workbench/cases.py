"""Case collections: schema, validation, persistence, and the bundled seeds.

A case records one documented TRIZ application: the four-part problem
framing the prompts consume, the contradiction pairs and principles the
source literature used, the ground-truth solutions, and optional keyword
annotations (manually coded phrases tagged by their source, used for the
projection views).

Validation is split in two. ``validate_case`` checks schema invariants
that every stored case must satisfy. ``validate_for_evaluation`` adds the
stricter requirements of the benchmark runs (reference contradictions
present); cases that fail only the latter can still drive the interactive
workflow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .errors import CaseValidationError, DataFileError
from .knowledge import PARAMETER_COUNT, PRINCIPLE_COUNT, _bundled_data_dir

COLLECTION_FORMAT = "triz-case-collection"
COLLECTION_VERSION = 1

DOMAIN_TAGS = (
    "product design",
    "engineering",
    "manufacturing",
    "sustainability",
    "ergonomics",
    "service design",
)


@dataclass(frozen=True)
class ProblemDescription:
    scenario: str
    current_state: str
    pain_point: str
    requirement: str

    def fields(self) -> dict[str, str]:
        return {
            "Problem Scenario": self.scenario,
            "Current State": self.current_state,
            "Pain Point": self.pain_point,
            "Requirement": self.requirement,
        }

    def as_prompt_text(self) -> str:
        """Labeled four-line block, the form the prompts embed."""
        return "\n".join(f"{label}: {text}" for label, text in self.fields().items())

    def is_complete(self) -> bool:
        return all(v.strip() for v in self.fields().values())


@dataclass(frozen=True)
class ReferenceContradiction:
    improving: int
    worsening: int
    explanation: str = ""

    def pair(self) -> tuple[int, int]:
        return (self.improving, self.worsening)


@dataclass(frozen=True)
class GroundTruthSolution:
    principle: int
    text: str


@dataclass(frozen=True)
class KeywordAnnotation:
    source: str  # "ground-truth" or a model id
    phrase: str


@dataclass(frozen=True)
class Case:
    id: str
    title: str
    domain_tag: str
    published_after_cutoff: bool
    problem: ProblemDescription
    reference_contradictions: tuple[ReferenceContradiction, ...] = ()
    reference_principles: tuple[int, ...] = ()
    ground_truth_solutions: tuple[GroundTruthSolution, ...] = ()
    solution_keywords: tuple[KeywordAnnotation, ...] = ()
    source_citation: str = ""


@dataclass(frozen=True)
class CaseCollection:
    name: str
    cases: tuple[Case, ...]
    few_shot_case_ids: tuple[str, ...] = ()

    def case_by_id(self, case_id: str) -> Case:
        for case in self.cases:
            if case.id == case_id:
                return case
        raise KeyError(f"no case with id {case_id!r}")

    def evaluation_cases(self) -> list[Case]:
        """Cases eligible for benchmarking: few-shot sources excluded."""
        reserved = set(self.few_shot_case_ids)
        return [c for c in self.cases if c.id not in reserved]


def validate_case(case: Case) -> list[str]:
    """Schema findings for one case; empty list means valid."""
    findings: list[str] = []
    if not case.id.strip():
        findings.append("id: must be non-empty")
    if not case.title.strip():
        findings.append(f"{case.id}: title must be non-empty")
    for label, value in case.problem.fields().items():
        if not value.strip():
            findings.append(f"{case.id}: problem field {label!r} is empty")
    for rc in case.reference_contradictions:
        if not (1 <= rc.improving <= PARAMETER_COUNT):
            findings.append(
                f"{case.id}: improving parameter {rc.improving} outside 1..39"
            )
        if not (1 <= rc.worsening <= PARAMETER_COUNT):
            findings.append(
                f"{case.id}: worsening parameter {rc.worsening} outside 1..39"
            )
        if rc.improving == rc.worsening:
            findings.append(
                f"{case.id}: contradiction improving == worsening ({rc.improving})"
            )
    for p in case.reference_principles:
        if not (1 <= p <= PRINCIPLE_COUNT):
            findings.append(f"{case.id}: reference principle {p} outside 1..40")
    for gt in case.ground_truth_solutions:
        if not (1 <= gt.principle <= PRINCIPLE_COUNT):
            findings.append(
                f"{case.id}: ground-truth principle {gt.principle} outside 1..40"
            )
        elif gt.principle not in case.reference_principles:
            findings.append(
                f"{case.id}: ground-truth principle {gt.principle} "
                "missing from reference_principles"
            )
        if not gt.text.strip():
            findings.append(f"{case.id}: ground-truth solution text is empty")
    for kw in case.solution_keywords:
        if not kw.source.strip() or not kw.phrase.strip():
            findings.append(f"{case.id}: keyword annotation with empty source/phrase")
    return findings


def validate_for_evaluation(case: Case) -> list[str]:
    """Schema findings plus the benchmark-only requirements."""
    findings = validate_case(case)
    if not case.reference_contradictions:
        findings.append(f"{case.id}: no reference contradictions; not evaluable")
    return findings


def validate_collection(collection: CaseCollection) -> list[str]:
    findings: list[str] = []
    if not collection.cases:
        findings.append("collection: empty")
    ids = [c.id for c in collection.cases]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        findings.append(f"collection: duplicate case id {dup!r}")
    for fs in collection.few_shot_case_ids:
        if fs not in ids:
            findings.append(f"collection: few_shot_case_id {fs!r} not in collection")
    if collection.name == "B":
        for c in collection.cases:
            if not c.published_after_cutoff:
                findings.append(
                    f"collection: case {c.id!r} predates the cutoff "
                    "but the collection is declared 'B'"
                )
    for case in collection.cases:
        findings.extend(validate_case(case))
    return findings


# -- persistence -----------------------------------------------------------


def _case_to_doc(case: Case) -> dict:
    doc = asdict(case)
    doc["reference_contradictions"] = [
        asdict(rc) for rc in case.reference_contradictions
    ]
    return doc


def _case_from_doc(doc: dict) -> Case:
    try:
        problem = ProblemDescription(**doc["problem"])
        return Case(
            id=doc["id"],
            title=doc["title"],
            domain_tag=doc["domain_tag"],
            published_after_cutoff=bool(doc["published_after_cutoff"]),
            problem=problem,
            reference_contradictions=tuple(
                ReferenceContradiction(**rc)
                for rc in doc.get("reference_contradictions", [])
            ),
            reference_principles=tuple(doc.get("reference_principles", [])),
            ground_truth_solutions=tuple(
                GroundTruthSolution(**gt)
                for gt in doc.get("ground_truth_solutions", [])
            ),
            solution_keywords=tuple(
                KeywordAnnotation(**kw) for kw in doc.get("solution_keywords", [])
            ),
            source_citation=doc.get("source_citation", ""),
        )
    except (KeyError, TypeError) as exc:
        raise CaseValidationError(
            f"case document malformed near {doc.get('id', '<no id>')!r}: {exc}"
        ) from exc


def load_collection(path: Path | str) -> CaseCollection:
    """Load and validate a collection file; invariant violations refuse it."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFileError(f"cannot read collection file {path}: {exc}") from exc
    if not raw.strip():
        raise CaseValidationError(f"collection file {path} is empty")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CaseValidationError(
            f"collection file {path} is not valid JSON: line {exc.lineno}: {exc.msg}"
        ) from exc
    if doc.get("format") != COLLECTION_FORMAT:
        raise CaseValidationError(
            f"collection file {path} has format {doc.get('format')!r}, "
            f"expected {COLLECTION_FORMAT!r}"
        )
    collection = CaseCollection(
        name=doc["name"],
        cases=tuple(_case_from_doc(d) for d in doc["cases"]),
        few_shot_case_ids=tuple(doc.get("few_shot_case_ids", [])),
    )
    findings = validate_collection(collection)
    if findings:
        raise CaseValidationError(
            f"collection {collection.name!r} failed validation "
            f"({len(findings)} finding(s))",
            findings,
        )
    return collection


def save_collection(collection: CaseCollection, path: Path | str) -> Path:
    """Persist a validated collection; load(save(x)) round-trips to x."""
    findings = validate_collection(collection)
    if findings:
        raise CaseValidationError(
            f"refusing to save invalid collection ({len(findings)} finding(s))",
            findings,
        )
    path = Path(path)
    doc = {
        "format": COLLECTION_FORMAT,
        "version": COLLECTION_VERSION,
        "name": collection.name,
        "few_shot_case_ids": list(collection.few_shot_case_ids),
        "cases": [_case_to_doc(c) for c in collection.cases],
    }
    try:
        path.write_text(
            json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise DataFileError(f"cannot write collection file {path}: {exc}") from exc
    return path


def seed_cases() -> CaseCollection:
    """The bundled seed collection (classic practices plus recent studies)."""
    return load_collection(_bundled_data_dir() / "seed_cases.json")
