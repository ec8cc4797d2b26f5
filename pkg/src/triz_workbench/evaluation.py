"""Batch evaluation: contradiction recall/precision and solution similarity.

The two runners mirror the benchmark protocol the workbench is built
around. ``run_contradiction_eval`` drives Steps 1-3 for every eligible
case with each requested strategy, keeping all deduplicated Step-2
parameters (batch mode skips the human selection checkpoint), and
scores the parsed pairs against the case's reference contradictions.
``run_solution_eval`` renders a Step-4 prompt per ground-truth
principle, samples ``per_principle_count`` solutions at the Step-4
temperature, and scores mean cosine similarity against the ground-truth
solution text.

Cases reserved as few-shot examples never enter a run. Per-case
failures (gateway errors, unparseable output, missing ground truth)
become error records on the report and the run continues.

Aggregation is macro by default: per-case scores are averaged within
each (strategy, model) cell, one dot per case. ``aggregation="micro"``
pools matches across cases before dividing. Reports store their
aggregates but the stored values are recomputed and checked on every
export and import.

CSV schema, one row per scored (case, strategy, model) - solution rows
additionally carry the principle::

    case_id, strategy, model_id, principle, recall, precision,
    similarity, generated_count, parameter_count, reference_count,
    matched_generated_count, matched

``matched`` lists the reference pairs the generated set recovered, as
"improving-worsening" tokens joined by ";".
"""

from __future__ import annotations

import copy
import csv
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .cases import Case, CaseCollection, validate_case, validate_collection, validate_for_evaluation
from .config import STEP_TEMPERATURES
from .errors import (
    CaseValidationError,
    DataFileError,
    EvaluationError,
    GatewayError,
    UsageError,
    WorkbenchError,
)
from .gateway import ChatRequest, Gateway
from .knowledge import KnowledgeBase, default_knowledge_base
from .metrics import (
    MatchConfig,
    PairSet,
    matched_generated,
    matched_reference,
    precision,
    recall,
    solution_similarity,
)
from .prompts import PromptEngine, PromptStrategy, default_engine
from .workflow import SessionState, TrizWorkflow, parse_solution_text, request_tag

REPORT_FORMAT = "triz-eval-report"
REPORT_VERSION = 1

CSV_COLUMNS = (
    "case_id",
    "strategy",
    "model_id",
    "principle",
    "recall",
    "precision",
    "similarity",
    "generated_count",
    "parameter_count",
    "reference_count",
    "matched_generated_count",
    "matched",
)

_STRATEGY_ORDER = [s.value for s in PromptStrategy]

AGGREGATIONS = ("macro", "micro")


# -- report model ------------------------------------------------------------


@dataclass(frozen=True)
class CaseScore:
    """One scored cell. Step-3 rows carry recall/precision and the pair
    bookkeeping; Step-4 rows carry similarity plus the principle."""

    case_id: str
    strategy: str
    model_id: str
    recall: float | None = None
    precision: float | None = None
    similarity: float | None = None
    principle_number: int | None = None
    generated_count: int = 0
    parameter_count: int = 0
    reference_count: int = 0
    matched_generated_count: int = 0
    # reference pairs the generated set recovered (the recall numerator)
    matched: PairSet = field(default_factory=PairSet)


@dataclass(frozen=True)
class AggregateRow:
    strategy: str
    model_id: str
    case_count: int
    mean_recall: float | None = None
    mean_precision: float | None = None
    mean_similarity: float | None = None
    sd_similarity: float | None = None
    mean_pair_count: float | None = None
    mean_parameter_count: float | None = None


@dataclass(frozen=True)
class EvalErrorRecord:
    case_id: str
    strategy: str  # "" when the failure precedes the strategy fan-out
    model_id: str  # "" for validation findings
    stage: str  # validation | step1 | step2 | step3 | step4 | embedding
    message: str


@dataclass
class EvalReport:
    step: int  # 3 = contradiction analysis, 4 = solution generation
    collection: str
    strategies: tuple[str, ...]
    model_ids: tuple[str, ...]
    match_mode: str | None
    aggregation: str
    per_principle_count: int | None
    created_at: str  # ISO-8601 UTC, from the runner's injected clock
    case_scores: list[CaseScore] = field(default_factory=list)
    errors: list[EvalErrorRecord] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)

    def recompute_aggregates(self) -> list[AggregateRow]:
        return compute_aggregates(self.case_scores, aggregation=self.aggregation)

    def verify(self) -> None:
        """Stored aggregates must equal recomputation from the scores."""
        fresh = self.recompute_aggregates()
        if fresh != self.aggregates:
            raise EvaluationError(
                "report aggregates do not match recomputation from case scores"
            )


def _strategy_sort_key(value: str) -> tuple[int, str]:
    if value in _STRATEGY_ORDER:
        return (_STRATEGY_ORDER.index(value), value)
    return (len(_STRATEGY_ORDER), value)


def compute_aggregates(
    scores: Sequence[CaseScore], *, aggregation: str = "macro"
) -> list[AggregateRow]:
    if aggregation not in AGGREGATIONS:
        raise UsageError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    cells: dict[tuple[str, str], list[CaseScore]] = {}
    for s in scores:
        cells.setdefault((s.strategy, s.model_id), []).append(s)
    rows: list[AggregateRow] = []
    for strategy, model_id in sorted(
        cells, key=lambda k: (_strategy_sort_key(k[0]), k[1])
    ):
        group = cells[(strategy, model_id)]
        scored = [s for s in group if s.recall is not None]
        recalls = [s.recall for s in scored]
        precisions = [s.precision for s in scored if s.precision is not None]
        if aggregation == "micro":
            ref_total = sum(s.reference_count for s in scored)
            gen_total = sum(s.generated_count for s in scored)
            mean_recall = (
                sum(len(s.matched) for s in scored) / ref_total if ref_total else None
            )
            mean_precision = (
                sum(s.matched_generated_count for s in scored) / gen_total
                if gen_total
                else None
            )
        else:
            mean_recall = statistics.fmean(recalls) if recalls else None
            mean_precision = statistics.fmean(precisions) if precisions else None
        sims = [s.similarity for s in group if s.similarity is not None]
        rows.append(
            AggregateRow(
                strategy=strategy,
                model_id=model_id,
                case_count=len(group),
                mean_recall=mean_recall,
                mean_precision=mean_precision,
                mean_similarity=statistics.fmean(sims) if sims else None,
                sd_similarity=statistics.pstdev(sims) if sims else None,
                mean_pair_count=(
                    statistics.fmean([s.generated_count for s in scored])
                    if scored
                    else None
                ),
                mean_parameter_count=(
                    statistics.fmean([s.parameter_count for s in scored])
                    if scored
                    else None
                ),
            )
        )
    return rows


# -- shared runner plumbing --------------------------------------------------


def _canonical_strategies(
    strategies: Iterable[PromptStrategy | str] | None,
) -> list[PromptStrategy]:
    if strategies is None:
        return list(PromptStrategy)
    normalized: set[PromptStrategy] = set()
    for s in strategies:
        if isinstance(s, PromptStrategy):
            normalized.add(s)
        else:
            try:
                normalized.add(PromptStrategy(str(s)))
            except ValueError:
                known = ", ".join(_STRATEGY_ORDER)
                raise UsageError(
                    f"unknown prompt strategy {s!r} (known: {known})"
                ) from None
    if not normalized:
        raise UsageError("at least one prompt strategy is required")
    return sorted(normalized, key=lambda s: _STRATEGY_ORDER.index(s.value))


def _canonical_models(model_ids: Iterable[str] | None, gateway: Gateway) -> list[str]:
    if model_ids is None:
        return [gateway.config.chat_model]
    models = sorted({m for m in model_ids if str(m).strip()})
    if not models:
        raise UsageError("at least one model id is required")
    return models


def _check_collection(collection: CaseCollection) -> None:
    findings = validate_collection(collection)
    if findings:
        raise CaseValidationError(
            f"collection {collection.name!r} failed validation "
            f"({len(findings)} finding(s))",
            findings,
        )


def _timestamp(clock: Callable[[], float]) -> str:
    return datetime.fromtimestamp(clock(), tz=timezone.utc).isoformat()


def _map_cases(unit, cases: Sequence[Case], workers: int):
    """Run one unit per case, optionally on a pool; order preserved, so
    reports come out identical no matter the worker count."""
    if workers > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(unit, cases))
    return [unit(c) for c in cases]


# -- contradiction eval (Step 3) ---------------------------------------------


def run_contradiction_eval(
    gateway: Gateway,
    collection: CaseCollection,
    strategies: Iterable[PromptStrategy | str] | None = None,
    model_ids: Iterable[str] | None = None,
    cfg: MatchConfig | None = None,
    *,
    aggregation: str = "macro",
    kb: KnowledgeBase | None = None,
    engine: PromptEngine | None = None,
    clock: Callable[[], float] = time.time,
    workers: int = 1,
) -> EvalReport:
    """Score generated contradiction pairs against each case's references.

    Steps 1-2 run once per (case, model) and are shared across strategies;
    Step 3 then runs once per strategy on a branched copy of the session.
    """
    cfg = cfg or MatchConfig()
    if aggregation not in AGGREGATIONS:
        raise UsageError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    strategy_list = _canonical_strategies(strategies)
    models = _canonical_models(model_ids, gateway)
    _check_collection(collection)
    kb = kb or default_knowledge_base()
    engine = engine or default_engine()

    pre_errors: list[EvalErrorRecord] = []
    eligible: list[Case] = []
    for case in collection.evaluation_cases():
        findings = validate_for_evaluation(case)
        if findings:
            pre_errors.append(
                EvalErrorRecord(case.id, "", "", "validation", "; ".join(findings))
            )
        else:
            eligible.append(case)
    if not eligible:
        raise EvaluationError(
            f"collection {collection.name!r} has no evaluable cases after "
            "excluding few-shot examples and validation failures"
        )

    def unit(case: Case) -> tuple[list[CaseScore], list[EvalErrorRecord]]:
        scores: list[CaseScore] = []
        errors: list[EvalErrorRecord] = []
        reference = PairSet.of(rc.pair() for rc in case.reference_contradictions)
        for model in models:
            wf = TrizWorkflow(gateway, kb=kb, engine=engine)
            session = wf.start_session(
                case.problem, model_id=model, session_id=f"eval-{case.id}"
            )
            try:
                wf.run_step1(session)
                wf.run_step2(session, list(session.step1_output))
            except WorkbenchError as exc:
                stage = (
                    "step1"
                    if session.state is SessionState.PROBLEM_ENTERED
                    else "step2"
                )
                errors.append(EvalErrorRecord(case.id, "", model, stage, str(exc)))
                continue
            resolved: list[int] = []
            for m in session.step2_output:
                if m.resolved and m.triz_number not in resolved:
                    resolved.append(m.triz_number)
            if len(resolved) < 2:
                errors.append(
                    EvalErrorRecord(
                        case.id,
                        "",
                        model,
                        "step2",
                        f"only {len(resolved)} resolved TRIZ parameter(s); "
                        "Step 3 needs at least two",
                    )
                )
                continue
            for strategy in strategy_list:
                branch = copy.deepcopy(session)
                try:
                    relations = wf.run_step3(branch, resolved, strategy)
                except WorkbenchError as exc:
                    errors.append(
                        EvalErrorRecord(case.id, strategy.value, model, "step3", str(exc))
                    )
                    continue
                generated = PairSet.of(r.pair() for r in relations if r.complete)
                if len(generated) == 0:
                    errors.append(
                        EvalErrorRecord(
                            case.id,
                            strategy.value,
                            model,
                            "step3",
                            "no complete contradiction pairs in the parsed output",
                        )
                    )
                    continue
                mentioned = {
                    n
                    for r in relations
                    for n in (r.improving_number, r.worsening_number)
                    if n is not None
                }
                scores.append(
                    CaseScore(
                        case_id=case.id,
                        strategy=strategy.value,
                        model_id=model,
                        recall=recall(generated, reference, cfg),
                        precision=precision(generated, reference, cfg),
                        generated_count=len(generated),
                        parameter_count=len(mentioned),
                        reference_count=len(reference),
                        matched_generated_count=len(
                            matched_generated(generated, reference, cfg)
                        ),
                        matched=matched_reference(generated, reference, cfg),
                    )
                )
        return scores, errors

    results = _map_cases(unit, eligible, workers)
    report = EvalReport(
        step=3,
        collection=collection.name,
        strategies=tuple(s.value for s in strategy_list),
        model_ids=tuple(models),
        match_mode=cfg.mode.value,
        aggregation=aggregation,
        per_principle_count=None,
        created_at=_timestamp(clock),
        errors=pre_errors,
    )
    for scores, errors in results:
        report.case_scores.extend(scores)
        report.errors.extend(errors)
    report.aggregates = report.recompute_aggregates()
    return report


# -- solution eval (Step 4) --------------------------------------------------


def run_solution_eval(
    gateway: Gateway,
    collection: CaseCollection,
    strategies: Iterable[PromptStrategy | str] | None = None,
    model_ids: Iterable[str] | None = None,
    per_principle_count: int = 3,
    *,
    aggregation: str = "macro",
    kb: KnowledgeBase | None = None,
    engine: PromptEngine | None = None,
    clock: Callable[[], float] = time.time,
    workers: int = 1,
) -> EvalReport:
    """Generate solutions per ground-truth principle and score mean cosine
    similarity against the ground-truth text. One chat call per solution,
    at the Step-4 sampling temperature."""
    if per_principle_count < 1:
        raise UsageError("per_principle_count must be at least 1")
    if aggregation not in AGGREGATIONS:
        raise UsageError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    strategy_list = _canonical_strategies(strategies)
    models = _canonical_models(model_ids, gateway)
    _check_collection(collection)
    kb = kb or default_knowledge_base()
    engine = engine or default_engine()
    temperature = STEP_TEMPERATURES[4]

    pre_errors: list[EvalErrorRecord] = []
    eligible: list[Case] = []
    for case in collection.evaluation_cases():
        findings = validate_case(case)
        if findings:
            pre_errors.append(
                EvalErrorRecord(case.id, "", "", "validation", "; ".join(findings))
            )
        elif not case.ground_truth_solutions:
            pre_errors.append(
                EvalErrorRecord(
                    case.id, "", "", "validation", "no ground-truth solutions; skipped"
                )
            )
        else:
            eligible.append(case)
    if not eligible:
        raise EvaluationError(
            f"collection {collection.name!r} has no cases with ground-truth "
            "solutions after excluding few-shot examples"
        )

    def unit(case: Case) -> tuple[list[CaseScore], list[EvalErrorRecord]]:
        scores: list[CaseScore] = []
        errors: list[EvalErrorRecord] = []
        problem_text = case.problem.as_prompt_text()
        for model in models:
            for strategy in strategy_list:
                gen_index = 0
                for gt in case.ground_truth_solutions:
                    label = kb.principle_by_number(gt.principle).label()
                    prompt = engine.render(
                        4,
                        strategy,
                        bindings={
                            "CASE_DESCRIPTION": problem_text,
                            "INVENTIVE_PRINCIPLES": f"Inventive Principle: {label}",
                        },
                    )
                    texts: list[str] = []
                    for _ in range(per_principle_count):
                        tag = request_tag(
                            f"eval-{case.id}", 4, strategy, model, gen=gen_index
                        )
                        gen_index += 1
                        try:
                            response = gateway.chat(
                                ChatRequest(
                                    model_id=model,
                                    user_message=prompt,
                                    temperature=temperature,
                                    request_tag=tag,
                                )
                            )
                        except GatewayError as exc:
                            errors.append(
                                EvalErrorRecord(
                                    case.id, strategy.value, model, "step4",
                                    f"{tag}: {exc}",
                                )
                            )
                            continue
                        text = parse_solution_text(response.text)
                        if text:
                            texts.append(text)
                        else:
                            errors.append(
                                EvalErrorRecord(
                                    case.id, strategy.value, model, "step4",
                                    f"{tag}: empty solution text",
                                )
                            )
                    if not texts:
                        errors.append(
                            EvalErrorRecord(
                                case.id, strategy.value, model, "step4",
                                f"principle {gt.principle}: no usable solutions",
                            )
                        )
                        continue
                    try:
                        similarity = solution_similarity(gateway, gt.text, texts)
                    except WorkbenchError as exc:
                        errors.append(
                            EvalErrorRecord(
                                case.id, strategy.value, model, "embedding", str(exc)
                            )
                        )
                        continue
                    scores.append(
                        CaseScore(
                            case_id=case.id,
                            strategy=strategy.value,
                            model_id=model,
                            similarity=similarity,
                            principle_number=gt.principle,
                            generated_count=len(texts),
                        )
                    )
        return scores, errors

    results = _map_cases(unit, eligible, workers)
    report = EvalReport(
        step=4,
        collection=collection.name,
        strategies=tuple(s.value for s in strategy_list),
        model_ids=tuple(models),
        match_mode=None,
        aggregation=aggregation,
        per_principle_count=per_principle_count,
        created_at=_timestamp(clock),
        errors=pre_errors,
    )
    for scores, errors in results:
        report.case_scores.extend(scores)
        report.errors.extend(errors)
    report.aggregates = report.recompute_aggregates()
    return report


# -- parameter-count statistics ----------------------------------------------


@dataclass(frozen=True)
class CountStats:
    strategy: str
    model_id: str
    case_count: int
    mean_pair_count: float
    mean_parameter_count: float


def parameter_count_stats(
    source: EvalReport | Iterable[CaseScore],
) -> list[CountStats]:
    """Mean generated pair count and distinct-parameter count per
    (strategy, model), over the step-3 scores in the input."""
    scores = source.case_scores if isinstance(source, EvalReport) else list(source)
    cells: dict[tuple[str, str], list[CaseScore]] = {}
    for s in scores:
        if s.recall is None:
            continue
        cells.setdefault((s.strategy, s.model_id), []).append(s)
    return [
        CountStats(
            strategy=strategy,
            model_id=model_id,
            case_count=len(group),
            mean_pair_count=statistics.fmean([s.generated_count for s in group]),
            mean_parameter_count=statistics.fmean([s.parameter_count for s in group]),
        )
        for (strategy, model_id), group in sorted(
            cells.items(), key=lambda kv: (_strategy_sort_key(kv[0][0]), kv[0][1])
        )
    ]


def format_count_table(stats: Sequence[CountStats]) -> str:
    header = f"{'strategy':<14} {'model':<20} {'cases':>5} {'pairs':>7} {'params':>7}"
    lines = [header, "-" * len(header)]
    for row in stats:
        lines.append(
            f"{row.strategy:<14} {row.model_id:<20} {row.case_count:>5} "
            f"{row.mean_pair_count:>7.3f} {row.mean_parameter_count:>7.3f}"
        )
    return "\n".join(lines)


def format_summary_table(report: EvalReport) -> str:
    """Console summary: one column per strategy, one block per model."""
    strategies = list(report.strategies)
    rows_by_model: dict[str, dict[str, AggregateRow]] = {}
    for agg in report.aggregates:
        rows_by_model.setdefault(agg.model_id, {})[agg.strategy] = agg

    def fmt(value: float | None) -> str:
        return f"{value:.3f}" if value is not None else "-"

    width = max([len(s) for s in strategies] + [8]) + 2
    lines: list[str] = []
    mode = f", match mode {report.match_mode}" if report.match_mode else ""
    for model_id in report.model_ids:
        cells = rows_by_model.get(model_id, {})
        lines.append(f"model {model_id} ({report.aggregation}{mode})")
        lines.append(" " * 12 + "".join(f"{s:>{width}}" for s in strategies))
        if report.step == 3:
            metric_rows = [
                ("recall", lambda a: a.mean_recall),
                ("precision", lambda a: a.mean_precision),
            ]
        else:
            metric_rows = [
                ("mean sim", lambda a: a.mean_similarity),
                ("sd sim", lambda a: a.sd_similarity),
            ]
        for name, pick in metric_rows:
            cells_text = "".join(
                f"{fmt(pick(cells[s])) if s in cells else '-':>{width}}"
                for s in strategies
            )
            lines.append(f"{name:<12}{cells_text}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


# -- export / import ---------------------------------------------------------


def _score_to_doc(score: CaseScore) -> dict:
    return {
        "case_id": score.case_id,
        "strategy": score.strategy,
        "model_id": score.model_id,
        "recall": score.recall,
        "precision": score.precision,
        "similarity": score.similarity,
        "principle_number": score.principle_number,
        "generated_count": score.generated_count,
        "parameter_count": score.parameter_count,
        "reference_count": score.reference_count,
        "matched_generated_count": score.matched_generated_count,
        "matched": [[i, w] for i, w in score.matched],
    }


def _score_from_doc(doc: dict) -> CaseScore:
    return CaseScore(
        case_id=doc["case_id"],
        strategy=doc["strategy"],
        model_id=doc["model_id"],
        recall=doc.get("recall"),
        precision=doc.get("precision"),
        similarity=doc.get("similarity"),
        principle_number=doc.get("principle_number"),
        generated_count=int(doc.get("generated_count", 0)),
        parameter_count=int(doc.get("parameter_count", 0)),
        reference_count=int(doc.get("reference_count", 0)),
        matched_generated_count=int(doc.get("matched_generated_count", 0)),
        matched=PairSet.of((int(i), int(w)) for i, w in doc.get("matched", [])),
    )


def _aggregate_to_doc(row: AggregateRow) -> dict:
    return {
        "strategy": row.strategy,
        "model_id": row.model_id,
        "case_count": row.case_count,
        "mean_recall": row.mean_recall,
        "mean_precision": row.mean_precision,
        "mean_similarity": row.mean_similarity,
        "sd_similarity": row.sd_similarity,
        "mean_pair_count": row.mean_pair_count,
        "mean_parameter_count": row.mean_parameter_count,
    }


def report_to_doc(report: EvalReport) -> dict:
    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "report": {
            "step": report.step,
            "collection": report.collection,
            "strategies": list(report.strategies),
            "model_ids": list(report.model_ids),
            "match_mode": report.match_mode,
            "aggregation": report.aggregation,
            "per_principle_count": report.per_principle_count,
            "created_at": report.created_at,
            "case_scores": [_score_to_doc(s) for s in report.case_scores],
            "errors": [
                {
                    "case_id": e.case_id,
                    "strategy": e.strategy,
                    "model_id": e.model_id,
                    "stage": e.stage,
                    "message": e.message,
                }
                for e in report.errors
            ],
            "aggregates": [_aggregate_to_doc(a) for a in report.aggregates],
            "artifacts": list(report.artifacts),
        },
    }


def report_from_doc(doc: dict) -> EvalReport:
    if doc.get("format") != REPORT_FORMAT:
        raise DataFileError(
            f"not an evaluation report: format {doc.get('format')!r}"
        )
    r = doc["report"]
    report = EvalReport(
        step=int(r["step"]),
        collection=r["collection"],
        strategies=tuple(r["strategies"]),
        model_ids=tuple(r["model_ids"]),
        match_mode=r.get("match_mode"),
        aggregation=r.get("aggregation", "macro"),
        per_principle_count=r.get("per_principle_count"),
        created_at=r["created_at"],
        case_scores=[_score_from_doc(d) for d in r.get("case_scores", [])],
        errors=[EvalErrorRecord(**e) for e in r.get("errors", [])],
        aggregates=[AggregateRow(**a) for a in r.get("aggregates", [])],
        artifacts=list(r.get("artifacts", [])),
    )
    report.verify()
    return report


def _format_cell(value) -> str:
    return "" if value is None else str(value)


def export_report(report: EvalReport, path: Path | str, fmt: str = "json") -> Path:
    """Write the report; the stored aggregates are re-verified first."""
    report.verify()
    path = Path(path)
    try:
        if fmt == "json":
            path.write_text(
                json.dumps(
                    report_to_doc(report), indent=1, sort_keys=True, ensure_ascii=False
                )
                + "\n",
                encoding="utf-8",
            )
        elif fmt == "csv":
            with path.open("w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for s in report.case_scores:
                    writer.writerow(
                        [
                            s.case_id,
                            s.strategy,
                            s.model_id,
                            _format_cell(s.principle_number),
                            _format_cell(s.recall),
                            _format_cell(s.precision),
                            _format_cell(s.similarity),
                            s.generated_count,
                            s.parameter_count,
                            s.reference_count,
                            s.matched_generated_count,
                            ";".join(f"{i}-{w}" for i, w in s.matched),
                        ]
                    )
        else:
            raise UsageError(f"unknown report format {fmt!r} (json or csv)")
    except OSError as exc:
        raise DataFileError(f"cannot write report to {path}: {exc}") from exc
    return path


def load_report(path: Path | str) -> EvalReport:
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFileError(f"cannot read report {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataFileError(f"report {path} is not valid JSON: {exc.msg}") from exc
    return report_from_doc(doc)


def load_scores_csv(path: Path | str) -> list[CaseScore]:
    """Re-import a CSV export; aggregates recompute from the result."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise DataFileError(
                    f"report CSV {path} has unexpected columns {reader.fieldnames}"
                )
            scores = []
            for row in reader:
                matched = [
                    tuple(int(n) for n in token.split("-"))
                    for token in row["matched"].split(";")
                    if token
                ]
                scores.append(
                    CaseScore(
                        case_id=row["case_id"],
                        strategy=row["strategy"],
                        model_id=row["model_id"],
                        principle_number=(
                            int(row["principle"]) if row["principle"] else None
                        ),
                        recall=float(row["recall"]) if row["recall"] else None,
                        precision=float(row["precision"]) if row["precision"] else None,
                        similarity=(
                            float(row["similarity"]) if row["similarity"] else None
                        ),
                        generated_count=int(row["generated_count"]),
                        parameter_count=int(row["parameter_count"]),
                        reference_count=int(row["reference_count"]),
                        matched_generated_count=int(row["matched_generated_count"]),
                        matched=PairSet.of(matched),
                    )
                )
            return scores
    except OSError as exc:
        raise DataFileError(f"cannot read report CSV {path}: {exc}") from exc


def export_plot_data(report: EvalReport, out_dir: Path | str) -> list[Path]:
    """Emit plot-ready point data (per-case dots / violin rows) and record
    the filenames on the report."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []
    if report.step == 3:
        target = out_dir / "dots.csv"
        columns = ("case_id", "strategy", "model_id", "recall", "precision")
        rows = [
            (s.case_id, s.strategy, s.model_id, s.recall, s.precision)
            for s in report.case_scores
        ]
    else:
        target = out_dir / "violin.csv"
        columns = ("case_id", "strategy", "model_id", "principle", "similarity")
        rows = [
            (s.case_id, s.strategy, s.model_id, s.principle_number, s.similarity)
            for s in report.case_scores
        ]
    try:
        with target.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            writer.writerows(rows)
    except OSError as exc:
        raise DataFileError(f"cannot write plot data to {target}: {exc}") from exc
    paths.append(target)
    if target.name not in report.artifacts:
        report.artifacts.append(target.name)
    return paths
