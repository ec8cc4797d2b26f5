"""The four-step session state machine.

A session walks Problem -> parameters -> TRIZ parameters -> contradictions
-> principles -> solutions, with a designer checkpoint between every step:
each ``run_step*`` takes the human-confirmed selection from the previous
output, never the raw model text.

States move strictly forward, with one sanctioned loop: after solutions
are generated the designer may return to ``recommend_principles`` and
address another contradiction pair. Any operation called in a state it is
not legal in raises SessionStateError without touching the session.

The output parsers in this module are total functions: arbitrary model
text never raises, it degrades to unresolved entries the designer can fix
or discard at the next checkpoint. Number extraction follows a fixed
precedence: an explicit number in the text, then an exact parameter-name
match, then a fuzzy one, then unresolved.
"""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .cases import ProblemDescription
from .config import WorkflowConfig
from .errors import (
    AmbiguousNameError,
    CaseValidationError,
    DataFileError,
    EmptyStepOutputError,
    GatewayError,
    SessionNotFoundError,
    SessionStateError,
    StaleVersionError,
    UsageError,
)
from .gateway import ChatRequest, Gateway
from .knowledge import PARAMETER_COUNT, KnowledgeBase, default_knowledge_base
from .prompts import PromptEngine, PromptStrategy, default_engine, default_strategy

SESSION_FORMAT = "triz-session"
SESSION_SCHEMA_VERSION = 1


class SessionState(str, Enum):
    PROBLEM_ENTERED = "ProblemEntered"
    PARAMETERS_EXTRACTED = "ParametersExtracted"
    PARAMETERS_MAPPED = "ParametersMapped"
    CONTRADICTIONS_ANALYZED = "ContradictionsAnalyzed"
    PRINCIPLES_CHOSEN = "PrinciplesChosen"
    SOLUTIONS_GENERATED = "SolutionsGenerated"


@dataclass(frozen=True)
class ProblemParameter:
    ordinal: int
    name: str
    explanation: str = ""


@dataclass(frozen=True)
class TrizMapping:
    source: ProblemParameter
    triz_number: Optional[int]
    triz_name: str  # as the model emitted it
    resolved: bool


@dataclass(frozen=True)
class ContradictionRelation:
    improving_number: Optional[int]
    improving_name: str
    worsening_number: Optional[int]
    worsening_name: str
    explanation: str = ""
    complete: bool = False

    def pair(self) -> tuple[int, int]:
        if not self.complete:
            raise UsageError("relation is incomplete; no (improving, worsening) pair")
        return (self.improving_number, self.worsening_number)


@dataclass(frozen=True)
class Solution:
    principle_number: int
    text: str
    generation_index: int
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class StepErrorRecord:
    step: int
    tag: str
    message: str


@dataclass
class Session:
    id: str
    problem: ProblemDescription
    model_id: str
    state: SessionState = SessionState.PROBLEM_ENTERED
    step1_output: list[ProblemParameter] = field(default_factory=list)
    step2_output: list[TrizMapping] = field(default_factory=list)
    selected_triz_parameters: list[int] = field(default_factory=list)
    step3_output: list[ContradictionRelation] = field(default_factory=list)
    selected_contradiction: Optional[ContradictionRelation] = None
    recommended_principles: list[int] = field(default_factory=list)
    selected_principles: list[int] = field(default_factory=list)
    solutions: list[Solution] = field(default_factory=list)
    strategy_choices: dict[int, str] = field(default_factory=dict)
    transcript_ids: list[str] = field(default_factory=list)
    step_errors: list[StepErrorRecord] = field(default_factory=list)
    version: int = 0


def request_tag(
    session_id: str, step: int, strategy: Optional[PromptStrategy], model: str,
    gen: Optional[int] = None,
) -> str:
    parts = [session_id, f"step{step}", strategy.value if strategy else "none", model]
    if gen is not None:
        parts.append(f"gen{gen}")
    return ":".join(parts)


# -- parsing -----------------------------------------------------------------

_PAREN_NUM = re.compile(r"\((\d{1,3})\)")
_LEAD_NUM = re.compile(r"^\s*(\d{1,3})\s*[.):]\s*")
_BULLET = re.compile(r"^\s*[-*•]\s*")
_MARKUP = re.compile(r"[*_`]")

_IMPROVING_LABEL = re.compile(
    r"^\s*(?:\d{1,3}\s*[.)]\s*)?(?:improved|improving)(?:\s+\w+){0,2}?\s*[:\-]\s*(.*)$",
    re.IGNORECASE,
)
_WORSENING_LABEL = re.compile(
    r"^\s*(?:\d{1,3}\s*[.)]\s*)?(?:worsened|worsening)(?:\s+\w+){0,2}?\s*[:\-]\s*(.*)$",
    re.IGNORECASE,
)
_EXPLANATION_LABEL = re.compile(
    r"^\s*(?:\d{1,3}\s*[.)]\s*)?explanation\s*[:\-]\s*(.*)$", re.IGNORECASE
)
_INLINE_WORSENING = re.compile(
    r"[,;.]?\s*(?:worsened|worsening)(?:\s+\w+){0,2}?\s*[:\-]", re.IGNORECASE
)


def _clean_name(text: str) -> str:
    text = _MARKUP.sub("", text)
    text = _PAREN_NUM.sub("", text)
    text = _LEAD_NUM.sub("", text)
    return text.strip(" .,:;\t")


def extract_parameter_mention(
    text: str, kb: KnowledgeBase
) -> tuple[Optional[int], str]:
    """(number, name-as-emitted) for one parameter mention.

    Precedence: explicit number (parenthesized, else leading "N.") wins;
    otherwise the emitted name is resolved exactly, then fuzzily; a
    failed or ambiguous resolution leaves the number None.
    """
    name = _clean_name(text)
    number: Optional[int] = None
    m = _PAREN_NUM.search(text)
    if m is None:
        m = _LEAD_NUM.match(_MARKUP.sub("", text).strip())
    if m is not None:
        candidate = int(m.group(1))
        if 1 <= candidate <= PARAMETER_COUNT:
            number = candidate
    if number is None and name:
        try:
            hit = kb.parameter_by_name(name, fuzzy=True)
        except AmbiguousNameError:
            hit = None
        if hit is not None:
            number = hit.number
    return number, name


_STEP1_LABELED = re.compile(
    r"parameter\s+number\s*[:\-]?\s*(\d{1,3})\s*[,;]?\s*"
    r"parameter\s+name\s*[:\-]?\s*(.+?)\s*[,;]?\s*"
    r"parameter\s+explanation\s*[:\-]?\s*(.+)$",
    re.IGNORECASE,
)
_NAME_EXPL_SPLIT = re.compile(r"\s*(?::|-{1,2}|–|—)\s+")


def parse_problem_parameters(text: str) -> list[ProblemParameter]:
    """Step-1 output -> problem parameters. Total: junk lines degrade to
    raw entries instead of raising."""
    entries: list[ProblemParameter] = []
    for raw_line in text.split("\n"):
        line = _MARKUP.sub("", raw_line).strip()
        if not line:
            continue
        labeled = _STEP1_LABELED.search(line)
        if labeled:
            entries.append(
                ProblemParameter(
                    ordinal=int(labeled.group(1)),
                    name=labeled.group(2).strip(),
                    explanation=labeled.group(3).strip(),
                )
            )
            continue
        lead = _LEAD_NUM.match(line)
        if lead:
            rest = line[lead.end() :].strip()
            parts = _NAME_EXPL_SPLIT.split(rest, maxsplit=1)
            name = parts[0].strip()
            explanation = parts[1].strip() if len(parts) > 1 else ""
            if name:
                entries.append(
                    ProblemParameter(int(lead.group(1)), name, explanation)
                )
                continue
        if entries and raw_line.startswith((" ", "\t")):
            # indented continuation extends the previous explanation
            prev = entries[-1]
            joined = f"{prev.explanation} {line}".strip()
            entries[-1] = ProblemParameter(prev.ordinal, prev.name, joined)
            continue
        # degradation contract: keep the line, let the designer discard it
        entries.append(ProblemParameter(len(entries) + 1, line, ""))
    return entries


def parse_mappings(
    text: str, sources: Sequence[ProblemParameter], kb: KnowledgeBase
) -> list[TrizMapping]:
    """Step-2 output -> TRIZ mappings, paired positionally with sources.

    A line counts as a mapping when it carries an explicit number, a
    resolvable name, or any list-marker shape. When both a number and a
    name are present and the name resolves to a different parameter, the
    mapping is left unresolved for the designer to settle. Resolved
    duplicates by triz_number collapse to the first occurrence.
    """
    candidates: list[tuple[Optional[int], str, bool]] = []
    for raw_line in text.split("\n"):
        line = raw_line.strip()
        if not line:
            continue
        has_marker = bool(
            _BULLET.match(line)
            or _LEAD_NUM.match(_MARKUP.sub("", line))
            or "->" in line
            or "→" in line
        )
        # a mapping refers to the part after an arrow, when one is present
        tail = re.split(r"->|→", line)[-1]
        number, name = extract_parameter_mention(tail, kb)
        if number is None and not name:
            continue
        if number is None and not has_marker:
            # prose line with no number: only keep it if the name resolves
            if kb_safe_lookup(kb, name) is None:
                continue
        resolved = number is not None
        if resolved and name:
            named = kb_safe_lookup(kb, name)
            if named is not None and named.number != number:
                resolved = False  # number/name conflict needs a human
        candidates.append((number, name, resolved))

    mappings: list[TrizMapping] = []
    seen_numbers: set[int] = set()
    for i, (number, name, resolved) in enumerate(candidates):
        if i >= len(sources):
            break  # model emitted more lines than sources; extras dropped
        if resolved and number in seen_numbers:
            continue  # dedup: only duplicates are removed
        if resolved:
            seen_numbers.add(number)
        mappings.append(
            TrizMapping(
                source=sources[i], triz_number=number, triz_name=name,
                resolved=resolved,
            )
        )
    return mappings


def kb_safe_lookup(kb: KnowledgeBase, name: str):
    """Fuzzy parameter lookup that treats ambiguity/blank as a miss."""
    if not name or not name.strip():
        return None
    try:
        return kb.parameter_by_name(name, fuzzy=True)
    except AmbiguousNameError:
        return None


def parse_contradictions(
    text: str, kb: KnowledgeBase | None = None
) -> list[ContradictionRelation]:
    """Step-3 output -> contradiction relations. Total on arbitrary text.

    Understands labeled fields (Improved/Worsened Parameter, in either
    order), numbered items, and bare "Name (n) ... Name (m)" lines. Names
    without numbers resolve through the knowledge base; failures yield
    complete=false entries rather than errors.
    """
    kb = kb or default_knowledge_base()
    relations: list[ContradictionRelation] = []
    current: dict[str, Optional[str]] = {"imp": None, "wor": None}
    explanation: list[str] = []
    in_explanation = False

    def flush():
        nonlocal current, explanation, in_explanation
        if current["imp"] is None and current["wor"] is None:
            current = {"imp": None, "wor": None}
            explanation = []
            in_explanation = False
            return
        imp_num, imp_name = (
            extract_parameter_mention(current["imp"], kb)
            if current["imp"]
            else (None, "")
        )
        wor_num, wor_name = (
            extract_parameter_mention(current["wor"], kb)
            if current["wor"]
            else (None, "")
        )
        complete = (
            imp_num is not None and wor_num is not None and imp_num != wor_num
        )
        relations.append(
            ContradictionRelation(
                improving_number=imp_num,
                improving_name=imp_name,
                worsening_number=wor_num,
                worsening_name=wor_name,
                explanation=" ".join(explanation).strip(),
                complete=complete,
            )
        )
        current = {"imp": None, "wor": None}
        explanation = []
        in_explanation = False

    for raw_line in text.split("\n"):
        line = _MARKUP.sub("", raw_line).rstrip()
        if not line.strip():
            continue

        imp_match = _IMPROVING_LABEL.match(line)
        if imp_match:
            value = imp_match.group(1)
            inline = _INLINE_WORSENING.search(value)
            if current["imp"] is not None:
                flush()
            if inline:
                current["imp"] = value[: inline.start()]
                tail = value[inline.end() :]
                current["wor"] = tail
                in_explanation = False
            else:
                current["imp"] = value
                in_explanation = False
            continue

        wor_match = _WORSENING_LABEL.match(line)
        if wor_match:
            if current["wor"] is not None:
                flush()
            current["wor"] = wor_match.group(1)
            in_explanation = False
            continue

        expl_match = _EXPLANATION_LABEL.match(line)
        if expl_match:
            explanation.append(expl_match.group(1).strip())
            in_explanation = True
            continue

        # bare "A (n) vs B (m)" form, only outside a labeled item
        if current["imp"] is None and current["wor"] is None:
            nums = _PAREN_NUM.findall(line)
            if len(nums) >= 2:
                first, second = line.split("(" + nums[0] + ")", 1)
                current["imp"] = f"{first} ({nums[0]})"
                current["wor"] = second
                flush()
                continue

        if in_explanation:
            explanation.append(line.strip())

    flush()
    return relations


def dedup_relations(
    relations: Sequence[ContradictionRelation],
) -> list[ContradictionRelation]:
    """Drop repeats of the same (improving, worsening) pair, keeping the
    first explanation. Incomplete relations dedup by emitted names."""
    seen: set = set()
    out: list[ContradictionRelation] = []
    for rel in relations:
        if rel.complete:
            key = ("pair", rel.improving_number, rel.worsening_number)
        else:
            key = ("names", rel.improving_name.lower(), rel.worsening_name.lower())
        if key in seen:
            continue
        seen.add(key)
        out.append(rel)
    return out


_SOLUTION_PREFIX = re.compile(r"^\s*concrete\s+solutions?\s*[:\-]\s*", re.IGNORECASE)


def parse_solution_text(text: str) -> str:
    return _SOLUTION_PREFIX.sub("", text.strip(), count=1).strip()


# -- persistence -------------------------------------------------------------


def _session_to_doc(session: Session) -> dict:
    doc = asdict(session)
    doc["state"] = session.state.value
    doc["problem"] = asdict(session.problem)
    doc["strategy_choices"] = {str(k): v for k, v in session.strategy_choices.items()}
    if session.selected_contradiction is not None:
        doc["selected_contradiction"] = asdict(session.selected_contradiction)
    return {
        "format": SESSION_FORMAT,
        "version": SESSION_SCHEMA_VERSION,
        "session": doc,
    }


def _session_from_doc(doc: dict) -> Session:
    if doc.get("format") != SESSION_FORMAT:
        raise DataFileError(f"not a session document: format {doc.get('format')!r}")
    s = doc["session"]
    return Session(
        id=s["id"],
        problem=ProblemDescription(**s["problem"]),
        model_id=s["model_id"],
        state=SessionState(s["state"]),
        step1_output=[ProblemParameter(**p) for p in s["step1_output"]],
        step2_output=[
            TrizMapping(
                source=ProblemParameter(**m["source"]),
                triz_number=m["triz_number"],
                triz_name=m["triz_name"],
                resolved=m["resolved"],
            )
            for m in s["step2_output"]
        ],
        selected_triz_parameters=list(s["selected_triz_parameters"]),
        step3_output=[ContradictionRelation(**r) for r in s["step3_output"]],
        selected_contradiction=(
            ContradictionRelation(**s["selected_contradiction"])
            if s.get("selected_contradiction")
            else None
        ),
        recommended_principles=list(s["recommended_principles"]),
        selected_principles=list(s["selected_principles"]),
        solutions=[
            Solution(
                principle_number=sol["principle_number"],
                text=sol["text"],
                generation_index=sol["generation_index"],
                keywords=tuple(sol.get("keywords", ())),
            )
            for sol in s["solutions"]
        ],
        strategy_choices={int(k): v for k, v in s["strategy_choices"].items()},
        transcript_ids=list(s["transcript_ids"]),
        step_errors=[StepErrorRecord(**e) for e in s.get("step_errors", [])],
        version=int(s["version"]),
    )


class SessionStore:
    """One JSON document per session, optimistic version check on save."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def save(self, session: Session) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(session.id)
        if path.exists():
            on_disk = json.loads(path.read_text(encoding="utf-8"))
            disk_version = int(on_disk["session"]["version"])
            if disk_version != session.version:
                raise StaleVersionError(expected=session.version, actual=disk_version)
        session.version += 1
        doc = _session_to_doc(session)
        path.write_text(
            json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return path

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.exists():
            raise SessionNotFoundError(f"no session {session_id!r} under {self.root}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFileError(f"session file {path} unreadable: {exc}") from exc
        return _session_from_doc(doc)

    def list_ids(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(p.stem for p in self.root.glob("*.json"))


# -- the workflow ------------------------------------------------------------


class TrizWorkflow:
    """Orchestrates the four steps over a gateway, knowledge base, and
    prompt engine. Holds no per-session state itself."""

    def __init__(
        self,
        gateway: Gateway,
        kb: KnowledgeBase | None = None,
        engine: PromptEngine | None = None,
        config: WorkflowConfig | None = None,
        store: SessionStore | None = None,
    ):
        self.gateway = gateway
        self.kb = kb or default_knowledge_base()
        self.engine = engine or default_engine()
        self.config = config or WorkflowConfig()
        self.store = store

    # -- lifecycle ---------------------------------------------------------

    def start_session(
        self,
        problem: ProblemDescription,
        model_id: str | None = None,
        session_id: str | None = None,
    ) -> Session:
        missing = [k for k, v in problem.fields().items() if not v.strip()]
        if missing:
            raise CaseValidationError(
                "problem description incomplete",
                [f"empty field: {label}" for label in missing],
            )
        session = Session(
            id=session_id or uuid.uuid4().hex[:12],
            problem=problem,
            model_id=model_id or self.gateway.config.chat_model,
        )
        if self.store is not None:
            self.store.save(session)
        return session

    def save_session(self, session: Session) -> Path:
        if self.store is None:
            raise UsageError("no session store configured")
        return self.store.save(session)

    def load_session(self, session_id: str) -> Session:
        if self.store is None:
            raise UsageError("no session store configured")
        return self.store.load(session_id)

    # -- steps --------------------------------------------------------------

    def run_step1(self, session: Session) -> list[ProblemParameter]:
        _require_state(session, "run_step1", SessionState.PROBLEM_ENTERED)
        prompt = self.engine.render(
            1, bindings={"CASE_DESCRIPTION": session.problem.as_prompt_text()}
        )
        response = self._chat(session, step=1, strategy=None, prompt=prompt)
        parsed = parse_problem_parameters(response.text)
        session.step1_output = parsed
        session.transcript_ids.append(response.transcript_id)
        session.state = SessionState.PARAMETERS_EXTRACTED
        return parsed

    def run_step2(
        self, session: Session, selected: Sequence[ProblemParameter]
    ) -> list[TrizMapping]:
        _require_state(session, "run_step2", SessionState.PARAMETERS_EXTRACTED)
        if not selected:
            raise UsageError("run_step2 requires a non-empty parameter selection")
        for p in selected:
            if p not in session.step1_output:
                raise UsageError(
                    f"selected parameter {p.name!r} is not part of the Step-1 output"
                )
        listing = "\n".join(
            f"{p.ordinal}. {p.name}" + (f": {p.explanation}" if p.explanation else "")
            for p in selected
        )
        prompt = self.engine.render(
            2, bindings={"PROBLEM_PARAMETERS_SELECTED": listing}
        )
        response = self._chat(session, step=2, strategy=None, prompt=prompt)
        mappings = parse_mappings(response.text, selected, self.kb)
        session.step2_output = mappings
        session.transcript_ids.append(response.transcript_id)
        session.state = SessionState.PARAMETERS_MAPPED
        return mappings

    def run_step3(
        self,
        session: Session,
        selected_numbers: Sequence[int],
        strategy: PromptStrategy | None = None,
    ) -> list[ContradictionRelation]:
        _require_state(session, "run_step3", SessionState.PARAMETERS_MAPPED)
        strategy = strategy or default_strategy(3)
        numbers = list(selected_numbers)
        if len(numbers) < 2:
            raise UsageError("run_step3 needs at least two TRIZ parameters")
        resolved = {m.triz_number for m in session.step2_output if m.resolved}
        for n in numbers:
            self.kb.parameter_by_number(n)
            if n not in resolved:
                raise UsageError(
                    f"TRIZ parameter {n} was not among the resolved Step-2 mappings"
                )
        listing = "\n".join(
            f"{n}. {self.kb.parameter_by_number(n).name}" for n in numbers
        )
        prompt = self.engine.render(
            3,
            strategy,
            bindings={
                "CASE_DESCRIPTION": session.problem.as_prompt_text(),
                "TRIZ_PARAMETERS": listing,
            },
        )
        response = self._chat(session, step=3, strategy=strategy, prompt=prompt)
        relations = dedup_relations(parse_contradictions(response.text, self.kb))
        if not relations:
            raise EmptyStepOutputError(
                "no contradictory relations could be parsed from the Step-3 "
                "output; retry, or try another prompt strategy"
            )
        session.selected_triz_parameters = numbers
        session.step3_output = relations
        session.transcript_ids.append(response.transcript_id)
        session.strategy_choices[3] = strategy.value
        session.state = SessionState.CONTRADICTIONS_ANALYZED
        return relations

    def recommend_principles(
        self,
        session: Session,
        chosen: ContradictionRelation,
        selected_principles: Sequence[int] | None = None,
    ) -> list[int]:
        # SolutionsGenerated is legal here: the designer loops back to
        # address another contradiction pair
        _require_state(
            session,
            "recommend_principles",
            SessionState.CONTRADICTIONS_ANALYZED,
            SessionState.SOLUTIONS_GENERATED,
        )
        if chosen not in session.step3_output:
            raise UsageError("chosen relation is not part of the Step-3 output")
        if not chosen.complete:
            raise UsageError(
                "chosen relation lacks resolved parameter numbers; resolve "
                "them before asking for principles"
            )
        improving, worsening = chosen.pair()
        recommendations = [
            p.number for p in self.kb.matrix_lookup(improving, worsening)
        ]
        session.selected_contradiction = chosen
        session.recommended_principles = recommendations

        final = list(selected_principles) if selected_principles is not None else list(
            recommendations
        )
        for n in final:
            self.kb.principle_by_number(n)  # manual entries must still be real
        if final:
            session.selected_principles = final
            session.state = SessionState.PRINCIPLES_CHOSEN
        # empty cell and no manual entry: state unchanged, designer decides
        return recommendations

    def run_step4(
        self,
        session: Session,
        principle: int,
        strategy: PromptStrategy | None = None,
        count: int | None = None,
    ) -> list[Solution]:
        _require_state(
            session,
            "run_step4",
            SessionState.PRINCIPLES_CHOSEN,
            SessionState.SOLUTIONS_GENERATED,
        )
        strategy = strategy or default_strategy(4)
        count = self.config.solution_count if count is None else count
        if count < 1:
            raise UsageError("run_step4 count must be at least 1")
        if principle not in session.selected_principles:
            raise UsageError(
                f"principle {principle} is not among the selected principles"
            )
        label = self.kb.principle_by_number(principle).label()
        prompt = self.engine.render(
            4,
            strategy,
            bindings={
                "CASE_DESCRIPTION": session.problem.as_prompt_text(),
                "INVENTIVE_PRINCIPLES": f"Inventive Principle: {label}",
            },
        )
        start_index = len(session.solutions)
        new_solutions: list[Solution] = []
        errors: list[StepErrorRecord] = []
        last_exc: Exception | None = None
        transcripts: list[str] = []
        for i in range(count):
            tag = request_tag(
                session.id, 4, strategy, session.model_id, gen=start_index + i
            )
            try:
                response = self.gateway.chat(
                    ChatRequest(
                        model_id=session.model_id,
                        user_message=prompt,
                        temperature=self.config.temperatures[4],
                        max_output_tokens=self.config.max_output_tokens,
                        request_tag=tag,
                    )
                )
            except GatewayError as exc:
                errors.append(StepErrorRecord(step=4, tag=tag, message=str(exc)))
                last_exc = exc
                continue
            text = parse_solution_text(response.text)
            if not text:
                errors.append(
                    StepErrorRecord(step=4, tag=tag, message="empty solution text")
                )
                continue
            transcripts.append(response.transcript_id)
            new_solutions.append(
                Solution(
                    principle_number=principle,
                    text=text,
                    generation_index=start_index + i,
                )
            )
        if not new_solutions and last_exc is not None:
            raise last_exc
        if not new_solutions:
            raise EmptyStepOutputError(
                "all Step-4 generations came back empty; retry or change strategy"
            )
        session.solutions.extend(new_solutions)
        session.step_errors.extend(errors)
        session.transcript_ids.extend(transcripts)
        session.strategy_choices[4] = strategy.value
        session.state = SessionState.SOLUTIONS_GENERATED
        return new_solutions

    # -- internals -----------------------------------------------------------

    def _chat(self, session: Session, step: int, strategy, prompt: str):
        return self.gateway.chat(
            ChatRequest(
                model_id=session.model_id,
                user_message=prompt,
                temperature=self.config.temperatures[step],
                max_output_tokens=self.config.max_output_tokens,
                request_tag=request_tag(session.id, step, strategy, session.model_id),
            )
        )


def _require_state(session: Session, operation: str, *allowed: SessionState) -> None:
    if session.state not in allowed:
        raise SessionStateError(
            operation, session.state.value, tuple(s.value for s in allowed)
        )


# -- report export -----------------------------------------------------------


def export_session_report(session: Session, kb: KnowledgeBase | None = None) -> str:
    """Human-readable markdown account of a session, step by step."""
    kb = kb or default_knowledge_base()
    lines: list[str] = []
    lines.append(f"# TRIZ session {session.id}")
    lines.append("")
    lines.append(f"Model: {session.model_id}. State: {session.state.value}.")
    if session.strategy_choices:
        chosen = ", ".join(
            f"step {k}: {v}" for k, v in sorted(session.strategy_choices.items())
        )
        lines.append(f"Strategies: {chosen}.")
    lines.append("")
    lines.append("## Problem")
    lines.append("")
    lines.append(session.problem.as_prompt_text())

    if session.step1_output:
        lines.append("")
        lines.append("## Step 1: problem parameters")
        lines.append("")
        for p in session.step1_output:
            tail = f" - {p.explanation}" if p.explanation else ""
            lines.append(f"- {p.ordinal}. {p.name}{tail}")

    if session.step2_output:
        lines.append("")
        lines.append("## Step 2: TRIZ parameter mapping")
        lines.append("")
        for m in session.step2_output:
            if m.resolved:
                official = kb.parameter_by_number(m.triz_number).name
                lines.append(f"- {m.source.name} -> {m.triz_number}. {official}")
            else:
                shown = m.triz_name or "(unresolved)"
                lines.append(f"- {m.source.name} -> {shown} [unresolved]")

    if session.step3_output:
        lines.append("")
        lines.append("## Step 3: contradictory relations")
        lines.append("")
        for rel in session.step3_output:
            if rel.complete:
                imp = kb.parameter_by_number(rel.improving_number)
                wor = kb.parameter_by_number(rel.worsening_number)
                head = (
                    f"improving {imp.number}. {imp.name} / "
                    f"worsening {wor.number}. {wor.name}"
                )
            else:
                head = (
                    f"improving {rel.improving_name or '?'} / "
                    f"worsening {rel.worsening_name or '?'} [incomplete]"
                )
            lines.append(f"- {head}")
            if rel.explanation:
                lines.append(f"  {rel.explanation}")

    if session.selected_contradiction is not None:
        rel = session.selected_contradiction
        lines.append("")
        lines.append("## Chosen contradiction and principles")
        lines.append("")
        if rel.complete:
            lines.append(
                f"Pair: improving {rel.improving_number}, "
                f"worsening {rel.worsening_number}."
            )
        if session.recommended_principles:
            names = ", ".join(
                kb.principle_by_number(n).label()
                for n in session.recommended_principles
            )
            lines.append(f"Matrix recommends: {names}.")
        if session.selected_principles:
            names = ", ".join(
                kb.principle_by_number(n).label() for n in session.selected_principles
            )
            lines.append(f"Designer selected: {names}.")

    if session.solutions:
        lines.append("")
        lines.append("## Step 4: solutions")
        for sol in session.solutions:
            label = kb.principle_by_number(sol.principle_number).label()
            lines.append("")
            lines.append(f"### Solution {sol.generation_index + 1} ({label})")
            lines.append("")
            lines.append(sol.text)

    if session.step_errors:
        lines.append("")
        lines.append("## Recorded step errors")
        lines.append("")
        for err in session.step_errors:
            lines.append(f"- step {err.step} [{err.tag}]: {err.message}")

    lines.append("")
    return "\n".join(lines)
