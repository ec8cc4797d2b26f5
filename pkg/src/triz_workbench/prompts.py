"""Prompt rendering for the four workflow steps.

Templates are plain text files under ``templates/``: one per step for
Steps 1 and 2, one per strategy for Steps 3 and 4, plus the learning
shots under ``templates/shots/step{3,4}/``. File format: leading lines
starting with ``#`` are a comment header the loader strips (followed by
one optional blank separator line); everything after is the body,
byte-for-byte, minus the file's single trailing newline.

Placeholder grammar: ``[UPPER_SNAKE]`` tokens. Caller-facing placeholders
are [CASE_DESCRIPTION], [TRIZ_PARAMETERS], [PROBLEM_PARAMETERS_SELECTED],
and [INVENTIVE_PRINCIPLES]. [FEW_SHOT_EXAMPLES] is reserved: the engine
binds it from the shot files, joined by blank lines, before caller
bindings are applied. Substitution happens in one pass, so binding values
containing bracketed tokens pass through untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional

from .cases import ProblemDescription
from .errors import DataFileError, PromptError, UsageError

PLACEHOLDER_RE = re.compile(r"\[([A-Z][A-Z0-9_]*)\]")
ENGINE_BOUND = {"FEW_SHOT_EXAMPLES"}
SHOT_COUNT = 3


class PromptStrategy(str, Enum):
    BASIC = "basic"
    CHAIN_OF_THOUGHT = "cot"
    FEW_SHOT = "few-shot"
    COT_FEW_SHOT = "cot-few-shot"

    @property
    def template_name(self) -> str:
        return {
            PromptStrategy.BASIC: "basic",
            PromptStrategy.CHAIN_OF_THOUGHT: "chain_of_thought",
            PromptStrategy.FEW_SHOT: "few_shot",
            PromptStrategy.COT_FEW_SHOT: "cot_few_shot",
        }[self]

    @property
    def uses_shots(self) -> bool:
        return self in (PromptStrategy.FEW_SHOT, PromptStrategy.COT_FEW_SHOT)


def default_strategy(step: int) -> PromptStrategy:
    """The strategy each generating step runs with unless overridden."""
    if step == 3:
        return PromptStrategy.CHAIN_OF_THOUGHT
    if step == 4:
        return PromptStrategy.FEW_SHOT
    raise UsageError(f"step {step} has no strategy choice; only steps 3 and 4 do")


@dataclass(frozen=True)
class Step3Payload:
    improving_number: int
    improving_name: str
    worsening_number: int
    worsening_name: str
    explanation: str


@dataclass(frozen=True)
class Step4Payload:
    principle_number: int
    principle_name: str
    solution: str


@dataclass(frozen=True)
class FewShotExample:
    step: int
    case_id: str
    problem: ProblemDescription
    payload: Step3Payload | Step4Payload
    body: str  # exact text inserted into the prompt


@dataclass(frozen=True)
class PromptTemplate:
    step: int
    strategy: Optional[PromptStrategy]
    body: str

    def placeholders(self) -> set[str]:
        return set(PLACEHOLDER_RE.findall(self.body))


def _split_header(raw: str) -> str:
    """Drop the leading comment header and its blank separator line."""
    lines = raw.split("\n")
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        i += 1
    if i < len(lines) and lines[i] == "":
        i += 1
    body = "\n".join(lines[i:])
    if body.endswith("\n"):
        body = body[:-1]
    return body


_SHOT_LABELS = {
    "Problem Scenario": "scenario",
    "Current State": "current_state",
    "Pain Point": "pain_point",
    "Requirement": "requirement",
}


def _parse_shot(step: int, case_id: str, body: str) -> FewShotExample:
    fields: dict[str, str] = {}
    for line in body.split("\n"):
        label, _, rest = line.partition(":")
        if label in _SHOT_LABELS:
            fields[_SHOT_LABELS[label]] = rest.strip()
        elif label in (
            "Improving",
            "Worsening",
            "Explanation",
            "Inventive Principle",
            "Concrete Solutions",
        ):
            fields[label] = rest.strip()
    problem = ProblemDescription(
        scenario=fields.get("scenario", ""),
        current_state=fields.get("current_state", ""),
        pain_point=fields.get("pain_point", ""),
        requirement=fields.get("requirement", ""),
    )
    payload: Step3Payload | Step4Payload
    if step == 3:
        imp_num, imp_name = _split_numbered(fields.get("Improving", ""))
        wor_num, wor_name = _split_numbered(fields.get("Worsening", ""))
        payload = Step3Payload(
            improving_number=imp_num,
            improving_name=imp_name,
            worsening_number=wor_num,
            worsening_name=wor_name,
            explanation=fields.get("Explanation", ""),
        )
    else:
        label = fields.get("Inventive Principle", "")
        num_text, _, name = label.partition("-")
        payload = Step4Payload(
            principle_number=int(num_text),
            principle_name=name,
            solution=fields.get("Concrete Solutions", ""),
        )
    return FewShotExample(
        step=step, case_id=case_id, problem=problem, payload=payload, body=body
    )


def _split_numbered(text: str) -> tuple[int, str]:
    """'39. Productivity' -> (39, 'Productivity')."""
    num_text, _, name = text.partition(".")
    return int(num_text), name.strip()


def _shot_case_id(raw: str) -> str:
    m = re.search(r"^# case: (\S+)", raw, flags=re.M)
    if not m:
        raise DataFileError("shot file lacks a '# case: <id>' header line")
    return m.group(1)


class PromptEngine:
    """Loads the template tree once and renders prompts from it."""

    def __init__(self, templates_dir: Path | None = None):
        root = templates_dir or Path(
            str(resources.files("triz_workbench"))
        ) / "templates"
        self._templates: dict[tuple[int, Optional[PromptStrategy]], PromptTemplate] = {}
        self._shots: dict[int, list[FewShotExample]] = {}

        for step in (1, 2):
            body = self._read(root / f"step{step}" / "base.txt")
            self._templates[(step, None)] = PromptTemplate(step, None, body)
        for step in (3, 4):
            for strategy in PromptStrategy:
                body = self._read(
                    root / f"step{step}" / f"{strategy.template_name}.txt"
                )
                self._templates[(step, strategy)] = PromptTemplate(
                    step, strategy, body
                )
            shots = []
            for i in range(1, SHOT_COUNT + 1):
                path = root / "shots" / f"step{step}" / f"{i}.txt"
                raw = self._read_raw(path)
                shots.append(_parse_shot(step, _shot_case_id(raw), _split_header(raw)))
            self._shots[step] = shots

    @staticmethod
    def _read_raw(path: Path) -> str:
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataFileError(f"cannot read template {path}: {exc}") from exc

    def _read(self, path: Path) -> str:
        return _split_header(self._read_raw(path))

    def template(
        self, step: int, strategy: Optional[PromptStrategy] = None
    ) -> PromptTemplate:
        self._check_step_strategy(step, strategy)
        return self._templates[(step, strategy)]

    def list_shots(self, step: int) -> list[FewShotExample]:
        if step not in (3, 4):
            raise UsageError(f"step {step} has no learning shots; only steps 3 and 4 do")
        return list(self._shots[step])

    def render(
        self,
        step: int,
        strategy: Optional[PromptStrategy] = None,
        bindings: dict[str, str] | None = None,
    ) -> str:
        """Substitute bindings into the selected template, byte-faithfully."""
        template = self.template(step, strategy)
        bindings = dict(bindings or {})

        text = template.body
        if strategy is not None and strategy.uses_shots:
            shots_text = "\n\n".join(s.body for s in self._shots[step])
            text = self._substitute(text, {"FEW_SHOT_EXAMPLES": shots_text})

        needed = set(PLACEHOLDER_RE.findall(text))
        for name in sorted(needed):
            if name not in bindings:
                raise PromptError(f"placeholder [{name}] is unbound")
            if not bindings[name].strip():
                raise PromptError(f"placeholder [{name}] bound to empty text")
        for name in bindings:
            if name in ENGINE_BOUND:
                raise PromptError(f"placeholder [{name}] is bound by the engine")
        return self._substitute(text, bindings)

    @staticmethod
    def _substitute(text: str, bindings: dict[str, str]) -> str:
        # Single-pass callback substitution: values are never rescanned,
        # so binding text containing [TOKENS] survives verbatim.
        def repl(match: re.Match) -> str:
            name = match.group(1)
            return bindings.get(name, match.group(0))

        return PLACEHOLDER_RE.sub(repl, text)

    @staticmethod
    def _check_step_strategy(step: int, strategy: Optional[PromptStrategy]) -> None:
        if step not in (1, 2, 3, 4):
            raise UsageError(f"step must be 1..4, got {step}")
        if step in (1, 2) and strategy is not None:
            raise UsageError(f"step {step} has a single template; no strategy applies")
        if step in (3, 4) and strategy is None:
            raise UsageError(f"step {step} requires a strategy")


_default_engine: PromptEngine | None = None


def default_engine() -> PromptEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = PromptEngine()
    return _default_engine
