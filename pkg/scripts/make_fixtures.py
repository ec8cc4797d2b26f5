"""Regenerate the committed test fixtures.

Run from the repository root:

    python scripts/make_fixtures.py

Outputs are deterministic; the test suite regenerates the same content in
a temp directory and byte-compares, so a drift between code and committed
fixtures fails loudly. Regenerate (and review the diff) after any
intentional change to templates, shots, or the seed cases.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from triz_workbench.cases import seed_cases  # noqa: E402
from triz_workbench.config import GatewayConfig  # noqa: E402
from triz_workbench.evaluation import (  # noqa: E402
    run_contradiction_eval,
    run_solution_eval,
)
from triz_workbench.gateway import FakeBackend, Gateway, TranscriptStore  # noqa: E402
from triz_workbench.knowledge import default_knowledge_base  # noqa: E402
from triz_workbench.prompts import PromptEngine, PromptStrategy  # noqa: E402
from triz_workbench.workflow import TrizWorkflow  # noqa: E402

GOLDEN = REPO / "tests" / "golden"


def golden_bindings() -> dict[str, str]:
    """Fixed bindings rendered into every golden prompt."""
    robot = seed_cases().case_by_id("in-pipe-robot")
    return {
        "CASE_DESCRIPTION": robot.problem.as_prompt_text(),
        "PROBLEM_PARAMETERS_SELECTED": (
            "1. Adaptability: the robot must conform to pipes of "
            "different diameters.\n"
            "2. Driving force: the traction the wheels can transmit."
        ),
        "TRIZ_PARAMETERS": (
            "35. Adaptability or Versatility\n"
            "10. Force\n"
            "33. Ease of Operation"
        ),
        "INVENTIVE_PRINCIPLES": (
            "1-Segmentation\n11-Beforehand cushioning"
        ),
    }


def write_golden_prompts() -> list[Path]:
    engine = PromptEngine()
    bindings = golden_bindings()
    out_dir = GOLDEN / "prompts"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, text: str) -> None:
        path = out_dir / name
        path.write_text(text + "\n", encoding="utf-8")
        written.append(path)

    for step in (1, 2):
        needed = engine.template(step).placeholders()
        emit(
            f"step{step}.txt",
            engine.render(step, bindings={k: bindings[k] for k in needed}),
        )
    for step in (3, 4):
        for strategy in PromptStrategy:
            needed = engine.template(step, strategy).placeholders() - {
                "FEW_SHOT_EXAMPLES"
            }
            emit(
                f"step{step}_{strategy.value}.txt",
                engine.render(
                    step, strategy, bindings={k: bindings[k] for k in needed}
                ),
            )
    return written


# -- replay transcripts -------------------------------------------------------
#
# Scripted model outputs for the seed evaluation cases. The texts follow
# the output shapes the parsers target (numbered Improved/Worsened blocks,
# "Concrete Solutions:" bodies); the scores they produce are hand-checked
# in tests/test_evaluation.py and must not drift.

_KB = default_knowledge_base()

STEP1_TEXTS = {
    "in-pipe-robot": (
        "1. Sensing accuracy - the robot must gauge its contact with the "
        "pipe wall precisely.\n"
        "2. Diameter adaptability - one chassis has to serve several pipe "
        "diameters.\n"
        "3. Assembly simplicity - the drive train should stay easy to "
        "build and service."
    ),
    "virtual-exhibition": (
        "1. Layout adaptability - every show needs a different floor "
        "plan.\n"
        "2. Platform stability - visitors expect the booked spaces to "
        "stay dependable.\n"
        "3. Lighting quality - exhibits must stay evenly lit across "
        "devices."
    ),
}

STEP2_TEXTS = {
    "in-pipe-robot": (
        "Sensing accuracy -> 37. Difficulty of Detecting and Measuring\n"
        "Diameter adaptability -> 35. Adaptability or Versatility\n"
        "Assembly simplicity -> 32. Ease of Manufacture"
    ),
    "virtual-exhibition": (
        "Layout adaptability -> 35. Adaptability or Versatility\n"
        "Platform stability -> 13. Stability of the Object\n"
        "Lighting quality -> 18. Illumination Intensity"
    ),
}

# Hand-scored against the seed references in tests/test_evaluation.py.
STEP3_PAIRS = {
    ("in-pipe-robot", "basic"): [(37, 35), (35, 37), (13, 39)],
    ("in-pipe-robot", "cot"): [(37, 35), (9, 35), (10, 35)],
    ("in-pipe-robot", "few-shot"): [(1, 2)],
    ("in-pipe-robot", "cot-few-shot"): [(37, 32), (5, 6)],
    ("virtual-exhibition", "basic"): [(35, 13), (36, 33)],
    ("virtual-exhibition", "cot"): [(33, 36), (35, 13), (18, 13)],
    ("virtual-exhibition", "few-shot"): [(35, 13), (1, 2)],
    ("virtual-exhibition", "cot-few-shot"): [(9, 10)],
}

_COT_PREAMBLE = (
    "Let us reason about how the listed parameters interact before "
    "naming the contradictions. Pushing any one of them further "
    "constrains the others, which yields the following contradictory "
    "relations:\n\n"
)


def step3_text(case_id: str, strategy: str) -> str:
    blocks = []
    for n, (imp, wor) in enumerate(STEP3_PAIRS[(case_id, strategy)], start=1):
        imp_name = _KB.parameter_by_number(imp).name
        wor_name = _KB.parameter_by_number(wor).name
        blocks.append(
            f"{n}. Improved Parameter: {imp_name} ({imp})\n\n"
            f"   Worsened Parameter: {wor_name} ({wor})\n\n"
            f"   Explanation: Gains in {imp_name} tend to degrade "
            f"{wor_name} in this design.\n"
        )
    body = "\n".join(blocks)
    if strategy in ("cot", "cot-few-shot"):
        return _COT_PREAMBLE + body
    return body


# Step-4 generations, three per ground-truth principle, in gen order.
STEP4_TEXTS = {
    ("in-pipe-robot", 1): [
        "Concrete Solutions: Divide the robot chassis into independent "
        "wheeled segments joined by flexible couplings, so rigid parts "
        "and flexible parts share one envelope.",
        "Concrete Solutions: Split the wheel carriage into modular units "
        "that can be re-spaced for each pipe diameter.",
        "Concrete Solutions: Partition the drive train into per-wheel "
        "micro drives so a failed unit can be swapped alone.",
    ],
    ("in-pipe-robot", 11): [
        "Concrete Solutions: Mount a pre-compression spring behind each "
        "wheel arm so contact force is stored before the robot enters "
        "the pipe.",
        "Concrete Solutions: Fit each arm with a preloaded spring buffer "
        "that absorbs diameter steps in advance.",
        "Concrete Solutions: Charge elastic bumpers against the hull "
        "before entry so shocks meet a cushion that is already in place.",
    ],
    ("test-tube-rack", 35): [
        "Concrete Solutions: Mold the rack from a softer polymer whose "
        "flexibility is tuned to grip tubes of several diameters.",
        "Concrete Solutions: Vary the wall thickness so each seat "
        "profile flexes and conforms to the tube it holds.",
        "Concrete Solutions: Switch the tube seats to an elastic state "
        "so one rack adapts to every common tube size.",
    ],
}

# Frozen embedding fixtures: cosine scores against these vectors are
# hand-computed in the tests (1, 0, and 1/sqrt(2) terms only).
_E1, _E2, _E3, _E4 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
_E12 = (1, 1, 0, 0)

STEP4_VECTORS = {
    ("in-pipe-robot", 1): [_E1, _E2, _E12],
    ("in-pipe-robot", 11): [_E3, _E3, _E4],
    ("test-tube-rack", 35): [_E12, _E1, _E2],
}

GROUND_TRUTH_VECTORS = {
    ("in-pipe-robot", 1): _E1,
    ("in-pipe-robot", 11): _E3,
    ("test-tube-rack", 35): _E12,
}

# Keyword-scatter fixtures: one embedding per robot solution keyword,
# clustered per source tag so the projected 2D points separate cleanly.
KEYWORD_VECTORS = {
    "ground-truth": [(10, 1, 0, 0), (10, 0, 1, 0), (10, 0, 0, 1)],
    "gpt-4": [(1, 10, 0, 0), (0, 10, 1, 0), (0, 10, 0, 1)],
    "gpt-3.5": [(1, 0, 10, 0), (0, 1, 10, 0)],
}


def keyword_pairs() -> list[tuple[str, str]]:
    robot = seed_cases().case_by_id("in-pipe-robot")
    return [(k.phrase, k.source) for k in robot.solution_keywords]


def fixture_backend() -> FakeBackend:
    collection = seed_cases()
    principles_by_case = {
        c.id: [gt.principle for gt in c.ground_truth_solutions]
        for c in collection.cases
    }

    def respond(request):
        parts = request.request_tag.split(":")
        session, step = parts[0], parts[1]
        case_id = session[5:] if session.startswith("eval-") else "in-pipe-robot"
        if step == "step1":
            return STEP1_TEXTS[case_id]
        if step == "step2":
            return STEP2_TEXTS[case_id]
        if step == "step3":
            return step3_text(case_id, parts[2])
        gen = int(parts[4][3:])
        principle = principles_by_case[case_id][gen // 3]
        return STEP4_TEXTS[(case_id, principle)][gen % 3]

    backend = FakeBackend(respond=respond)
    for (case_id, principle), vectors in STEP4_VECTORS.items():
        for text, vector in zip(STEP4_TEXTS[(case_id, principle)], vectors):
            stripped = text.split("Concrete Solutions: ", 1)[1]
            backend.embeddings[stripped] = vector
    for c in collection.cases:
        for gt in c.ground_truth_solutions:
            key = (c.id, gt.principle)
            if key in GROUND_TRUTH_VECTORS:
                backend.embeddings[gt.text] = GROUND_TRUTH_VECTORS[key]
    taken = {tag: 0 for tag in KEYWORD_VECTORS}
    for phrase, tag in keyword_pairs():
        backend.embeddings[phrase] = KEYWORD_VECTORS[tag][taken[tag]]
        taken[tag] += 1
    return backend


def write_golden_transcripts(out_dir: Path | None = None) -> list[Path]:
    """Record the replay fixtures: both batch evaluations plus one
    interactive-style solve session over the robot case."""
    out_dir = out_dir or GOLDEN / "transcripts"
    out_dir.mkdir(parents=True, exist_ok=True)
    for stale in out_dir.glob("*.json"):
        stale.unlink()
    collection = seed_cases()
    gateway = Gateway(
        fixture_backend(),
        config=GatewayConfig(
            retries=0, backoff_seconds=0.0, requests_per_minute=100_000
        ),
        record_store=TranscriptStore(out_dir),
        clock=lambda: 0.0,
    )
    run_contradiction_eval(
        gateway, collection, model_ids=["gpt-4"], clock=lambda: 0.0
    )
    run_solution_eval(
        gateway,
        collection,
        strategies=["few-shot"],
        model_ids=["gpt-4"],
        clock=lambda: 0.0,
    )

    # The scripted solve walkthrough the CLI replays end to end:
    # select-all at every checkpoint, first contradiction, first principle.
    workflow = TrizWorkflow(gateway)
    robot = collection.case_by_id("in-pipe-robot")
    session = workflow.start_session(
        robot.problem, model_id="gpt-4", session_id="robot-replay"
    )
    workflow.run_step1(session)
    workflow.run_step2(session, list(session.step1_output))
    resolved = []
    for m in session.step2_output:
        if m.resolved and m.triz_number not in resolved:
            resolved.append(m.triz_number)
    workflow.run_step3(session, resolved)
    workflow.recommend_principles(session, session.step3_output[0])
    workflow.run_step4(session, session.selected_principles[0])

    # keyword-scatter replay data for the projection endpoint
    gateway.embed([phrase for phrase, _ in keyword_pairs()])
    return sorted(out_dir.glob("*.json"))


def main() -> None:
    written = write_golden_prompts()
    written += write_golden_transcripts()
    for path in written:
        print(f"wrote {path.relative_to(REPO)}")


if __name__ == "__main__":
    main()
