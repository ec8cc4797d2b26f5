import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triz_workbench.errors import PromptError, UsageError
from triz_workbench.prompts import (
    ENGINE_BOUND,
    PLACEHOLDER_RE,
    SHOT_COUNT,
    PromptEngine,
    PromptStrategy,
    Step3Payload,
    Step4Payload,
    default_strategy,
)

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "scripts"))

from make_fixtures import golden_bindings, write_golden_prompts  # noqa: E402

GOLDEN_PROMPTS = REPO / "tests" / "golden" / "prompts"


def render_all(engine) -> dict[str, str]:
    bindings = golden_bindings()
    out = {}
    for step in (1, 2):
        needed = engine.template(step).placeholders()
        out[f"step{step}.txt"] = engine.render(
            step, bindings={k: bindings[k] for k in needed}
        )
    for step in (3, 4):
        for strategy in PromptStrategy:
            needed = engine.template(step, strategy).placeholders() - ENGINE_BOUND
            out[f"step{step}_{strategy.value}.txt"] = engine.render(
                step, strategy, bindings={k: bindings[k] for k in needed}
            )
    return out


class TestGoldenPrompts:
    def test_committed_goldens_cover_all_renders(self, engine):
        expected = set(render_all(engine))
        on_disk = {p.name for p in GOLDEN_PROMPTS.glob("*.txt")}
        assert on_disk == expected

    @pytest.mark.parametrize(
        "name",
        sorted(p.name for p in GOLDEN_PROMPTS.glob("*.txt")),
    )
    def test_render_matches_golden_byte_for_byte(self, engine, name):
        rendered = render_all(engine)[name] + "\n"
        assert rendered == (GOLDEN_PROMPTS / name).read_text(encoding="utf-8")

    def test_generator_script_reproduces_committed_files(self, tmp_path, monkeypatch):
        import make_fixtures

        before = {
            p.name: p.read_bytes() for p in GOLDEN_PROMPTS.glob("*.txt")
        }
        monkeypatch.setattr(make_fixtures, "GOLDEN", tmp_path)
        write_golden_prompts()
        after = {
            p.name: p.read_bytes() for p in (tmp_path / "prompts").glob("*.txt")
        }
        assert before == after


class TestPinnedSentences:
    def test_step2_parameter_number_reminder(self, engine):
        body = engine.template(2).body
        assert (
            "Remember to tell me the number of the corresponding "
            "TRIZ engineering parameters." in body
        )

    def test_step3_bodies_end_with_relations_cue(self, engine):
        for strategy in PromptStrategy:
            assert engine.template(3, strategy).body.endswith(
                "contradictory relations:"
            )

    def test_step3_cot_passage(self, engine):
        for strategy in (PromptStrategy.CHAIN_OF_THOUGHT, PromptStrategy.COT_FEW_SHOT):
            body = engine.template(3, strategy).body
            assert "Let us think step by step. First, analyze" in body
        for strategy in (PromptStrategy.BASIC, PromptStrategy.FEW_SHOT):
            assert "step by step" not in engine.template(3, strategy).body

    def test_step4_cot_passage(self, engine):
        for strategy in (PromptStrategy.CHAIN_OF_THOUGHT, PromptStrategy.COT_FEW_SHOT):
            body = engine.template(4, strategy).body
            assert "Let's think step by step. First, explain" in body
        for strategy in (PromptStrategy.BASIC, PromptStrategy.FEW_SHOT):
            assert "step by step" not in engine.template(4, strategy).body

    def test_step1_output_format_instruction(self, engine):
        assert (
            "Parameter number, Parameter name, Parameter explanation"
            in engine.template(1).body
        )


class TestStep2ListingSync:
    def test_listing_regenerates_from_parameter_data(self, engine, kb):
        # the template carries the full 39-line listing; it must match
        # data/parameters.json exactly, line by line
        expected = "\n".join(
            f"{p.number}. {p.name} - {p.definition}" for p in kb.parameters
        )
        assert expected in engine.template(2).body

    def test_listing_sits_between_reminder_and_placeholder(self, engine):
        body = engine.template(2).body
        reminder_at = body.index("Remember to tell me")
        first_param_at = body.index("1. Weight of Moving Object")
        placeholder_at = body.index("[PROBLEM_PARAMETERS_SELECTED]")
        assert reminder_at < first_param_at < placeholder_at


class TestStrategies:
    def test_cli_values(self):
        assert [s.value for s in PromptStrategy] == [
            "basic",
            "cot",
            "few-shot",
            "cot-few-shot",
        ]

    def test_defaults(self):
        assert default_strategy(3) is PromptStrategy.CHAIN_OF_THOUGHT
        assert default_strategy(4) is PromptStrategy.FEW_SHOT

    @pytest.mark.parametrize("step", [1, 2, 5, 0])
    def test_default_strategy_rejects_other_steps(self, step):
        with pytest.raises(UsageError):
            default_strategy(step)

    def test_uses_shots(self):
        assert PromptStrategy.FEW_SHOT.uses_shots
        assert PromptStrategy.COT_FEW_SHOT.uses_shots
        assert not PromptStrategy.BASIC.uses_shots
        assert not PromptStrategy.CHAIN_OF_THOUGHT.uses_shots


class TestShots:
    def test_three_shots_per_generating_step(self, engine):
        assert len(engine.list_shots(3)) == SHOT_COUNT
        assert len(engine.list_shots(4)) == SHOT_COUNT

    def test_no_shots_for_steps_one_and_two(self, engine):
        with pytest.raises(UsageError):
            engine.list_shots(1)
        with pytest.raises(UsageError):
            engine.list_shots(2)

    def test_shot_case_ids_come_from_the_reserved_seed_cases(self, engine, seeds):
        reserved = set(seeds.few_shot_case_ids)
        for step in (3, 4):
            for shot in engine.list_shots(step):
                assert shot.case_id in reserved

    def test_step3_shot_payloads(self, engine):
        shots = engine.list_shots(3)
        first = shots[0].payload
        assert isinstance(first, Step3Payload)
        assert (first.improving_number, first.improving_name) == (39, "Productivity")
        assert (first.worsening_number, first.worsening_name) == (
            33,
            "Ease of Operation",
        )
        assert first.explanation
        pairs = [
            (s.payload.improving_number, s.payload.worsening_number) for s in shots
        ]
        assert pairs == [(39, 33), (14, 1), (23, 14)]

    def test_step4_shot_payloads(self, engine, kb):
        shots = engine.list_shots(4)
        assert all(isinstance(s.payload, Step4Payload) for s in shots)
        numbers = [s.payload.principle_number for s in shots]
        assert numbers == [28, 40, 35]
        for shot in shots:
            official = kb.principle_by_number(shot.payload.principle_number)
            assert shot.payload.principle_name == official.name
            assert shot.payload.solution

    def test_shot_problems_are_complete(self, engine):
        for step in (3, 4):
            for shot in engine.list_shots(step):
                assert shot.problem.is_complete(), shot.case_id

    def test_few_shot_render_embeds_all_shots_in_order(self, engine):
        text = engine.render(
            4,
            PromptStrategy.FEW_SHOT,
            bindings={
                "CASE_DESCRIPTION": "Problem Scenario: x",
                "INVENTIVE_PRINCIPLES": "1-Segmentation",
            },
        )
        positions = [text.index(s.body) for s in engine.list_shots(4)]
        assert positions == sorted(positions)
        joined = "\n\n".join(s.body for s in engine.list_shots(4))
        assert joined in text

    def test_cot_few_shot_has_both_ingredients(self, engine):
        text = engine.render(
            3,
            PromptStrategy.COT_FEW_SHOT,
            bindings={
                "CASE_DESCRIPTION": "Problem Scenario: x",
                "TRIZ_PARAMETERS": "39. Productivity",
            },
        )
        assert "Let us think step by step" in text
        for shot in engine.list_shots(3):
            assert shot.body in text

    def test_basic_render_contains_no_shot_text(self, engine):
        text = engine.render(
            3,
            PromptStrategy.BASIC,
            bindings={
                "CASE_DESCRIPTION": "Problem Scenario: x",
                "TRIZ_PARAMETERS": "39. Productivity",
            },
        )
        for shot in engine.list_shots(3):
            assert shot.body not in text


class TestRenderContract:
    def test_unbound_placeholder_is_named(self, engine):
        with pytest.raises(PromptError, match=r"\[TRIZ_PARAMETERS\]"):
            engine.render(
                3,
                PromptStrategy.BASIC,
                bindings={"CASE_DESCRIPTION": "Problem Scenario: x"},
            )

    def test_empty_binding_rejected(self, engine):
        with pytest.raises(PromptError, match="empty"):
            engine.render(
                1,
                bindings={"CASE_DESCRIPTION": "   "},
            )

    def test_engine_bound_placeholder_rejected_from_caller(self, engine):
        with pytest.raises(PromptError, match=r"\[FEW_SHOT_EXAMPLES\]"):
            engine.render(
                4,
                PromptStrategy.FEW_SHOT,
                bindings={
                    "CASE_DESCRIPTION": "Problem Scenario: x",
                    "INVENTIVE_PRINCIPLES": "1-Segmentation",
                    "FEW_SHOT_EXAMPLES": "injected",
                },
            )

    def test_step_strategy_usage_errors(self, engine):
        with pytest.raises(UsageError):
            engine.render(1, PromptStrategy.BASIC, bindings={"CASE_DESCRIPTION": "x"})
        with pytest.raises(UsageError):
            engine.render(3, bindings={})
        with pytest.raises(UsageError):
            engine.template(7)

    def test_binding_values_with_brackets_survive_verbatim(self, engine):
        tricky = "Problem Scenario: see [CASE_DESCRIPTION] and [NOT_A_BINDING]"
        text = engine.render(
            1,
            bindings={"CASE_DESCRIPTION": tricky},
        )
        assert tricky in text

    @given(
        payload=st.text(max_size=120).filter(lambda s: s.strip()),
    )
    @settings(max_examples=150, deadline=None)
    def test_substitution_is_single_pass(self, payload):
        # whatever the binding contains, even template-like noise, it must
        # land in the output exactly once and exactly verbatim
        engine = _module_engine()
        text = engine.render(1, bindings={"CASE_DESCRIPTION": payload})
        assert text.count(payload) >= 1
        assert payload in text
        head = engine.template(1).body.split("[CASE_DESCRIPTION]")[0]
        assert text.startswith(head)

    def test_rendered_output_never_keeps_caller_placeholders(self, engine):
        out = render_all(engine)
        for name, text in out.items():
            leftovers = set(PLACEHOLDER_RE.findall(text)) - {
                "NOT_A_BINDING"  # never bound anywhere
            }
            # golden bindings contain no bracket tokens, so none survive
            assert not leftovers, (name, leftovers)


def _module_engine():
    from triz_workbench.prompts import default_engine

    return default_engine()


class TestTemplateHygiene:
    def test_all_placeholders_are_known(self, engine):
        known = {
            "CASE_DESCRIPTION",
            "TRIZ_PARAMETERS",
            "PROBLEM_PARAMETERS_SELECTED",
            "INVENTIVE_PRINCIPLES",
            "FEW_SHOT_EXAMPLES",
        }
        for step in (1, 2):
            assert engine.template(step).placeholders() <= known
        for step in (3, 4):
            for strategy in PromptStrategy:
                assert engine.template(step, strategy).placeholders() <= known

    def test_shot_bodies_carry_no_placeholders(self, engine):
        for step in (3, 4):
            for shot in engine.list_shots(step):
                assert not PLACEHOLDER_RE.findall(shot.body)

    def test_headers_never_leak_into_bodies(self, engine):
        for step in (1, 2):
            assert "#" not in engine.template(step).body.split("\n")[0]
        for step in (3, 4):
            for strategy in PromptStrategy:
                body = engine.template(step, strategy).body
                assert not body.startswith("#")

    def test_step1_and_2_have_no_strategy_variants(self, engine):
        t1 = engine.template(1)
        assert t1.strategy is None
        assert t1.placeholders() == {"CASE_DESCRIPTION"}
        t2 = engine.template(2)
        assert t2.placeholders() == {"PROBLEM_PARAMETERS_SELECTED"}
