import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triz_workbench.cases import (
    Case,
    CaseCollection,
    GroundTruthSolution,
    KeywordAnnotation,
    ProblemDescription,
    ReferenceContradiction,
    load_collection,
    save_collection,
    seed_cases,
    validate_case,
    validate_collection,
    validate_for_evaluation,
)
from triz_workbench.errors import CaseValidationError, DataFileError

PROBLEM = ProblemDescription(
    scenario="A thing exists.",
    current_state="It works poorly.",
    pain_point="Users suffer.",
    requirement="Make it better.",
)


def make_case(**overrides) -> Case:
    base = dict(
        id="widget",
        title="The Widget Problem",
        domain_tag="engineering",
        published_after_cutoff=False,
        problem=PROBLEM,
        reference_contradictions=(ReferenceContradiction(39, 33, "speed vs use"),),
        reference_principles=(1, 28),
        ground_truth_solutions=(GroundTruthSolution(28, "Replace the mechanism."),),
        solution_keywords=(KeywordAnnotation("ground-truth", "replace mechanism"),),
        source_citation="Worked example.",
    )
    base.update(overrides)
    return Case(**base)


class TestProblemDescription:
    def test_prompt_text_is_four_labeled_lines(self):
        text = PROBLEM.as_prompt_text()
        lines = text.split("\n")
        assert len(lines) == 4
        assert lines[0] == "Problem Scenario: A thing exists."
        assert lines[1].startswith("Current State: ")
        assert lines[2].startswith("Pain Point: ")
        assert lines[3].startswith("Requirement: ")

    def test_completeness(self):
        assert PROBLEM.is_complete()
        gappy = ProblemDescription("a", "b", "c", "  ")
        assert not gappy.is_complete()


class TestCaseValidation:
    def test_valid_case_has_no_findings(self):
        assert validate_case(make_case()) == []

    def test_blank_id_and_title(self):
        bad = make_case(id="  ", title="")
        findings = validate_case(bad)
        assert any("id" in f for f in findings)
        assert any("title" in f for f in findings)

    def test_empty_problem_field(self):
        bad = make_case(problem=ProblemDescription("a", "", "c", "d"))
        assert any("Current State" in f for f in validate_case(bad))

    def test_contradiction_parameter_out_of_range(self):
        bad = make_case(
            reference_contradictions=(ReferenceContradiction(0, 33),)
        )
        assert any("improving" in f for f in validate_case(bad))
        bad = make_case(
            reference_contradictions=(ReferenceContradiction(39, 40),)
        )
        assert any("worsening" in f for f in validate_case(bad))

    def test_self_contradiction_rejected(self):
        bad = make_case(reference_contradictions=(ReferenceContradiction(5, 5),))
        assert any("improving == worsening" in f for f in validate_case(bad))

    def test_principle_out_of_range(self):
        bad = make_case(reference_principles=(1, 41))
        assert any("outside 1..40" in f for f in validate_case(bad))

    def test_ground_truth_principle_must_be_referenced(self):
        bad = make_case(
            reference_principles=(1,),
            ground_truth_solutions=(GroundTruthSolution(28, "text"),),
        )
        assert any("missing from reference_principles" in f for f in validate_case(bad))

    def test_empty_ground_truth_text(self):
        bad = make_case(ground_truth_solutions=(GroundTruthSolution(28, "  "),))
        assert any("solution text is empty" in f for f in validate_case(bad))

    def test_empty_keyword_annotation(self):
        bad = make_case(solution_keywords=(KeywordAnnotation("", "x"),))
        assert any("keyword annotation" in f for f in validate_case(bad))

    def test_evaluation_requires_contradictions(self):
        workflow_only = make_case(
            reference_contradictions=(),
        )
        assert validate_case(workflow_only) == []
        findings = validate_for_evaluation(workflow_only)
        assert any("not evaluable" in f for f in findings)


class TestCollectionValidation:
    def test_empty_collection(self):
        findings = validate_collection(CaseCollection("X", ()))
        assert any("empty" in f for f in findings)

    def test_duplicate_ids(self):
        coll = CaseCollection("X", (make_case(), make_case()))
        assert any("duplicate case id" in f for f in validate_collection(coll))

    def test_unknown_few_shot_id(self):
        coll = CaseCollection("X", (make_case(),), few_shot_case_ids=("ghost",))
        assert any("ghost" in f for f in validate_collection(coll))

    def test_collection_b_requires_post_cutoff_cases(self):
        pre = make_case(published_after_cutoff=False)
        coll = CaseCollection("B", (pre,))
        assert any("predates the cutoff" in f for f in validate_collection(coll))
        post = make_case(published_after_cutoff=True)
        assert validate_collection(CaseCollection("B", (post,))) == []

    def test_collection_a_mixes_freely(self):
        coll = CaseCollection(
            "A", (make_case(), make_case(id="w2", published_after_cutoff=True))
        )
        assert validate_collection(coll) == []

    def test_case_by_id(self):
        coll = CaseCollection("X", (make_case(),))
        assert coll.case_by_id("widget").title == "The Widget Problem"
        with pytest.raises(KeyError):
            coll.case_by_id("nope")

    def test_evaluation_cases_exclude_few_shot_sources(self):
        cases = (make_case(), make_case(id="shot-src"))
        coll = CaseCollection("X", cases, few_shot_case_ids=("shot-src",))
        assert [c.id for c in coll.evaluation_cases()] == ["widget"]


class TestPersistence:
    def test_round_trip(self, tmp_path):
        coll = CaseCollection("A", (make_case(),), few_shot_case_ids=("widget",))
        path = save_collection(coll, tmp_path / "coll.json")
        assert load_collection(path) == coll

    def test_save_refuses_invalid(self, tmp_path):
        bad = CaseCollection("X", (make_case(id=" "),))
        with pytest.raises(CaseValidationError) as err:
            save_collection(bad, tmp_path / "bad.json")
        assert err.value.findings

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(DataFileError, match="cannot read"):
            load_collection(tmp_path / "absent.json")

    def test_load_empty_file(self, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("")
        with pytest.raises(CaseValidationError, match="empty"):
            load_collection(p)

    def test_load_bad_json_names_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n "cases": [,]\n}')
        with pytest.raises(CaseValidationError, match="line 2"):
            load_collection(p)

    def test_load_wrong_format_marker(self, tmp_path):
        p = tmp_path / "other.json"
        p.write_text(json.dumps({"format": "not-cases", "name": "X", "cases": []}))
        with pytest.raises(CaseValidationError, match="format"):
            load_collection(p)

    def test_load_rejects_invalid_payload(self, tmp_path):
        coll = CaseCollection("A", (make_case(),))
        path = save_collection(coll, tmp_path / "coll.json")
        doc = json.loads(path.read_text())
        doc["cases"][0]["reference_contradictions"][0]["improving"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(CaseValidationError) as err:
            load_collection(path)
        assert any("outside 1..39" in f for f in err.value.findings)

    def test_malformed_case_document(self, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(
            json.dumps(
                {
                    "format": "triz-case-collection",
                    "name": "X",
                    "cases": [{"id": "x", "title": "t"}],
                }
            )
        )
        with pytest.raises(CaseValidationError, match="malformed"):
            load_collection(p)


clean_text = st.text(
    alphabet=st.characters(min_codepoint=32, max_codepoint=0x2FFF),
    min_size=1,
    max_size=40,
).filter(lambda s: s.strip())

problems = st.builds(
    ProblemDescription,
    scenario=clean_text,
    current_state=clean_text,
    pain_point=clean_text,
    requirement=clean_text,
)


@st.composite
def cases_strategy(draw, case_id=None):
    improving = draw(st.integers(min_value=1, max_value=39))
    worsening = draw(
        st.integers(min_value=1, max_value=39).filter(lambda w: w != improving)
    )
    principles = tuple(
        sorted(draw(st.sets(st.integers(min_value=1, max_value=40), max_size=4)))
    )
    solutions = tuple(
        GroundTruthSolution(p, draw(clean_text)) for p in principles[:2]
    )
    return Case(
        id=case_id or draw(st.uuids().map(lambda u: f"case-{u.hex[:8]}")),
        title=draw(clean_text),
        domain_tag=draw(st.sampled_from(["engineering", "service design"])),
        published_after_cutoff=draw(st.booleans()),
        problem=draw(problems),
        reference_contradictions=(
            ReferenceContradiction(improving, worsening, draw(clean_text)),
        ),
        reference_principles=principles,
        ground_truth_solutions=solutions,
        solution_keywords=tuple(
            KeywordAnnotation(draw(st.sampled_from(["ground-truth", "gpt-4"])), draw(clean_text))
            for _ in range(draw(st.integers(min_value=0, max_value=3)))
        ),
        source_citation=draw(st.one_of(st.just(""), clean_text)),
    )


class TestRoundTripProperty:
    @given(
        case_list=st.lists(
            cases_strategy(), min_size=1, max_size=5, unique_by=lambda c: c.id
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_save_load_identity(self, tmp_path_factory, case_list):
        coll = CaseCollection("A", tuple(case_list))
        path = tmp_path_factory.mktemp("coll") / "c.json"
        save_collection(coll, path)
        assert load_collection(path) == coll


class TestSeedCollection:
    def test_loads_clean(self, seeds):
        assert validate_collection(seeds) == []

    def test_shape(self, seeds):
        assert len(seeds.cases) == 7
        assert set(seeds.few_shot_case_ids) == {
            "muscle-powered-submarine",
            "desktop-fan",
            "bike-frame",
            "beverage-can",
        }
        assert [c.id for c in seeds.evaluation_cases()] == [
            "in-pipe-robot",
            "test-tube-rack",
            "virtual-exhibition",
        ]

    def test_post_cutoff_flags(self, seeds):
        for case in seeds.cases:
            expected = case.id in {
                "in-pipe-robot",
                "test-tube-rack",
                "virtual-exhibition",
            }
            assert case.published_after_cutoff is expected

    def test_robot_case_references(self, seeds):
        robot = seeds.case_by_id("in-pipe-robot")
        pairs = {rc.pair() for rc in robot.reference_contradictions}
        assert pairs == {(37, 35), (37, 32)}
        assert set(robot.reference_principles) == {1, 11}
        texts = [gt.text for gt in robot.ground_truth_solutions]
        assert any("rigid parts and flexible parts" in t for t in texts)
        assert any("pre-compression spring" in t for t in texts)

    def test_robot_keywords_cover_three_sources(self, seeds):
        robot = seeds.case_by_id("in-pipe-robot")
        sources = {kw.source for kw in robot.solution_keywords}
        assert sources == {"ground-truth", "gpt-4", "gpt-3.5"}

    def test_rack_case_is_workflow_only(self, seeds):
        rack = seeds.case_by_id("test-tube-rack")
        assert rack.reference_contradictions == ()
        assert validate_for_evaluation(rack)  # flagged for the benchmark
        assert rack.reference_principles == (35,)
        assert any(
            "demountable" in gt.text for gt in rack.ground_truth_solutions
        )

    def test_exhibition_case_pairs(self, seeds):
        ex = seeds.case_by_id("virtual-exhibition")
        pairs = {rc.pair() for rc in ex.reference_contradictions}
        assert pairs == {(35, 13), (18, 13)}
        assert ex.domain_tag == "service design"

    def test_submarine_holds_the_submarine_solution(self, seeds):
        sub = seeds.case_by_id("muscle-powered-submarine")
        assert sub.reference_contradictions[0].pair() == (39, 33)
        assert any(
            gt.principle == 28 for gt in sub.ground_truth_solutions
        )

    def test_seed_matrix_consistency(self, seeds, kb):
        # every seed reference principle appears in at least one of the
        # case's cited matrix cells (when the case cites any pairs)
        for case in seeds.cases:
            if not case.reference_contradictions or not case.reference_principles:
                continue
            recommended: set[int] = set()
            for rc in case.reference_contradictions:
                recommended.update(kb.matrix.get(*rc.pair()))
            if case.id == "virtual-exhibition":
                continue  # no principles recorded for it
            assert set(case.reference_principles) <= recommended, case.id
