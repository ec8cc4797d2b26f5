"""Metric correctness against the brute-force oracles in oracles.py."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triz_workbench.errors import (
    ShapeMismatchError,
    UndefinedMetricError,
    WorkbenchError,
)
from triz_workbench.metrics import (
    MatchConfig,
    MatchMode,
    PairSet,
    cosine_similarity,
    mean_cosine_to_reference,
    precision,
    recall,
)

from oracles import brute_force_cosine, brute_force_precision, brute_force_recall

MODES = {
    MatchMode.ORDERED_PAIR: "ordered",
    MatchMode.UNORDERED_PAIR: "unordered",
    MatchMode.PARAMETER_LEVEL: "parameter",
}


def all_pairs(params):
    return [(i, w) for i in params for w in params if i != w]


def assert_agrees(G_pairs, O_pairs, mode):
    G, O = PairSet.of(G_pairs), PairSet.of(O_pairs)
    cfg = MatchConfig(mode=mode)
    if O_pairs:
        want = brute_force_recall(G_pairs, O_pairs, MODES[mode])
        got = Fraction(recall(G, O, cfg)).limit_denominator(10**6)
        assert got == want, (G_pairs, O_pairs, mode, "recall")
    if G_pairs:
        want = brute_force_precision(G_pairs, O_pairs, MODES[mode])
        got = Fraction(precision(G, O, cfg)).limit_denominator(10**6)
        assert got == want, (G_pairs, O_pairs, mode, "precision")


class TestPairSetSchema:
    def test_self_pair_rejected(self):
        with pytest.raises(WorkbenchError):
            PairSet.of([(3, 3)])

    def test_out_of_range_rejected(self):
        with pytest.raises(WorkbenchError):
            PairSet.of([(0, 5)])
        with pytest.raises(WorkbenchError):
            PairSet.of([(1, 40)])

    def test_duplicates_collapse(self):
        assert len(PairSet.of([(1, 2), (1, 2), (2, 1)])) == 2


class TestSpotValues:
    """Hand-readable cases pinning the formulas down."""

    def test_recall_full_hit(self):
        assert recall(PairSet.of([(37, 35), (33, 36)]), PairSet.of([(37, 35)])) == 1.0

    def test_recall_empty_generated(self):
        assert recall(PairSet.of([]), PairSet.of([(37, 35)])) == 0.0

    def test_precision_half(self):
        G = PairSet.of([(37, 35), (33, 36)])
        assert precision(G, PairSet.of([(37, 35)])) == 0.5

    def test_identity_sets(self):
        S = PairSet.of([(1, 2), (3, 4)])
        assert recall(S, S) == 1.0
        assert precision(S, S) == 1.0

    def test_direction_sensitivity(self):
        G, O = PairSet.of([(35, 37)]), PairSet.of([(37, 35)])
        assert recall(G, O, MatchConfig(MatchMode.ORDERED_PAIR)) == 0.0
        assert recall(G, O, MatchConfig(MatchMode.UNORDERED_PAIR)) == 1.0

    def test_parameter_level_partial_overlap(self):
        G, O = PairSet.of([(37, 1)]), PairSet.of([(37, 35)])
        assert recall(G, O, MatchConfig(MatchMode.PARAMETER_LEVEL)) == 1.0
        assert recall(G, O, MatchConfig(MatchMode.ORDERED_PAIR)) == 0.0

    def test_empty_reference_undefined(self):
        with pytest.raises(UndefinedMetricError):
            recall(PairSet.of([(1, 2)]), PairSet.of([]))

    def test_empty_generated_undefined(self):
        with pytest.raises(UndefinedMetricError):
            precision(PairSet.of([]), PairSet.of([(1, 2)]))


class TestOracleEquivalence:
    """The package matcher must agree exactly with the naive one."""

    def test_exhaustive_three_parameter_universe(self):
        # Every (G, O) combination over the 6 ordered pairs of a
        # 3-parameter universe: 64 x 64 set pairs, all three modes.
        universe = all_pairs([1, 2, 3])
        subsets = []
        for r in range(len(universe) + 1):
            subsets.extend(itertools.combinations(universe, r))
        for G_pairs in subsets:
            for O_pairs in subsets:
                for mode in MODES:
                    assert_agrees(G_pairs, O_pairs, mode)

    def test_all_size_combinations_up_to_eight(self):
        # For each |G|, |O| in 1..8, several random draws from the full
        # 39-parameter universe.
        rng = random.Random(20240817)
        universe = all_pairs(range(1, 40))
        for size_g in range(1, 9):
            for size_o in range(1, 9):
                for _ in range(8):
                    G_pairs = rng.sample(universe, size_g)
                    O_pairs = rng.sample(universe, size_o)
                    for mode in MODES:
                        assert_agrees(G_pairs, O_pairs, mode)

    def test_five_hundred_random_larger_instances(self):
        rng = random.Random(98127)
        universe = all_pairs(range(1, 40))
        for _ in range(500):
            G_pairs = rng.sample(universe, rng.randint(9, 40))
            O_pairs = rng.sample(universe, rng.randint(9, 40))
            for mode in MODES:
                assert_agrees(G_pairs, O_pairs, mode)


pair_strategy = st.tuples(
    st.integers(min_value=1, max_value=39), st.integers(min_value=1, max_value=39)
).filter(lambda p: p[0] != p[1])

pairset_strategy = st.frozensets(pair_strategy, min_size=1, max_size=12).map(PairSet.of)


class TestMetricProperties:
    @given(G=pairset_strategy, O=pairset_strategy)
    def test_bounded(self, G, O):
        for mode in MODES:
            cfg = MatchConfig(mode=mode)
            assert 0.0 <= recall(G, O, cfg) <= 1.0
            assert 0.0 <= precision(G, O, cfg) <= 1.0

    @given(G=pairset_strategy, O=pairset_strategy, extra=pair_strategy)
    def test_adding_reference_pair_to_G_never_decreases_recall(self, G, O, extra):
        # Monotonicity: growing G can only find more of O.
        G_plus = PairSet.of(set(G.pairs) | {extra})
        for mode in MODES:
            cfg = MatchConfig(mode=mode)
            assert recall(G_plus, O, cfg) >= recall(G, O, cfg)

    @given(G=pairset_strategy, O=pairset_strategy)
    @settings(max_examples=60)
    def test_adding_nonmatching_pair_never_increases_precision(self, G, O):
        for mode in MODES:
            cfg = MatchConfig(mode=mode)
            nonmatching = next(
                (
                    p
                    for p in all_pairs(range(1, 40))
                    if p not in G.pairs
                    and not any(
                        brute_force_recall([p], [o], MODES[mode]) == 1 for o in O.pairs
                    )
                ),
                None,
            )
            if nonmatching is None:
                continue
            G_plus = PairSet.of(set(G.pairs) | {nonmatching})
            assert precision(G_plus, O, cfg) <= precision(G, O, cfg)


ADA_LIKE_PAIRS = [
    # (a, b, expected) with expectations hand-computed; see docstring below.
    ((1.0, 0.0), (1.0, 0.0), 1.0),
    ((1.0, 0.0), (0.0, 1.0), 0.0),
    ((1.0, 0.0), (1.0, 1.0), 0.7071067811865476),
    ((1.0, 2.0, 3.0), (1.0, 2.0, 3.0), 1.0),
    ((1.0, 0.0, 0.0), (0.0, 0.0, 5.0), 0.0),
    ((3.0, 4.0), (4.0, 3.0), 24.0 / 25.0),
    ((1.0, 1.0, 1.0, 1.0), (1.0, 1.0, 1.0, -1.0), 0.5),
    ((2.0, 0.0), (-2.0, 0.0), -1.0),
    ((1.0, 2.0), (2.0, 4.0), 1.0),
    ((6.0, 8.0), (-8.0, 6.0), 0.0),
    ((1.0, 1.0), (1.0, 0.0), 0.7071067811865476),
    ((5.0, 0.0, 12.0), (5.0, 0.0, 12.0), 1.0),
]


class TestCosine:
    """Hand-computed fixtures.

    (3,4)x(4,3): dot 24, norms 5 and 5 -> 24/25. The (1,1,1,1)x(1,1,1,-1)
    case: dot 2, norms 2 and 2 -> 0.5. (1,0)x(1,1): dot 1, norms 1 and
    sqrt(2) -> 1/sqrt(2) = 0.70710678...
    """

    @pytest.mark.parametrize("a,b,expected", ADA_LIKE_PAIRS)
    def test_fixed_pairs(self, a, b, expected):
        assert cosine_similarity(a, b) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("a,b,expected", ADA_LIKE_PAIRS)
    def test_fixed_pairs_against_oracle(self, a, b, expected):
        assert cosine_similarity(a, b) == pytest.approx(
            brute_force_cosine(a, b), abs=1e-12
        )

    def test_zero_vector_undefined(self):
        with pytest.raises(UndefinedMetricError):
            cosine_similarity((0.0, 0.0), (1.0, 0.0))

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            cosine_similarity((1.0, 0.0), (1.0, 0.0, 0.0))

    @given(
        vec=st.lists(
            st.floats(min_value=-100, max_value=100).filter(lambda x: abs(x) > 1e-3),
            min_size=2,
            max_size=16,
        ),
        other=st.lists(
            st.floats(min_value=-100, max_value=100).filter(lambda x: abs(x) > 1e-3),
            min_size=2,
            max_size=16,
        ),
        scale=st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_scale_invariance_and_symmetry(self, vec, other, scale):
        n = min(len(vec), len(other))
        a, b = vec[:n], other[:n]
        base = cosine_similarity(a, b)
        assert cosine_similarity(b, a) == pytest.approx(base, abs=1e-12)
        scaled = [scale * x for x in a]
        assert cosine_similarity(scaled, b) == pytest.approx(base, abs=1e-12)

    def test_mean_against_reference(self):
        # gens (1,0,0,0), (0,1,0,0), (1,1,0,0) vs gt (1,0,0,0):
        # cosines 1, 0, 1/sqrt(2); mean = (1 + 0 + 0.7071067811865476) / 3.
        gt = (1.0, 0.0, 0.0, 0.0)
        gens = [(1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0), (1.0, 1.0, 0.0, 0.0)]
        assert mean_cosine_to_reference(gt, gens) == pytest.approx(
            0.5690355937288492, abs=1e-9
        )
