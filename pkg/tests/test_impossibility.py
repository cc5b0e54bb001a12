import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tcmsvm import (
    DuplicateExamples, Hyperset, InvalidDelta, LabeledExample, MeasureConfig, MultiExampleMeasure,
    SingleClassInput, SolverConfig, SVCountMeasure, TooLarge, WeightFunction, WeightedAlphaMeasure,
    critical_region_measure, exchangeable_validity_oracle, multi_example_measure,
    permutation_validity_oracle, sv_count_measure, weighted_alpha_measure,
)
from tcmsvm.impossibility import reciprocal_of
from conftest import random_instance

# frozen from tests/oracle.py (alpha_i = 2 C xi_i of the brute-force optimum, C = 1)
ORACLE_5 = (
    [[-0.8019314252534474, -1.324358995628145], [-0.24836162209524854, 0.4204452380655215],
     [1.1360465324896427, 0.10970639932180819], [-0.5526473205362324, -0.7847803553442784],
     [0.7487457707345911, 1.6347830429585775]],
    [-1, -1, 1, 1, 1],
)
ORACLE_5_ALPHAS = [1.22477315928874, 1.9572397483508641, 0.07599801777846822,
                   2.438275097326257, 0.6677397925348787]
ORACLE_6 = (
    [[1.0531157544867582, 1.776491303816993], [-2.5532918384570134, -0.13796506137840808],
     [1.0137194090532766, 1.3521418253819912], [0.6537883844162056, 1.4971178525878377],
     [0.289957591366348, 0.5512671317684119], [0.17873768757050404, -1.073858701475369]],
    [1, -1, 1, 1, 1, 1],
)


class ConstantMeasure:
    def __init__(self, c):
        self.c = c

    def __call__(self, X, y=None):
        return self.c


class ShareMeasure:
    """m g(z_m) / sum_i g(z_i) with g a fixed positive function of the example.

    Exchangeable for every g: its average over the distinct sequences of
    any signature is one.
    """

    def __call__(self, X, y):
        g = 1.0 + np.abs(X[:, 0]) + (y > 0)
        return len(y) * g[-1] / g.sum()


def test_weight_functions():
    a = np.array([0.0, 0.5, 2.0])
    np.testing.assert_array_equal(WeightFunction("sign")(a), [0, 1, 1])
    np.testing.assert_array_equal(WeightFunction("identity")(a), a)
    np.testing.assert_array_equal(WeightFunction.parse("power:2")(a), [0, 0.25, 4])
    assert str(WeightFunction.parse("power:2")) == "power:2"
    with pytest.raises(ValueError):
        WeightFunction.parse("log")


class TestSVCount:
    def test_duplicate_gives_infinity(self, rng):
        X, y = random_instance(rng, 5, 2)
        X[4], y[4] = X[0], y[0]
        assert sv_count_measure(X, y) == math.inf
        assert SVCountMeasure().reciprocal(X, y) == 0.0

    def test_hundred_collinear_points(self, hundred_points):
        X, y = hundred_points
        perm = np.random.default_rng(3).permutation(100)
        assert sv_count_measure(X[perm], y[perm]) == 1.0

    def test_last_point_beyond_margin(self):
        config = MeasureConfig(solver=SolverConfig(C=1e6))
        assert sv_count_measure([[-1.0], [1.0], [3.0]], [-1, 1, 1], config) == 0.0
        assert sv_count_measure([[-1.0], [3.0], [1.0]], [-1, 1, 1], config) == 1.5

    def test_single_class(self):
        with pytest.raises(SingleClassInput):
            sv_count_measure([[0.0], [1.0]], [1, 1])


class TestWeighted:
    def test_identity_matches_oracle_alphas(self):
        config = MeasureConfig("weighted_alpha", "identity")
        expected = 5 * ORACLE_5_ALPHAS[-1] / sum(ORACLE_5_ALPHAS)
        assert weighted_alpha_measure(*ORACLE_5, config) == pytest.approx(expected, rel=1e-7)

    def test_uniform_alphas_give_one(self, hundred_points):
        X, y = hundred_points
        for f in ("sign", "identity", "power:2", "power:0.5"):
            assert weighted_alpha_measure(X, y, MeasureConfig("weighted_alpha", f)) == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(8))
    def test_sign_is_sv_count(self, seed):
        X, y = random_instance(np.random.default_rng(seed), 8, 2)
        assert WeightedAlphaMeasure("sign")(X, y) == SVCountMeasure()(X, y)
        assert WeightedAlphaMeasure("sign").reciprocal(X, y) == SVCountMeasure().reciprocal(X, y)

    def test_duplicates(self):
        assert weighted_alpha_measure([[0.0], [1.0], [0.0]], [-1, 1, -1]) == math.inf


class TestMultiExample:
    def test_matches_oracle_alphas(self):
        config = MeasureConfig("multi_example", "identity", k=2)
        # oracle alphas [0, .2344, 0, 0, .1102, .1242]: the new pair carries half the weight
        assert multi_example_measure(*ORACLE_6, config) == pytest.approx(1.5, rel=1e-7)

    @pytest.mark.parametrize("seed", range(6))
    def test_k1_sign_reduces_to_weighted(self, seed):
        X, y = random_instance(np.random.default_rng(seed), 7, 2)
        assert MultiExampleMeasure(1, "sign")(X, y) == WeightedAlphaMeasure("sign")(X, y)

    def test_all_support_vectors(self, hundred_points):
        X, y = hundred_points
        assert MultiExampleMeasure(7, "sign")(X, y) == pytest.approx(1.0)

    def test_k_too_large(self):
        from tcmsvm import DataError
        with pytest.raises(DataError):
            MultiExampleMeasure(3)([[0.0], [1.0], [2.0]], [-1, 1, 1])


class TestCriticalRegion:
    def test_values(self):
        p = critical_region_measure(lambda X, y: X[-1][0] > 0, 0.05)
        assert p([[1.0]], [1]) == pytest.approx(20.0)
        assert p([[-1.0]], [1]) == 0.0
        assert reciprocal_of(p, [[-1.0]], [1]) == math.inf

    @pytest.mark.parametrize("delta", [0.0, 1.0, 1.5, -0.1])
    def test_invalid_delta(self, delta):
        with pytest.raises(InvalidDelta):
            critical_region_measure(lambda X, y: True, delta)

    def test_expectation_is_one(self):
        # region {z_1 < q} with P = uniform on [0, 1]^1 has probability q
        p = critical_region_measure(lambda X, y: X[0][0] < 0.1, 0.1)
        u = np.random.default_rng(0).random(20000)
        vals = [p([[v]], [1]) for v in u]
        assert np.mean(vals) == pytest.approx(1.0, abs=0.07)


class TestPermutationOracle:
    def test_constant_measures(self, rng):
        X, y = random_instance(rng, 4, 2)
        assert permutation_validity_oracle(ConstantMeasure(1.0), X, y) == 1.0
        assert permutation_validity_oracle(ConstantMeasure(2.0), X, y) == 2.0

    def test_sv_count_is_valid(self, rng):
        X, y = random_instance(rng, 5, 2)
        assert permutation_validity_oracle(SVCountMeasure(), X, y) == pytest.approx(1.0, abs=1e-6)

    def test_last_position_indicator_is_invalid(self, rng):
        X, y = random_instance(rng, 4, 1)
        always_last = lambda X, y: 4.0 if X[-1][0] == X.max() else 0.0  # noqa: E731
        assert permutation_validity_oracle(always_last, X, y) == pytest.approx(1.0)
        biased = lambda X, y: 4.0 if X[0][0] == X.max() else 1.0  # noqa: E731
        assert permutation_validity_oracle(biased, X, y) != pytest.approx(1.0)

    def test_too_large(self, rng):
        X, y = random_instance(rng, 8, 1)
        with pytest.raises(TooLarge):
            permutation_validity_oracle(ConstantMeasure(1.0), X, y)

    def test_duplicates(self):
        with pytest.raises(DuplicateExamples):
            permutation_validity_oracle(ConstantMeasure(1.0), [[0.0], [0.0], [1.0]], [1, 1, -1])

    def test_accepts_labeled_examples(self):
        ex = [LabeledExample((0.0,), -1), LabeledExample((1.0,), 1), LabeledExample((2.0,), 1)]
        assert permutation_validity_oracle(ConstantMeasure(1.0), ex) == 1.0


class TestHyperset:
    def test_count_and_enumeration(self):
        h = Hyperset(((( 0.0,), -1), ((1.0,), 1)), (2, 1))
        assert h.cardinality == 3
        assert h.n_sequences == 3
        seqs = list(h.sequences())
        assert len(seqs) == len(set(seqs)) == 3

    @pytest.mark.parametrize("arities", [(1, 1, 1), (2, 2), (3, 1, 2), (1, 1, 1, 4)])
    def test_enumeration_matches_brute_force(self, arities):
        elems = tuple(((float(i),), 1 if i % 2 else -1) for i in range(len(arities)))
        h = Hyperset(elems, arities)
        multiset = [i for i, a in enumerate(arities) for _ in range(a)]
        distinct = set(itertools.permutations(multiset))
        assert set(h.sequences()) == distinct
        assert h.n_sequences == len(distinct)

    def test_signature(self):
        h = Hyperset.signature([[0.0], [1.0], [0.0]], [-1, 1, -1])
        assert dict(zip(h.elements, h.arities)) == {
            LabeledExample((0.0,), -1): 2, LabeledExample((1.0,), 1): 1}

    def test_rejects_repeated_elements(self):
        from tcmsvm import DataError
        with pytest.raises(DataError):
            Hyperset((((0.0,), 1), ((0.0,), 1)), (1, 1))


class TestExchangeableOracle:
    def test_constant(self):
        h = Hyperset((((0.0,), -1), ((1.0,), 1)), (2, 3))
        assert exchangeable_validity_oracle(ConstantMeasure(1.0), h) == 1.0

    @pytest.mark.parametrize("arities", [(2, 1), (1, 3, 2), (2, 2, 2), (1, 1, 1, 1)])
    def test_share_measure_is_exchangeable(self, arities):
        elems = tuple(((float(i) - 1.5,), 1 if i % 2 else -1) for i in range(len(arities)))
        h = Hyperset(elems, arities)
        assert exchangeable_validity_oracle(ShareMeasure(), h) == pytest.approx(1.0, abs=1e-12)

    def test_distinct_elements_agree_with_permutation_oracle(self, rng):
        X, y = random_instance(rng, 5, 2)
        h = Hyperset.signature(X, y)
        m = SVCountMeasure()
        assert exchangeable_validity_oracle(m, h) == pytest.approx(permutation_validity_oracle(m, X, y))

    def test_permutation_measures_are_infinite_on_repeats(self):
        h = Hyperset((((0.0,), -1), ((1.0,), 1)), (2, 1))
        assert exchangeable_validity_oracle(SVCountMeasure(), h) == math.inf

    def test_too_large(self):
        h = Hyperset((((0.0,), -1), ((1.0,), 1)), (4, 4))
        with pytest.raises(TooLarge):
            exchangeable_validity_oracle(ConstantMeasure(1.0), h)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(3, 9))
def test_duplicate_rule_for_all_measures(seed, m):
    rng = np.random.default_rng(seed)
    X, y = random_instance(rng, m, 2)
    i, j = rng.choice(m, 2, replace=False)
    X[j], y[j] = X[i], y[i]
    if len(set(y)) < 2:
        return
    for measure in (SVCountMeasure(), WeightedAlphaMeasure("identity"), MultiExampleMeasure(2)):
        assert measure(X, y) == math.inf


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(4, 12))
def test_ingredients_attach_to_examples(seed, m):
    """Alphas and SV membership follow the examples under reordering."""
    rng = np.random.default_rng(seed)
    X, y = random_instance(rng, m, 3)
    perm = rng.permutation(m)
    measure = SVCountMeasure()
    a = measure.support_weights(measure.solve(X, y))
    b = measure.support_weights(measure.solve(X[perm], y[perm]))
    np.testing.assert_array_equal(b, a[perm])


@pytest.mark.slow
def test_chebyshev_frequency():
    """P{p >= C} <= 1/C for the SV-count measure on i.i.d. sequences."""
    rng = np.random.default_rng(11)
    values = []
    for _ in range(500):
        X, y = random_instance(rng, 12, 2, noise=1.0)
        values.append(sv_count_measure(X, y))
    values = np.array(values)
    for c in (5.0, 10.0, 20.0):
        bound = 1 / c + 3 * math.sqrt((1 / c) * (1 - 1 / c) / 500)
        assert np.mean(values >= c) <= bound
    # the expectation itself is one
    assert values.mean() == pytest.approx(1.0, abs=0.25)
