import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discotec import (
    ConstraintSet,
    ContractViolationError,
    DistanceKind,
    Ensemble,
    InvalidInputError,
    Partition,
    ScoreReport,
    binarise,
    binary_discotec_score,
    build_consensus,
    connectivity,
    discotec_score,
    informativeness,
    pair_distance,
    rank_ensemble,
)
from discotec.scoring import constraint_violations, discotec_scores

import oracles

PI1, PI3 = [0, 0, 1, 1], [0, 1, 0, 1]


@st.composite
def ensembles(draw, max_n=15, max_t=8):
    n = draw(st.integers(2, max_n))
    t = draw(st.integers(1, max_t))
    return [draw(st.lists(st.integers(0, 4), min_size=n, max_size=n)) for _ in range(t)]


class TestPairDistance:
    def test_table_entries(self):
        assert pair_distance("kl", 1, 0.5) == pytest.approx(math.log(2), rel=1e-15)
        assert pair_distance("tv", 0, 0.25) == 0.25
        assert pair_distance("h2", 1, 0.81) == pytest.approx(0.1, rel=1e-12)
        assert pair_distance("tv", 1, 1.0) == 0.0

    @pytest.mark.parametrize("kind", ["kl", "tv", "h2"])
    @pytest.mark.parametrize("a, c", [(0, 1.0), (1, 0.0)])
    def test_infeasible(self, kind, a, c):
        with pytest.raises(ContractViolationError):
            pair_distance(kind, a, c)

    @pytest.mark.parametrize("kind", ["kl", "tv", "h2"])
    def test_equal_inputs_are_zero(self, kind):
        assert pair_distance(kind, 0, 0.0) == 0.0
        assert pair_distance(kind, 1, 1.0) == 0.0

    def test_binary_has_no_pair_distance(self):
        with pytest.raises(InvalidInputError):
            pair_distance(DistanceKind.BINARY, 1, 0.5)

    @pytest.mark.parametrize("kind", ["kl", "tv", "h2"])
    def test_matches_oracle_on_grid(self, kind):
        for a in (0, 1):
            for c in np.linspace(0.01, 0.99, 33):
                assert pair_distance(kind, a, c) == pytest.approx(oracles.divergence(kind, a, c), rel=1e-12)


class TestWorkedFixture:
    def test_kl_scores(self, fixture_ensemble):
        c = build_consensus(fixture_ensemble)
        assert discotec_score(connectivity(Partition(PI1)), c, "kl") == pytest.approx(8 * math.log(1.5) / 16, rel=1e-12)
        assert discotec_score(connectivity(Partition(PI3)), c, "kl") == pytest.approx(8 * math.log(3) / 16, rel=1e-12)

    def test_binary_scores(self, fixture_ensemble):
        q = binarise(build_consensus(fixture_ensemble))
        assert binary_discotec_score(connectivity(Partition(PI1)), q) == 0.0
        assert binary_discotec_score(connectivity(Partition(PI3)), q) == 0.5
        assert binary_discotec_score(q, q) == 0.0

    def test_identical_ensemble_scores_zero(self):
        e = Ensemble([[0, 1, 1, 2, 2]] * 4)
        c = build_consensus(e)
        for kind in ("kl", "tv", "h2"):
            assert discotec_score(connectivity(e[0]), c, kind) == 0.0
        for kind in DistanceKind:
            assert np.all(rank_ensemble(e, kind).scores == 0.0)

    def test_rank_binary(self, fixture_ensemble):
        r = rank_ensemble(fixture_ensemble, "binary")
        assert r.scores.tolist() == [0.0, 0.0, 0.5]
        assert r.ranking.tolist() == [0, 1, 2]

    def test_rank_kl(self, fixture_ensemble):
        r = rank_ensemble(fixture_ensemble, "kl")
        np.testing.assert_allclose(r.scores, [0.5 * math.log(1.5)] * 2 + [0.5 * math.log(3)], rtol=1e-12)
        assert r.ranking.tolist() == [0, 1, 2]

    def test_constraints_invert_order(self, fixture_ensemble):
        cs = ConstraintSet.from_pairs(must_link=[(0, 2)], cannot_link=[(0, 1)])
        r = rank_ensemble(fixture_ensemble, "binary", cs)
        assert r.totals.tolist() == [1.0, 1.0, 0.5]
        assert r.ranking.tolist() == [2, 0, 1]


def test_dimension_mismatch(fixture_ensemble):
    c = build_consensus(fixture_ensemble)
    with pytest.raises(InvalidInputError):
        discotec_score(connectivity(Partition([0, 1, 0])), c, "tv")
    with pytest.raises(InvalidInputError):
        binary_discotec_score(connectivity(Partition([0, 1, 0])), binarise(c))


def test_contradicting_connectivity_rejected():
    c = build_consensus(Ensemble([[0, 0, 1]] * 3))
    with pytest.raises(ContractViolationError):
        discotec_score(connectivity(Partition([0, 1, 1])), c, "tv")


class TestInformativeness:
    def test_examples(self):
        ml01_cl02 = ConstraintSet.from_pairs([(0, 1)], [(0, 2)])
        assert informativeness(connectivity(Partition(PI3)), ml01_cl02) == 1.0
        assert informativeness(connectivity(Partition(PI1)), ml01_cl02) == 0.0
        assert informativeness(connectivity(Partition(PI1)), ConstraintSet.from_pairs([(0, 1), (0, 2)])) == 0.5

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            informativeness(connectivity(Partition(PI1)), ConstraintSet())

    def test_partition_and_matrix_agree(self):
        cs = ConstraintSet.from_pairs([(0, 3), (1, 2)], [(0, 1)])
        for p in ([0, 0, 1, 1], [0, 1, 1, 0], [0, 0, 0, 0]):
            assert informativeness(Partition(p), cs) == informativeness(connectivity(Partition(p)), cs)

    def test_invalid_sets(self):
        with pytest.raises(InvalidInputError):
            ConstraintSet.from_pairs([(1, 1)])
        with pytest.raises(InvalidInputError):
            ConstraintSet.from_pairs([(0, 1)], [(1, 0)])
        with pytest.raises(InvalidInputError):
            constraint_violations(Ensemble([PI1]), ConstraintSet.from_pairs([(0, 9)]))


def _all_pairs(n):
    return list(itertools.combinations(range(n), 2))


def test_constraint_monotonicity_exhaustive(fixture_ensemble):
    """Adding a violated constraint never lowers a total; a satisfied one never raises it.

    Every constraint set over the 4-point fixture (each pair absent/ML/CL) is
    extended by every possible further constraint.
    """
    pairs = _all_pairs(4)
    for kind in DistanceKind:
        base_scores = discotec_scores(fixture_ensemble, kind)
        for assignment in itertools.product((None, "ML", "CL"), repeat=len(pairs)):
            ml = [p for p, a in zip(pairs, assignment) if a == "ML"]
            cl = [p for p, a in zip(pairs, assignment) if a == "CL"]
            before = rank_ensemble(fixture_ensemble, kind, ConstraintSet.from_pairs(ml, cl)).totals
            free = [p for p, a in zip(pairs, assignment) if a is None]
            for extra, which in itertools.product(free, ("ML", "CL")):
                ml2 = ml + [extra] if which == "ML" else ml
                cl2 = cl + [extra] if which == "CL" else cl
                after = rank_ensemble(fixture_ensemble, kind, ConstraintSet.from_pairs(ml2, cl2)).totals
                for t, p in enumerate(fixture_ensemble):
                    together = p.labels[extra[0]] == p.labels[extra[1]]
                    violated = (which == "ML") != together
                    if violated:
                        assert after[t] >= before[t]
                    else:
                        assert after[t] <= before[t]
            np.testing.assert_allclose(before, base_scores + (
                constraint_violations(fixture_ensemble, ConstraintSet.from_pairs(ml, cl)) if ml or cl else 0),
                rtol=1e-15)


@settings(max_examples=120, deadline=None)
@given(ensembles(), st.sampled_from(list(DistanceKind)))
def test_scores_match_naive_oracle(parts, kind):
    e = Ensemble(parts)
    got = discotec_scores(e, kind)
    for t, p in enumerate(parts):
        ref = oracles.score(kind.value, p, parts)
        if kind is DistanceKind.BINARY:
            assert got[t] == ref
        else:
            assert got[t] == pytest.approx(ref, rel=1e-12, abs=1e-15)
    c = build_consensus(e)
    if kind is not DistanceKind.BINARY:
        for t, p in enumerate(e):
            assert discotec_score(connectivity(p), c, kind) == pytest.approx(got[t], rel=1e-12, abs=1e-15)


@settings(max_examples=80, deadline=None)
@given(ensembles(), st.sampled_from(list(DistanceKind)))
def test_score_ranges(parts, kind):
    s = discotec_scores(Ensemble(parts), kind)
    assert np.all(s >= 0)
    if kind is not DistanceKind.KL:
        assert np.all(s <= 1)


@settings(max_examples=60, deadline=None)
@given(ensembles(), st.sampled_from(list(DistanceKind)), st.randoms(use_true_random=False))
def test_label_and_observation_permutation(parts, kind, rnd):
    e = Ensemble(parts)
    base = discotec_scores(e, kind)
    relabelled = [[(v * 7 + 3) % 11 for v in p] for p in parts]
    np.testing.assert_allclose(discotec_scores(Ensemble(relabelled), kind), base, rtol=1e-12, atol=1e-15)
    n = len(parts[0])
    perm = list(range(n))
    rnd.shuffle(perm)
    permuted = [[p[i] for i in perm] for p in parts]
    np.testing.assert_allclose(discotec_scores(Ensemble(permuted), kind), base, rtol=1e-12, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(ensembles(max_t=6), st.data())
def test_violated_constraint_never_lowers_total(parts, data):
    e = Ensemble(parts)
    n = e.n
    pairs = _all_pairs(n)
    chosen = data.draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=6, unique=True))
    kinds = data.draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    ml = [p for p, k in zip(chosen, kinds) if k]
    cl = [p for p, k in zip(chosen, kinds) if not k]
    cs = ConstraintSet.from_pairs(ml, cl)
    reg = constraint_violations(e, cs)
    for t, p in enumerate(parts):
        assert reg[t] == pytest.approx(oracles.violations(p, ml, cl))


def test_ranking_ties_by_index_and_determinism(fixture_ensemble):
    a = rank_ensemble(fixture_ensemble, "tv")
    b = rank_ensemble(fixture_ensemble, "tv")
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
    assert ScoreReport.from_dict(a.to_dict()) == a
    r = ScoreReport.build("x", [0.3, 0.1, 0.3, 0.1])
    assert r.ranking.tolist() == [1, 3, 0, 2]
    r = ScoreReport.build("x", [0.3, 0.1, 0.3, 0.1], higher_is_better=True)
    assert r.ranking.tolist() == [0, 2, 1, 3]


def test_warns_below_three_models():
    with pytest.warns(UserWarning):
        rank_ensemble(Ensemble([PI1, PI3]), "binary")


def test_unknown_kind():
    with pytest.raises(InvalidInputError):
        rank_ensemble(Ensemble([PI1] * 3), "js")
