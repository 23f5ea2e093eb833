import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discotec import ConnectivityMatrix, Ensemble, InvalidInputError, Partition, canonicalise, connectivity, is_degenerate
from discotec.partitions import dense_connectivity

import oracles

labels_st = st.lists(st.integers(0, 6), min_size=1, max_size=40)


@pytest.mark.parametrize("labels, expected", [
    ([5, 5, 9, 2], [0, 0, 1, 2]),
    ([0, 1, 2], [0, 1, 2]),
    ([3, 3, 3], [0, 0, 0]),
])
def test_canonicalise(labels, expected):
    assert canonicalise(Partition(labels)).labels.tolist() == expected


def test_canonicalise_accepts_negative_ids():
    assert canonicalise([-1, 4, -1]).labels.tolist() == [0, 1, 0]


def test_empty_labels_rejected():
    with pytest.raises(InvalidInputError):
        canonicalise([])
    with pytest.raises(InvalidInputError):
        Partition([])


def test_partition_rejects_negative_and_fractional():
    with pytest.raises(InvalidInputError):
        Partition([0, -1])
    with pytest.raises(InvalidInputError):
        Partition([0.5, 1])


def test_k_counts_distinct_labels():
    p = Partition([7, 7, 3])
    assert (p.n, p.k) == (3, 2)


@pytest.mark.parametrize("labels, dense", [
    ([0, 0, 1], [[1, 1, 0], [1, 1, 0], [0, 0, 1]]),
    ([0, 1, 2], np.eye(3, dtype=int).tolist()),
    ([0, 0, 0], np.ones((3, 3), dtype=int).tolist()),
])
def test_connectivity_examples(labels, dense):
    a = connectivity(Partition(labels))
    assert a.to_dense().astype(int).tolist() == dense


def test_connectivity_packed_indexing():
    labels = [0, 1, 0, 2, 1, 0, 0, 2, 1, 1, 2]
    a = connectivity(Partition(labels))
    for i in range(len(labels)):
        for j in range(len(labels)):
            assert a[i, j] == int(labels[i] == labels[j])


@pytest.mark.parametrize("labels, expected", [
    ([0, 0, 0, 0], True),
    ([0, 1, 2, 3], True),
    ([0, 0, 1, 1], False),
])
def test_is_degenerate(labels, expected):
    assert is_degenerate(Partition(labels)) is expected


@settings(max_examples=60, deadline=None)
@given(labels_st, st.randoms(use_true_random=False))
def test_connectivity_invariant_under_relabelling(labels, rnd):
    ids = sorted(set(labels))
    new_ids = rnd.sample(range(100), len(ids))
    mapping = dict(zip(ids, new_ids))
    relabelled = Partition([mapping[v] for v in labels])
    assert connectivity(relabelled) == connectivity(Partition(labels))
    assert connectivity(canonicalise(Partition(labels))) == connectivity(Partition(labels))


@settings(max_examples=60, deadline=None)
@given(labels_st)
def test_canonicalise_idempotent(labels):
    once = canonicalise(Partition(labels))
    assert canonicalise(once) == once
    assert set(once.labels.tolist()) == set(range(once.k))


@settings(max_examples=40, deadline=None)
@given(labels_st)
def test_connectivity_is_equivalence_relation(labels):
    m = connectivity(Partition(labels)).to_dense()
    n = len(labels)
    assert m.diagonal().all()
    assert (m == m.T).all()
    for i in range(n):
        for j in range(n):
            if not m[i, j]:
                continue
            for k in range(n):
                if m[j, k]:
                    assert m[i, k]
    assert m.astype(int).tolist() == oracles.connectivity(labels)


def test_ensemble_rejects_mixed_sizes():
    with pytest.raises(InvalidInputError):
        Ensemble([[0, 1], [0, 1, 1]])
    with pytest.raises(InvalidInputError):
        Ensemble([])


def test_ensemble_without_degenerate():
    e = Ensemble([[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 2, 3], [0, 1, 1, 1]])
    kept, idx = e.without_degenerate()
    assert idx == [1, 3]
    assert len(kept) == 2


def test_from_dense_round_trip():
    m = dense_connectivity(np.array([0, 1, 0, 1, 2, 0, 0, 0, 0, 1]))
    assert np.array_equal(ConnectivityMatrix.from_dense(m).to_dense(), m)
