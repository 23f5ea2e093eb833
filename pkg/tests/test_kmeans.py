import numpy as np
import pytest

from discotec import ari
from discotec.indices import wgss
from discotec.kmeans import KMeansConfig, generate_pool, kmeans, lloyd
from discotec.partitions import InvalidInputError


def blobs(centres, per=30, spread=0.3, seed=0):
    rng = np.random.default_rng(seed)
    x = np.vstack([rng.normal(c, spread, (per, len(c))) for c in centres])
    return x, np.repeat(np.arange(len(centres)), per)


def test_single_cluster():
    x = np.random.default_rng(0).normal(size=(15, 2))
    assert kmeans(x, KMeansConfig(k=1)).k == 1


def test_every_point_its_own_cluster():
    x = np.random.default_rng(1).normal(size=(12, 3))
    for init in ("kmeans++", "random-points"):
        p = kmeans(x, KMeansConfig(k=12, init=init))
        assert p.k == 12
        assert wgss(x, p) == 0.0


def test_two_separated_blobs_recovered():
    x, y = blobs([(0, 0), (25, 25)], seed=2)
    assert ari(kmeans(x, KMeansConfig(k=2, seed=4)), y) == 1.0


def test_k_larger_than_n():
    with pytest.raises(InvalidInputError):
        kmeans(np.zeros((3, 1)), KMeansConfig(k=4))


@pytest.mark.parametrize("kwargs", [dict(k=0), dict(k=2, max_iterations=0), dict(k=2, tolerance=-1), dict(k=2, init="x")])
def test_config_validation(kwargs):
    with pytest.raises(InvalidInputError):
        KMeansConfig(**kwargs)


def test_objective_non_increasing():
    x = np.random.default_rng(3).normal(size=(200, 2))
    for seed in range(5):
        _, _, history = lloyd(x, KMeansConfig(k=6, seed=seed, init="random-points", tolerance=0))
        assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))


def test_empty_cluster_reseeded():
    x = np.array([[0.0], [0.0], [0.0], [10.0]])
    p = kmeans(x, KMeansConfig(k=2, seed=0, init="random-points"))
    assert p.k == 2


def test_pool_cardinality_and_determinism():
    x, _ = blobs([(0, 0), (5, 5), (10, 0)], seed=1)
    a = generate_pool(x, range(2, 5), repeats=2, seed=7)
    b = generate_pool(x, range(2, 5), repeats=2, seed=7)
    assert len(a) <= 6
    assert a.label_matrix().tobytes() == b.label_matrix().tobytes()


def test_pool_contains_good_model():
    x, y = blobs([(0, 0), (6, 6), (12, 0)], seed=3)
    pool = generate_pool(x, range(2, 6), repeats=3, seed=0)
    assert max(ari(p, y) for p in pool) >= 0.9


def test_pool_drops_degenerate():
    x = np.random.default_rng(0).normal(size=(6, 2))
    pool = generate_pool(x, [1, 2, 6], repeats=1, seed=0)
    assert all(1 < p.k < 6 for p in pool)


def test_empty_range():
    with pytest.raises(InvalidInputError):
        generate_pool(np.zeros((4, 1)), [], repeats=1)
