# %% [markdown]
# # Ranking three models on four points
#
# Two models agree that points {0, 1} and {2, 3} belong together; the third
# pairs {0, 2} and {1, 3}. The consensus sides with the majority, so the
# odd model comes last.

# %%
import math

from discotec import Ensemble, build_consensus, binarise, mean_threshold, rank_ensemble

e = Ensemble([[0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 0, 1]])
c = build_consensus(e)
print(c.values)
print("mean threshold:", mean_threshold(c))
print(binarise(c).to_dense().astype(int))

# %% [markdown]
# Scores are distances to the consensus, so lower is better.

# %%
for kind in ("binary", "kl", "tv", "h2"):
    r = rank_ensemble(e, kind)
    print(f"{kind:>6}: scores={r.scores.round(4).tolist()} ranking={r.ranking.tolist()}")

assert rank_ensemble(e, "binary").scores.tolist() == [0.0, 0.0, 0.5]
assert math.isclose(rank_ensemble(e, "kl").scores[2], 0.5 * math.log(3))
