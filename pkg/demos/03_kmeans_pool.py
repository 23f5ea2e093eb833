# %% [markdown]
# # A pool of KMeans models with different numbers of clusters
#
# Internal indices compare models through the data; the consensus scores
# only need the partitions.

# %%
import numpy as np

from discotec import ari
from discotec.evaluation import Dataset, run_protocol
from discotec.kmeans import generate_pool
from discotec.partitions import Partition

rng = np.random.default_rng(0)
centres = np.array([[0, 0], [6, 0], [0, 6], [6, 6]])
x = np.vstack([rng.normal(c, 1.0, (50, 2)) for c in centres])
truth = Partition(np.repeat(np.arange(4), 50))

pool = generate_pool(x, k_range=range(2, 9), repeats=3, seed=0)
print(len(pool), "models; ARI with truth:", np.round([ari(p, truth) for p in pool], 2))

# %%
res = run_protocol([Dataset(pool, truth, data=x, name="blobs")],
                   ["binary", "kl", "aari", "anmi", "wgss", "chi", "silhouette", "dbi"])
d = res.datasets[0]
for m in res.methods:
    print(f"{m:>10}: tau={d.kendall[m]: .3f}  ARI of pick={d.selected_ari[m]:.3f}  best={d.best_ari:.3f}")
