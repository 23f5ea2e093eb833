# %% [markdown]
# # Command line round trip
#
# Generate an ensemble to CSV, rank it, and export the consensus matrix.

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

tmp = Path(tempfile.mkdtemp())
cli = [sys.executable, "-m", "discotec"]


def run(*args):
    out = subprocess.run([*cli, *map(str, args)], check=True, capture_output=True, text=True)
    return out.stdout


run("synth", "--scenario", "uniform", "--n", 100, "--k", 5, "--t", 12, "--rho-max", 0.8,
    "--seed", 1, "--out", tmp / "models.csv", "--truth-out", tmp / "truth.csv")
print(run("rank", tmp / "models.csv", "--method", "binary", "--out", tmp / "report.json"))
print(run("consensus", "--partitions", tmp / "models.csv", "--out-matrix", tmp / "consensus.csv"))
print(sorted(p.name for p in tmp.iterdir()))
