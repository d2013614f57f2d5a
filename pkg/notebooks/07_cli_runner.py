# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # The command-line runner
#
# Every subcommand reads a JSON config and writes CSV/JSON artifacts plus a manifest
# with hashes.  The same entry point is callable from Python.

# %%
import json
import tempfile
from pathlib import Path

from modent.cli import main

configs = Path("configs") if Path("configs").exists() else Path("..") / "configs"
out = Path(tempfile.mkdtemp())
code = main(["entropy", "--config", str(configs / "skew_pair_entropy.json"), "--out", str(out / "skew_pair_entropy")])
print("exit code", code)
print((out / "skew_pair_entropy" / "entropy.csv").read_text())

# %%
code = main(["property-suite", "--config", str(configs / "skew_pair.json"),
             "--out", str(out / "skew")])
manifest = json.loads((out / "skew" / "manifest.json").read_text())
print("exit code", code, "complete", manifest["complete"], sorted(manifest["files"]))
