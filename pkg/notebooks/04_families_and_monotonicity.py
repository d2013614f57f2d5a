# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Increasing families, the surface `T_f(s, t)` and its monotonicity
#
# For an increasing family `t -> L_t` the surface `T_f(s, t) = S_t(Q_s f)` (for `s < t`)
# separates the variation of the cut from that of the region.  When `Q_s` is orthogonal
# for the entropy form of `L_t` (differential modular position) the surface is increasing
# in both variables and satisfies a rectangle inequality.

# %%
import numpy as np

from modent import dmp_check, property_suite, t_table
from modent.models import skew_pair_family, spectral_family, to_real

M = np.array([1.2, 2.0, 3.5, 6.0])
f = to_real(np.array([1, -0.5 + 0.9j, 0.7 - 0.3j, 0.2 + 1.1j]))
family = spectral_family(M, (0.0, 7.0))
grid = np.linspace(0.5, 6.5, 7)
table = t_table(family, f, grid, grid)
print(np.round(table.values, 4))

# %% [markdown]
# Spectral subspaces of `M` commute with the modular data, so every check passes.

# %%
report = property_suite(family, f, np.linspace(0.5, 6.5, 20))
print({k: (c.passed, c.worst) for k, c in report.checks.items()})
print(dmp_check(family, 1.5, 4.0).to_dict())

# %% [markdown]
# The two-step family built from a subspace that is not invariant under `M` fails both
# differential modular position and monotonicity in `s`.

# %%
skew = skew_pair_family()
print(dmp_check(skew, 0.0, 1.0).to_dict())
report = property_suite(skew, to_real([1.0, 0.0]), [0.0, 0.5, 1.0])
print("failed checks:", report.failed())
print(report.checks["increasing_in_s"].failures[:2])
