# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Discretized U(1) current
#
# Cubic B-splines on a window give a finite-dimensional symplectic space whose Gram
# matrix is the vacuum two-point function.  The half-line subspace is spanned by the
# splines supported left of `t`; the probe enters through its symplectic pairing.  As
# the grid is refined the engine's entropy grows towards the closed form; what remains
# at fine grids is the truncation of the half-line to the window.

# %%
from modent.models import convergence_study, discretize_u1, standard_bump

model = discretize_u1(16)
print("dimension:", model.space.dim, "spacing:", model.spacing)

# %%
rows = convergence_study(standard_bump(), 0.0, (16, 32, 64))
for r in rows:
    print(r.to_dict())
