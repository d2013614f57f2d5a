# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Chiral U(1) current: half-line entropies and their second derivatives
#
# For half-lines `(-inf, t)` the surfaces are explicit integrals of `f'^2`.  The second
# derivative of the entropy splits into a boundary term (mixed derivative of `T_f`) and
# a bulk term (`d2T/dt2` just below the diagonal).  The vacuum has no bulk term; the
# thermal state has a negative one.

# %%
import math

import numpy as np

from modent import derivative_report
from modent.models import (Reparametrization, standard_bump, u1_family, u1_kms_entropy,
                           u1_vacuum_entropy)

f = standard_bump()
points = np.r_[np.linspace(-0.8, -0.2, 5), np.linspace(0.2, 0.8, 5)]

# %% [markdown]
# ## Vacuum: `d2S/dt2 = 2 pi f'(t)^2`

# %%
vac = u1_family()
for t in points[:4]:
    r = derivative_report(vac, f, float(t), h=1e-3)
    print(f"t={t:+.2f}  FD={r.d2S_dt2:.8f}  2pi f'^2={2*math.pi*float(f.deriv(t))**2:.8f}"
          f"  d2T/dt2(t-eps)={r.d2T_dt2_minus:.1e}")

# %% [markdown]
# ## Thermal state at inverse temperature `beta`

# %%
for beta in (1.0, 10.0):
    fam = u1_family(beta=beta)
    r = derivative_report(fam, f, -0.5, h=1e-3)
    print(beta, r.d2S_dt2, r.closed_form)

# %% [markdown]
# As `beta` grows the thermal entropy approaches the vacuum one.

# %%
for beta in (10.0, 100.0, 1000.0):
    print(beta, abs(u1_kms_entropy(f, 0.3, beta) - u1_vacuum_entropy(f, 0.3)))

# %% [markdown]
# ## Reparametrized family `L_{h(t)}`: a nonzero bulk term of either sign

# %%
h = Reparametrization("tanh", 0.3, 0.7)
fam = u1_family(h=h)
for t in (-0.4, 0.0, 0.3):
    r = derivative_report(fam, f, t, h=1e-3)
    print(t, r.d2S_dt2, r.closed_form)
