# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Relative entropy against closed forms
#
# The generic engine is compared with three closed forms: independent oscillators,
# commutative (abelian) spaces and direct sums.  Infinite entropies are reported as
# `math.inf`.

# %%
import math

import numpy as np

from modent import decompose, direct_sum, entropy_form, modular_data, purify
from modent.models import (abelian_entropy, abelian_space, complex_vector, mode_generators,
                           oscillator_entropy, oscillator_space, subset_generators, to_real)

rng = np.random.default_rng(0)

# %% [markdown]
# ## Oscillators: `S = 2 (f, E arcoth(M) f)`

# %%
M = rng.uniform(1.01, 10, 6)
modes = [0, 2, 3, 5]
f = rng.standard_normal(6) + 1j * rng.standard_normal(6)
form = entropy_form(modular_data(decompose(purify(oscillator_space(M)), mode_generators(6, modes))))
print(form.value(to_real(f)), oscillator_entropy(M, modes, f))

# %% [markdown]
# A mode with `m = 1` is pure; populating it gives infinite entropy.

# %%
form = entropy_form(modular_data(decompose(purify(oscillator_space([1.0, 3.0])),
                                           mode_generators(2, [0, 1]))))
print(form.value(to_real([1.0, 0.0])), form.value(to_real([0.0, 1.0])))

# %% [markdown]
# ## Abelian spaces: `S = 2 sum_Y mu (Im f)^2`

# %%
w = rng.uniform(0.1, 5, 5)
mask = np.array([True, False, True, True, False])
pure = purify(abelian_space(w))
form = entropy_form(modular_data(decompose(pure, subset_generators(5, mask))))
f = rng.standard_normal(5) + 1j * rng.standard_normal(5)
print(form.value(complex_vector(pure, f)), abelian_entropy(w, mask, f))

# %% [markdown]
# ## Additivity over direct sums

# %%
osc, ab = oscillator_space([2.0, 4.0]), abelian_space([1.0, 3.0])
total, maps = direct_sum([osc, ab])
gens = [np.r_[g, 0, 0] for g in mode_generators(2, [0, 1])] + [np.r_[0, 0, 0, 0, 0, 1.0]]
u, v = rng.standard_normal(6), rng.standard_normal(6)
pt = purify(total)
whole = entropy_form(modular_data(decompose(pt, gens))).value(pt.lift(u) + pt.i_matrix @ pt.lift(v))
po, pa = purify(osc), purify(ab)
s_osc = entropy_form(modular_data(decompose(po, mode_generators(2, [0, 1])))).value(
    po.lift(u[:4]) + po.i_matrix @ po.lift(v[:4]))
s_ab = entropy_form(modular_data(decompose(pa, [[0, 1.0]]))).value(
    pa.lift(u[4:]) + pa.i_matrix @ pa.lift(v[4:]))
print(whole, s_osc + s_ab, math.isclose(whole, s_osc + s_ab, rel_tol=1e-12))
