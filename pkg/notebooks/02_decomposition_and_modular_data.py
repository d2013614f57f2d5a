# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Splitting a subspace and its modular data
#
# A real subspace `L` of `K` splits the doubled space into four complex-orthogonal
# pieces: the part orthogonal to `L + i+L`, the abelian part, the factorial part and
# the part `L & i+L` where entropies are infinite.  On the standard part the Tomita
# operator gives the modular conjugation `J` and operator `Delta`.

# %%
import numpy as np

from modent import decompose, entropy_form, modular_data, pf_via_modular, purify
from modent.models import mode_generators, oscillator_space, skew_pair_data, to_real

np.set_printoptions(precision=5, suppress=True)

# %% [markdown]
# ## One oscillator with `M = 2`
# The whole mode is a factorial subspace; `log Delta` has spectrum `+-2 arcoth(2) = +-log 3`.

# %%
pure = purify(oscillator_space([2.0]))
dec = decompose(pure, mode_generators(1, [0]))
md = modular_data(dec)
print(dec.dims)
print("log Delta spectrum:", md.log_delta_spectrum)

# %% [markdown]
# With the second copy of `K` reflected, `(f, g) -> (f, -g)`, `Delta` takes the block
# form `[[1, -2/sqrt 3], [-2/sqrt 3, 7/3]]` (tensored with the identity on `C = R^2`).

# %%
flip = np.diag([1.0, 1.0, -1.0, -1.0])
print(flip @ md.Delta @ flip)

# %% [markdown]
# The cut projector `Q` has kernel equal to the symplectic complement of `L`; for the
# factorial part it is available both from a direct basis solve and from functional
# calculus of `Delta` and `J`.

# %%
print("P_f agreement:", np.abs(pf_via_modular(md) - dec.P_f_on).max())
form = entropy_form(md)
print("S(1) =", form.value(to_real([1.0])), " S(i) =", form.value(to_real([1j])), " log 3 =",
      np.log(3))

# %% [markdown]
# ## A subspace that is not invariant under `M`
# Two oscillators `M = diag(2, 3)`, `L0 = span_R{(1,1), (i,0)}` inside `L1 = C^2`.
# Cutting with `Q0` changes the entropy of `f = (a, b)` by `(b^2 - a^2) log 2`, which can
# be negative: `Q0` is not orthogonal for the entropy form of `L1`.

# %%
space, L0, L1 = skew_pair_data()
pure = purify(space)
cut = decompose(pure, L0)
form1 = entropy_form(modular_data(decompose(pure, L1)))
for a, b in [(0.0, 1.0), (1.0, 0.0), (0.5, 2.0)]:
    f = to_real([a, b])
    delta = form1.value(f) - form1.value(cut.cut(f))
    print(f"a={a}, b={b}: delta = {delta:.12f}, (b^2-a^2) log 2 = {(b*b - a*a)*np.log(2):.12f}")
print("dimensions of the cut subspace:", cut.dims)
