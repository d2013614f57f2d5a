# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Symplectic Hilbert spaces and their purification
#
# A space is a pair of matrices: a positive Gram matrix `tau` and an
# antisymmetric `sigma` with `|sigma(f, g)|^2 <= tau(f, f) tau(g, g)`.
# Purification doubles the space and builds a complex structure `i+` for
# which the doubled forms are a genuine complex scalar product.

# %%
import numpy as np

from modent import (SymplecticHilbertSpace, complex_scalar, direct_sum, embed, purify,
                    validate_space)

space = SymplecticHilbertSpace(tau=[[2.0, 0.3], [0.3, 1.0]], sigma=[[0.0, 0.6], [-0.6, 0.0]])
report = validate_space(space)
print(report.to_dict())

# %% [markdown]
# The complex structure squares to `-1` and is orthogonal for the doubled inner product;
# on `K (+) 0` the doubled forms restrict to the original ones.

# %%
pure = purify(space)
I = pure.i_matrix
print("i+^2 = -1:", np.allclose(I @ I, -np.eye(4)))
print("i+ tau+-orthogonal:", np.allclose(I.T @ pure.tau_plus @ I, pure.tau_plus))
f, g = np.array([1.0, -0.5]), np.array([0.2, 0.7])
print("tau, sigma on K:", f @ space.tau @ g, f @ space.sigma @ g)
print("<f,g>+ on K(+)0:", complex_scalar(pure, embed(pure, f), embed(pure, g)))

# %% [markdown]
# An odd-dimensional kernel of `sigma` is padded with one extra direction so that the
# kernel can carry a complex structure.

# %%
odd = SymplecticHilbertSpace(np.eye(3), [[0, 0.5, 0], [-0.5, 0, 0], [0, 0, 0]])
print(validate_space(odd).messages)
print("padded dimension:", purify(odd).n)

# %% [markdown]
# Direct sums are block diagonal; the index maps locate each summand.

# %%
total, maps = direct_sum([space, odd])
print(total.dim, [m.tolist() for m in maps])
