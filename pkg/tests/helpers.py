"""Random instance generators shared by the test modules."""

import numpy as np

from modent import SymplecticHilbertSpace


def random_tau(rng, n):
    A = rng.standard_normal((n, n))
    return A @ A.T + n * np.eye(n) * rng.uniform(0.2, 2.0)


def random_space(rng, n, norm=None, kernel=0):
    """Random (tau, sigma) with ||D|| = ``norm`` (< 1 by default) and given even kernel dim."""
    tau = random_tau(rng, n)
    L = np.linalg.cholesky(tau)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    m = (n - kernel) // 2
    D = np.zeros((n, n))
    top = rng.uniform(0.05, 0.95, m)
    if norm is not None and m:
        top[0] = norm
    for j, s in enumerate(top):
        D[2 * j, 2 * j + 1], D[2 * j + 1, 2 * j] = s, -s
    D = Q @ D @ Q.T
    sigma = L @ D @ L.T
    return SymplecticHilbertSpace(tau, 0.5 * (sigma - sigma.T))


def random_generators(rng, n, k):
    return [rng.standard_normal(n) for _ in range(k)]


def random_plus_vector(rng, pure):
    return rng.standard_normal(pure.real_dim)
