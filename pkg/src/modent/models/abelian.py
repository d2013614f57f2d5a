"""Commutative models: K = L^2_R(X, mu) sampled on finitely many points, sigma = 0."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..purification import PureSpace
from ..spaces import SymplecticHilbertSpace


def abelian_space(weights, rtol: float = 1e-10) -> SymplecticHilbertSpace:
    """tau = diag(mu), sigma = 0."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w <= 0):
        raise ConfigError("weights must be a non-empty list of positive numbers")
    return SymplecticHilbertSpace(np.diag(w), np.zeros((w.size, w.size)), rtol=rtol)


def abelian_entropy(weights, Y_mask, f) -> float:
    """2 sum_{x in Y} mu(x) (Im f(x))^2."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ConfigError("weights must be nonnegative")
    mask = np.asarray(Y_mask, dtype=bool)
    im = np.imag(np.asarray(f, dtype=complex))
    return float(2.0 * np.sum(w[mask] * im[mask] ** 2))


def subset_generators(n: int, Y_mask) -> list[np.ndarray]:
    return [np.eye(n)[k] for k in np.flatnonzero(np.asarray(Y_mask, dtype=bool))]


def complex_vector(pure: PureSpace, f) -> np.ndarray:
    """Complex samples u + i v as the K+ vector (u (+) 0) + i+(v (+) 0)."""
    f = np.asarray(f, dtype=complex)
    return pure.lift(f.real) + pure.i_matrix @ pure.lift(f.imag)
