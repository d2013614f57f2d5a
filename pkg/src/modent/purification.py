"""Purification of a symplectic Hilbert space.

The doubled space K+ = K (+) K carries the complex structure

    i+ = [[-D,            C sqrt(1+D^2)],
          [C sqrt(1+D^2), D            ]]

built from the polar pieces of D (sigma = tau(., D .)).  Coordinates of K+
vectors are pairs ``(f, g)`` in the user's basis of K, stacked into one
2n-vector.  Internally everything is done in tau-orthonormal coordinates,
where adjoints are transposes; ``to_on``/``from_on`` convert.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as la

from .errors import DimensionMismatch, NormViolation, OddKernel
from .spaces import SymplecticHilbertSpace, validate_space


@dataclass(frozen=True, eq=False)
class PureSpace:
    base: SymplecticHilbertSpace
    i_on: np.ndarray
    D_on: np.ndarray
    absD_on: np.ndarray
    C_on: np.ndarray
    original_dim: int

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def real_dim(self) -> int:
        return 2 * self.base.dim

    @property
    def rtol(self) -> float:
        return self.base.rtol

    # -- coordinate changes -------------------------------------------------

    @cached_property
    def _lam(self) -> np.ndarray:
        Lt = self.base.chol.T
        return la.block_diag(Lt, Lt)

    @cached_property
    def _lam_inv(self) -> np.ndarray:
        Lti = la.solve_triangular(self.base.chol.T, np.eye(self.n), lower=False)
        return la.block_diag(Lti, Lti)

    def to_on(self, v) -> np.ndarray:
        """User K+ coordinates (vector or column matrix) to orthonormal ones."""
        return self._lam @ np.asarray(v, dtype=float)

    def from_on(self, u) -> np.ndarray:
        return self._lam_inv @ np.asarray(u, dtype=float)

    def op_from_on(self, A) -> np.ndarray:
        """Matrix of an operator given in orthonormal coordinates, in user coordinates."""
        return self._lam_inv @ A @ self._lam

    def op_to_on(self, A) -> np.ndarray:
        return self._lam @ A @ self._lam_inv

    def _base_from_on(self, A) -> np.ndarray:
        L = self.base.chol
        return la.solve_triangular(L.T, A @ L.T, lower=False)

    # -- user-coordinate views ----------------------------------------------

    @cached_property
    def i_matrix(self) -> np.ndarray:
        return self.op_from_on(self.i_on)

    @cached_property
    def tau_plus(self) -> np.ndarray:
        return la.block_diag(self.base.tau, self.base.tau)

    @cached_property
    def sigma_plus(self) -> np.ndarray:
        """Gram matrix of sigma+(f, g) = tau+(f, -i+ g)."""
        return -self.tau_plus @ self.i_matrix

    @cached_property
    def D(self) -> np.ndarray:
        return self._base_from_on(self.D_on)

    @cached_property
    def absD(self) -> np.ndarray:
        return self._base_from_on(self.absD_on)

    @cached_property
    def C(self) -> np.ndarray:
        return self._base_from_on(self.C_on)

    # -- vectors ------------------------------------------------------------

    def check_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.real_dim,):
            raise DimensionMismatch(f"expected K+ vector of length {self.real_dim}, got {v.shape}")
        return v

    def lift(self, v) -> np.ndarray:
        """Accept an n-vector of K (embedded as f (+) 0) or a 2n-vector of K+."""
        v = np.asarray(v, dtype=float)
        if v.ndim == 1 and v.shape[0] in (self.original_dim, self.n) and v.shape[0] != self.real_dim:
            return embed(self, v)
        return self.check_vector(v)

    def represent_functional(self, values) -> np.ndarray:
        """Minimal-norm v in K+ with sigma+(v, e_j (+) 0) = values[j] for base vectors e_j.

        Used to feed a coherent excitation that is only known through its
        symplectic pairing with K.
        """
        values = np.asarray(values, dtype=float)
        if values.shape[0] < self.n:
            values = np.concatenate([values, np.zeros(self.n - values.shape[0])])
        A = np.hstack([self.base.chol, np.zeros((self.n, self.n))]) @ self.i_on
        u = np.linalg.lstsq(A, values, rcond=None)[0]
        return self.from_on(u)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "original_dim": self.original_dim,
            "i_matrix": self.i_matrix.tolist(),
            "tau_plus": self.tau_plus.tolist(),
            "D": self.D.tolist(),
            "absD": self.absD.tolist(),
            "C": self.C.tolist(),
        }


def _kernel_pairing(V: np.ndarray) -> np.ndarray:
    k = V.shape[1]
    P = np.zeros((k, k))
    for j in range(0, k, 2):
        P[j + 1, j] = 1.0
        P[j, j + 1] = -1.0
    return V @ P @ V.T


def purify(space: SymplecticHilbertSpace, tol: float | None = None, pad: bool = True) -> PureSpace:
    """Build the pure doubled space of ``space``.

    If ker D is odd-dimensional the space is first extended by one
    tau-orthonormal direction where sigma vanishes (``pad=True``).
    """
    tol = space.rtol if tol is None else tol
    rep = validate_space(space, tol)
    if rep.operator_norm_D > 1 + tol:
        raise NormViolation(f"||D|| = {rep.operator_norm_D:.6g} > 1")
    if not rep.is_valid:
        raise NormViolation("; ".join(rep.messages))
    original_dim = space.dim
    if rep.needs_padding:
        if not pad:
            raise OddKernel(f"ker D has odd dimension {rep.kernel_dim}")
        space = space.pad()

    D = space.sigma_on
    U, s, Vt = la.svd(D)
    rng = s > tol * max(1.0, s[0] if s.size else 0.0)
    # sqrt(1 - s^2) turns rounding of s near 1 into O(sqrt(eps)) errors; snap those to pure
    s = np.where(rng, np.where(s >= 1.0 - tol, 1.0, s), 0.0)
    V = Vt.T
    Vr, Ur = V[:, rng], U[:, rng]
    Vk = V[:, ~rng]
    if Vk.shape[1] % 2:
        raise OddKernel(f"ker D has odd dimension {Vk.shape[1]}")
    C = Ur @ Vr.T + _kernel_pairing(Vk)
    absD = (V * s) @ V.T
    root = (V * np.sqrt(np.clip(1.0 - s**2, 0.0, None))) @ V.T
    X = C @ root
    i_on = np.block([[-D, X], [X, D]])
    return PureSpace(space, i_on, D, absD, C, original_dim)


def embed(pure: PureSpace, f) -> np.ndarray:
    """f in K  ->  f (+) 0 in K+."""
    f = np.asarray(f, dtype=float)
    if f.shape not in ((pure.n,), (pure.original_dim,)):
        raise DimensionMismatch(f"expected K vector of length {pure.original_dim}, got {f.shape}")
    out = np.zeros(pure.real_dim)
    out[: f.shape[0]] = f
    return out


def complex_scalar(pure: PureSpace, f, g) -> tuple[float, float]:
    """Real and imaginary part of <f, g>+ = tau+(f, g) + i sigma+(f, g)."""
    f = pure.check_vector(f)
    g = pure.check_vector(g)
    return float(f @ pure.tau_plus @ g), float(f @ pure.sigma_plus @ g)
