"""Real-linear subspace algebra in K+ and the four-way split of a subspace.

Subspaces are stored by a tau+-orthonormal basis in orthonormal coordinates
(``onb``); ``basis`` gives the same columns in user coordinates.  Rank
decisions use singular values against a relative tolerance; intersections use
sines of principal angles, which stay accurate for nearly aligned subspaces.

For L in K the split is

    L_inf = L & i+L                 (nonseparating part)
    L0+   = (L + i+L)^perp
    La    = L & L'                  (abelian part, L' = symplectic complement)
    La+   = La + i+La
    Lf+   = (L0+ + La+ + L_inf)^perp
    Lf    = Lf+ & L                 (factorial part)

and K+ = L0+ (+) La+ (+) Lf+ (+) L_inf, complex-orthogonally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as la

from .errors import DegenerateDecomposition, NotInBaseSpace, SpaceMismatch
from .purification import PureSpace


@dataclass(frozen=True, eq=False)
class Subspace:
    pure: PureSpace
    onb: np.ndarray  # 2n x k, orthonormal columns in orthonormal coordinates

    @property
    def dim(self) -> int:
        return self.onb.shape[1]

    @cached_property
    def basis(self) -> np.ndarray:
        """tau+-orthonormal basis in user coordinates (2n x k)."""
        return self.pure.from_on(self.onb)

    @cached_property
    def projector_on(self) -> np.ndarray:
        return self.onb @ self.onb.T

    @cached_property
    def projector(self) -> np.ndarray:
        """tau+-orthogonal projector in user coordinates."""
        return self.pure.op_from_on(self.projector_on)

    def contains(self, v, tol: float = 1e-9) -> bool:
        u = self.pure.to_on(self.pure.lift(v))
        r = u - self.projector_on @ u
        return bool(np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(u)))

    def is_complex(self, tol: float = 1e-9) -> bool:
        iB = self.pure.i_on @ self.onb
        return bool(np.linalg.norm(iB - self.projector_on @ iB) <= tol * max(1, self.dim))


def _zero(pure: PureSpace) -> Subspace:
    return Subspace(pure, np.zeros((pure.real_dim, 0)))


def _tol(pure: PureSpace, tol: float | None) -> float:
    return pure.rtol if tol is None else tol


def span_on(pure: PureSpace, M: np.ndarray, tol: float | None = None) -> Subspace:
    """Span of the columns of ``M`` (orthonormal coordinates)."""
    tol = _tol(pure, tol)
    M = np.asarray(M, dtype=float).reshape(pure.real_dim, -1)
    if M.shape[1] == 0:
        return _zero(pure)
    U, s, _ = la.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return _zero(pure)
    r = int(np.sum(s > tol * s[0]))
    return Subspace(pure, U[:, :r])


def span(pure: PureSpace, generators, tol: float | None = None) -> Subspace:
    """tau+-orthonormal basis of the real span of ``generators``.

    Generators may be K vectors (embedded as f (+) 0) or K+ vectors.
    """
    gens = [pure.lift(g) for g in generators]
    if not gens:
        return _zero(pure)
    return span_on(pure, pure.to_on(np.column_stack(gens)), tol)


def whole(pure: PureSpace) -> Subspace:
    return Subspace(pure, np.eye(pure.real_dim))


def base_subspace(pure: PureSpace) -> Subspace:
    """K (+) 0 inside K+."""
    onb = np.zeros((pure.real_dim, pure.n))
    onb[: pure.n] = np.eye(pure.n)
    return Subspace(pure, onb)


def _same(A: Subspace, B: Subspace):
    if A.pure is not B.pure:
        raise SpaceMismatch("subspaces belong to different purified spaces")


def intersect(A: Subspace, B: Subspace, tol: float | None = None) -> Subspace:
    _same(A, B)
    tol = _tol(A.pure, tol)
    if A.dim == 0 or B.dim == 0:
        return _zero(A.pure)
    Y = B.onb - A.onb @ (A.onb.T @ B.onb)
    _, s, Wt = la.svd(Y, full_matrices=True)
    s_full = np.zeros(B.dim)
    s_full[: s.size] = s
    keep = s_full <= tol
    if not keep.any():
        return _zero(A.pure)
    return span_on(A.pure, B.onb @ Wt.T[:, keep], tol)


def complement(A: Subspace, within: Subspace | None = None, tol: float | None = None) -> Subspace:
    """tau+-orthogonal complement of A inside ``within`` (default: all of K+)."""
    within = whole(A.pure) if within is None else within
    _same(A, within)
    tol = _tol(A.pure, tol)
    if A.dim == 0:
        return within
    if within.dim == 0:
        return within
    M = A.onb.T @ within.onb
    _, s, Wt = la.svd(M, full_matrices=True)
    s_full = np.zeros(within.dim)
    s_full[: s.size] = s
    keep = s_full <= tol
    if not keep.any():
        return _zero(A.pure)
    return span_on(A.pure, within.onb @ Wt.T[:, keep], tol)


def add(A: Subspace, B: Subspace, tol: float | None = None) -> Subspace:
    _same(A, B)
    return span_on(A.pure, np.hstack([A.onb, B.onb]), tol)


def apply_on(A: Subspace, op_on: np.ndarray, tol: float | None = None) -> Subspace:
    return span_on(A.pure, op_on @ A.onb, tol)


def complexify(A: Subspace, tol: float | None = None) -> Subspace:
    """A + i+A."""
    return span_on(A.pure, np.hstack([A.onb, A.pure.i_on @ A.onb]), tol)


def symplectic_complement(pure: PureSpace, L: Subspace, ambient: str = "base",
                          tol: float | None = None) -> Subspace:
    """Vectors f with sigma(f, g) = 0 for all g in L.

    ``ambient="base"`` returns the complement inside K (+) 0 and requires
    L to lie there.  ``ambient="plus"`` returns the sigma+-complement in all of
    K+, which is what the cut projector annihilates.  In orthonormal
    coordinates sigma+(f, g) = -f . (i+ g), so L' = (i+L)^perp.
    """
    if L.pure is not pure:
        raise SpaceMismatch("subspace belongs to a different purified space")
    iL = apply_on(L, pure.i_on, tol)
    if ambient == "plus":
        return complement(iL, tol=tol)
    if ambient != "base":
        raise ValueError(f"ambient must be 'base' or 'plus', got {ambient!r}")
    if L.dim and np.linalg.norm(L.onb[pure.n:]) > 1e-9 * np.sqrt(L.dim):
        raise NotInBaseSpace("subspace is not contained in K (+) 0")
    return complement(iL, within=base_subspace(pure), tol=tol)


@dataclass(frozen=True, eq=False)
class Decomposition:
    pure: PureSpace
    L: Subspace
    L0plus: Subspace
    Laplus: Subspace
    Lfplus: Subspace
    Linf: Subspace
    La: Subspace
    Lf: Subspace
    Lprime: Subspace       # sigma+-complement of L in K+
    Lf_kernel: Subspace    # Lf' & Lf+, the kernel of P_f
    P_f_on: np.ndarray
    Q_on: np.ndarray

    @property
    def dims(self) -> dict:
        return {"L": self.L.dim, "L0plus": self.L0plus.dim, "Laplus": self.Laplus.dim,
                "Lfplus": self.Lfplus.dim, "Linf": self.Linf.dim,
                "La": self.La.dim, "Lf": self.Lf.dim}

    @cached_property
    def Ls(self) -> Subspace:
        return Subspace(self.pure, np.hstack([self.La.onb, self.Lf.onb]))

    @cached_property
    def Lsplus(self) -> Subspace:
        return Subspace(self.pure, np.hstack([self.Laplus.onb, self.Lfplus.onb]))

    @cached_property
    def P_a_on(self) -> np.ndarray:
        return self.La.projector_on

    @cached_property
    def P_a(self) -> np.ndarray:
        return self.pure.op_from_on(self.P_a_on)

    @cached_property
    def P_f(self) -> np.ndarray:
        return self.pure.op_from_on(self.P_f_on)

    @cached_property
    def Q(self) -> np.ndarray:
        return self.pure.op_from_on(self.Q_on)

    def cut(self, v) -> np.ndarray:
        """Q_L v in user coordinates."""
        return self.Q @ self.pure.lift(v)

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "P_a": self.P_a.tolist(),
            "P_f": self.P_f.tolist(),
            "Q": self.Q.tolist(),
            "bases": {name: getattr(self, name).basis.tolist()
                      for name in ("L0plus", "Laplus", "Lfplus", "Linf", "La", "Lf")},
        }


def decompose(pure: PureSpace, generators, tol: float | None = None,
              cond_limit: float = 1e12) -> Decomposition:
    """Split the subspace spanned by ``generators`` (which must lie in K)."""
    L = span(pure, generators, tol)
    if L.dim and np.linalg.norm(L.onb[pure.n:]) > 1e-9 * np.sqrt(L.dim):
        raise NotInBaseSpace("generators must lie in K (+) 0")
    return decompose_subspace(L, tol, cond_limit)


def decompose_subspace(L: Subspace, tol: float | None = None,
                       cond_limit: float = 1e12) -> Decomposition:
    pure = L.pure
    I = pure.i_on
    iL = apply_on(L, I, tol)
    LpiL = add(L, iL, tol)
    Linf = complexify(intersect(L, iL, tol), tol)
    L0plus = complement(LpiL, tol=tol)
    Lprime = complement(iL, tol=tol)
    La = intersect(L, Lprime, tol)
    Laplus = complexify(La, tol)
    Lfplus = complement(add(Laplus, Linf, tol), within=LpiL, tol=tol)
    Lf = intersect(Lfplus, L, tol)
    Lf_kernel = complement(apply_on(Lf, I, tol), within=Lfplus, tol=tol)

    total = L0plus.dim + Laplus.dim + Lfplus.dim + Linf.dim
    if total != pure.real_dim or Lfplus.dim != 2 * Lf.dim or Laplus.dim != 2 * La.dim:
        raise DegenerateDecomposition(
            f"inconsistent dimensions: L0+={L0plus.dim}, La+={Laplus.dim} (La={La.dim}), "
            f"Lf+={Lfplus.dim} (Lf={Lf.dim}), Linf={Linf.dim}, 2n={pure.real_dim}")

    P_f_on = np.zeros((pure.real_dim, pure.real_dim))
    if Lf.dim:
        W = Lfplus.onb
        Cm = W.T @ np.hstack([Lf.onb, Lf_kernel.onb])
        if Cm.shape[0] != Cm.shape[1] or np.linalg.cond(Cm) > cond_limit:
            raise DegenerateDecomposition("Lf and Lf' & Lf+ do not span Lf+")
        sel = np.zeros(Cm.shape[0])
        sel[: Lf.dim] = 1.0
        P_f_on = W @ (Cm * sel) @ np.linalg.inv(Cm) @ W.T

    Q_on = (Laplus.projector_on - La.projector_on) + P_f_on + Linf.projector_on
    return Decomposition(pure, L, L0plus, Laplus, Lfplus, Linf, La, Lf, Lprime, Lf_kernel,
                         P_f_on, Q_on)


def project_components(dec: Decomposition, g):
    """Split g into its L0+, La+, Lf+ and L_inf components (user coordinates)."""
    pure = dec.pure
    u = pure.to_on(pure.lift(g))
    return tuple(pure.from_on(X.projector_on @ u)
                 for X in (dec.L0plus, dec.Laplus, dec.Lfplus, dec.Linf))
