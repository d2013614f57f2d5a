"""Modular data of the standard part of a subspace and the entropy form.

On Ls+ = La+ (+) Lf+ the Tomita operator maps a + i+b to a - i+b for
a, b in Ls = La (+) Lf.  Its polar decomposition S = J Delta^{1/2} gives the
modular conjugation J and modular operator Delta; K = -log Delta generates the
modular flow U(x) = exp(-i+ x K).  The entropy form is

    R = c(K) (1 - J) c(K),      c(lam) = sqrt(lam / (1 - exp(-lam))),

extended by zero on L0+.  The relative entropy of coherent excitations g, f
is S(g - f) = <h, R h> with h = g - f, infinite whenever h has a component
in L_inf.  All matrices are in orthonormal coordinates (suffix ``_on``);
user-coordinate views are provided as properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as la

from .errors import IllConditioned, InfiniteComponent, SpectralSingularity
from .subspaces import Decomposition

INFINITY_RTOL = 1e-8
CLAMP_TOL = 1e-10
COND_LIMIT = 1e12


def c_function(lam):
    """c(lam) = sqrt(lam / (1 - exp(-lam))) with a series branch near 0."""
    lam = np.asarray(lam, dtype=float)
    small = np.abs(lam) < 1e-4
    safe = np.where(small, 1.0, lam)
    direct = safe / (-np.expm1(-safe))
    series = 1.0 + lam / 2.0 + lam**2 / 12.0
    return np.sqrt(np.where(small, series, direct))


def _sym(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def _spectral(A: np.ndarray, fn) -> np.ndarray:
    w, V = la.eigh(_sym(A))
    return (V * fn(w)) @ V.T


@dataclass(frozen=True, eq=False)
class ModularData:
    dec: Decomposition
    W: np.ndarray          # orthonormal basis of Ls+ (La+ columns first, then Lf+)
    S_W: np.ndarray        # Tomita operator in W coordinates
    delta_eigvals: np.ndarray
    delta_eigvecs: np.ndarray  # columns in orthonormal K+ coordinates
    J_W: np.ndarray
    K_W: np.ndarray

    @property
    def pure(self):
        return self.dec.pure

    def _embed(self, A_W: np.ndarray) -> np.ndarray:
        return self.W @ A_W @ self.W.T

    @cached_property
    def Delta_W(self) -> np.ndarray:
        V = self.W.T @ self.delta_eigvecs
        return (V * self.delta_eigvals) @ V.T

    @cached_property
    def Delta_on(self) -> np.ndarray:
        """Delta on Ls+, zero elsewhere."""
        return self._embed(self.Delta_W)

    @cached_property
    def J_on(self) -> np.ndarray:
        return self._embed(self.J_W)

    @cached_property
    def K_on(self) -> np.ndarray:
        """-log Delta on Ls+, extended by zero on L0+ (and, as a convention, on L_inf)."""
        return self._embed(self.K_W)

    @property
    def Delta(self) -> np.ndarray:
        return self.pure.op_from_on(self.Delta_on)

    @property
    def J(self) -> np.ndarray:
        return self.pure.op_from_on(self.J_on)

    @property
    def K(self) -> np.ndarray:
        return self.pure.op_from_on(self.K_on)

    @cached_property
    def log_delta_spectrum(self) -> np.ndarray:
        return np.sort(np.log(self.delta_eigvals))

    @cached_property
    def Delta_f_W(self) -> np.ndarray:
        """Delta restricted to Lf+, in the Lf+ block of W."""
        k = self.dec.Laplus.dim
        return self.Delta_W[k:, k:]

    @cached_property
    def J_f_W(self) -> np.ndarray:
        k = self.dec.Laplus.dim
        return self.J_W[k:, k:]


def modular_data(dec: Decomposition, cond_limit: float = COND_LIMIT) -> ModularData:
    """Tomita-Takesaki data of the standard part La (+) Lf."""
    pure = dec.pure
    I = pure.i_on
    W = np.hstack([dec.Laplus.onb, dec.Lfplus.onb])
    B = np.hstack([dec.La.onb, dec.Lf.onb])
    k = B.shape[1]
    if k == 0:
        empty = np.zeros((0, 0))
        return ModularData(dec, W, empty, np.zeros(0), np.zeros((pure.real_dim, 0)),
                           empty, empty)
    G = W.T @ np.hstack([B, I @ B])
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditioned(f"basis of Ls+ has condition number {cond:.3g}")
    sign = np.concatenate([np.ones(k), -np.ones(k)])
    S_W = np.linalg.solve(G.T, (G * sign).T).T  # G diag(sign) G^{-1}
    U, s, Vt = la.svd(S_W)
    V = Vt.T
    J_W = U @ Vt
    w = s**2
    K_W = -(V * np.log(w)) @ V.T
    return ModularData(dec, W, S_W, w, W @ V, J_W, _sym(K_W))


def modular_flow(md: ModularData, x: float, f) -> np.ndarray:
    """U(x) f = (cos(xK) - i+ sin(xK)) f; identity on L0+ and La+."""
    pure = md.pure
    v = pure.lift(f)
    u = pure.to_on(v)
    inf_part = md.dec.Linf.projector_on @ u
    if np.linalg.norm(inf_part) > INFINITY_RTOL * max(1.0, np.linalg.norm(u)):
        raise InfiniteComponent("modular flow is undefined on L_inf")
    cos_K = _spectral(md.K_on, lambda w: np.cos(x * w))
    sin_K = _spectral(md.K_on, lambda w: np.sin(x * w))
    return pure.from_on(cos_K @ u - pure.i_on @ (sin_K @ u))


@dataclass(frozen=True, eq=False)
class EntropyForm:
    md: ModularData
    R_on: np.ndarray   # symmetric PSD, zero on L0+ and L_inf

    @property
    def dec(self) -> Decomposition:
        return self.md.dec

    @property
    def pure(self):
        return self.md.pure

    @cached_property
    def R(self) -> np.ndarray:
        return self.pure.op_from_on(self.R_on)

    @cached_property
    def cK2_on(self) -> np.ndarray:
        return _spectral(self.md.K_on, lambda w: c_function(w) ** 2)

    @property
    def infinite_subspace(self) -> np.ndarray:
        return self.dec.Linf.basis

    def _on(self, h) -> np.ndarray:
        return self.pure.to_on(self.pure.lift(h))

    def is_infinite(self, h) -> bool:
        u = self._on(h)
        inf_part = self.dec.Linf.projector_on @ u
        return bool(np.linalg.norm(inf_part) > INFINITY_RTOL * np.linalg.norm(u))

    def value(self, h) -> float:
        """S(h) = <h, R h>, or ``math.inf`` if h has an L_inf component."""
        u = self._on(h)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0
        if np.linalg.norm(self.dec.Linf.projector_on @ u) > INFINITY_RTOL * norm:
            return math.inf
        s = float(u @ self.R_on @ u)
        if -CLAMP_TOL * max(1.0, norm**2) <= s < 0.0:
            s = 0.0
        return s

    def bilinear(self, f, g) -> float:
        """Polarized form S(f, g) = <f, R g> (finite part only)."""
        return float(self._on(f) @ self.R_on @ self._on(g))


def entropy_form(md: ModularData) -> EntropyForm:
    if md.W.shape[1] == 0:
        n2 = md.pure.real_dim
        return EntropyForm(md, np.zeros((n2, n2)))
    cK = _spectral(md.K_W, c_function)
    one = np.eye(md.W.shape[1])
    R_W = cK @ (one - md.J_W) @ cK
    return EntropyForm(md, md.W @ _sym(R_W) @ md.W.T)


def relative_entropy(form: EntropyForm, g, f) -> float:
    """Entropy of the coherent excitation g relative to f: S(g - f), possibly ``math.inf``."""
    pure = form.pure
    return form.value(pure.lift(g) - pure.lift(f))


def pf_via_modular(md: ModularData, tol: float = 1e-8) -> np.ndarray:
    """P_f = a(Delta_f) + J b(Delta_f), a = 1/(1-lam), b = sqrt(lam) a (orthonormal coordinates)."""
    dec = md.dec
    n2 = md.pure.real_dim
    if dec.Lf.dim == 0:
        return np.zeros((n2, n2))
    w, V = la.eigh(_sym(md.Delta_f_W))
    if np.min(np.abs(w - 1.0)) <= tol:
        raise SpectralSingularity("Delta has eigenvalue 1 on Lf+")
    a = 1.0 / (1.0 - w)
    A = (V * a) @ V.T
    Bm = (V * (np.sqrt(w) * a)) @ V.T
    Wf = dec.Lfplus.onb
    return Wf @ (A + md.J_f_W @ Bm) @ Wf.T


def factorial_entropy(md: ModularData, g) -> float:
    """Independent route for the factorial part: sigma+(g, P_f i+ K g)."""
    pure = md.pure
    u = pure.to_on(pure.lift(g))
    I = pure.i_on
    v = md.dec.P_f_on @ I @ md.K_on @ u
    return float(-u @ I @ v)


def abelian_entropy_part(dec: Decomposition, g) -> float:
    """Abelian part 2 ||(1 - P_a) g_a||^2 with g_a the La+ component of g."""
    pure = dec.pure
    u = dec.Laplus.projector_on @ pure.to_on(pure.lift(g))
    r = u - dec.P_a_on @ u
    return float(2.0 * r @ r)
