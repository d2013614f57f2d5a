"""Finite-dimensional symplectic Hilbert spaces.

A space is a pair of real matrices on R^n: a symmetric positive-definite Gram
matrix ``tau`` and an antisymmetric matrix ``sigma``, so that

    tau(f, g) = f @ tau @ g,      sigma(f, g) = f @ sigma @ g.

The basis is arbitrary; nothing downstream assumes ``tau`` is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as la

from .errors import DimensionMismatch, InvalidSummand

DEFAULT_RTOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymplecticHilbertSpace:
    """Real space with inner product ``tau`` and bounded symplectic form ``sigma``.

    ``rtol`` is the relative tolerance used for every validity and rank decision
    on this space; absolute thresholds are ``rtol * max eigenvalue of tau``.
    """

    tau: np.ndarray
    sigma: np.ndarray
    rtol: float = DEFAULT_RTOL
    padded: int = field(default=0, compare=False)

    def __post_init__(self):
        tau = _frozen(self.tau)
        sigma = _frozen(self.sigma)
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise DimensionMismatch(f"tau must be square, got shape {tau.shape}")
        if sigma.shape != tau.shape:
            raise DimensionMismatch(
                f"sigma has shape {sigma.shape}, tau has shape {tau.shape}")
        if tau.shape[0] == 0:
            raise DimensionMismatch("dimension must be positive")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self) -> int:
        return self.tau.shape[0]

    @classmethod
    def from_dict(cls, doc: dict, rtol: float = DEFAULT_RTOL) -> "SymplecticHilbertSpace":
        tau = np.asarray(doc["tau"], dtype=float)
        sigma = np.asarray(doc["sigma"], dtype=float)
        if "dim" in doc and tau.shape[0] != int(doc["dim"]):
            raise DimensionMismatch(f"dim={doc['dim']} but tau is {tau.shape}")
        return cls(tau, sigma, rtol=rtol)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "tau": self.tau.tolist(), "sigma": self.sigma.tolist()}

    @cached_property
    def tau_scale(self) -> float:
        return float(np.max(np.abs(la.eigvalsh(0.5 * (self.tau + self.tau.T)))))

    @cached_property
    def chol(self) -> np.ndarray:
        """Lower factor L with tau = L L^T; ``L.T @ f`` are orthonormal coordinates."""
        return la.cholesky(0.5 * (self.tau + self.tau.T), lower=True)

    @cached_property
    def sigma_on(self) -> np.ndarray:
        """sigma in tau-orthonormal coordinates; equals D there."""
        L = self.chol
        s = la.solve_triangular(L, la.solve_triangular(L, self.sigma.T, lower=True).T,
                                lower=True)
        return 0.5 * (s - s.T)

    def check_vector(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.dim,):
            raise DimensionMismatch(f"expected vector of length {self.dim}, got {f.shape}")
        return f

    def kernel_dim(self) -> int:
        s = la.svdvals(self.sigma_on)
        return int(np.sum(s <= self.rtol * max(1.0, s.max(initial=0.0))))

    def pad(self) -> "SymplecticHilbertSpace":
        """Append one tau-orthonormal direction on which sigma vanishes."""
        n = self.dim
        tau = np.zeros((n + 1, n + 1))
        sigma = np.zeros((n + 1, n + 1))
        tau[:n, :n] = self.tau
        tau[n, n] = 1.0
        sigma[:n, :n] = self.sigma
        return SymplecticHilbertSpace(tau, sigma, rtol=self.rtol, padded=self.padded + 1)


@dataclass(frozen=True)
class ValidationReport:
    is_valid: bool
    worst_symmetry_defect: float
    worst_antisymmetry_defect: float
    operator_norm_D: float
    messages: list[str]
    kernel_dim: int = 0
    needs_padding: bool = False

    def to_dict(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "worst_symmetry_defect": self.worst_symmetry_defect,
            "worst_antisymmetry_defect": self.worst_antisymmetry_defect,
            "operator_norm_D": self.operator_norm_D,
            "kernel_dim": self.kernel_dim,
            "needs_padding": self.needs_padding,
            "messages": list(self.messages),
        }


def validate_space(space: SymplecticHilbertSpace, tol: float | None = None) -> ValidationReport:
    """Check symmetry, positivity and the bound sigma(f,g)^2 <= tau(f,f) tau(g,g).

    The bound is equivalent to ``||D|| <= 1`` where sigma = tau(., D .); the
    norm is measured in the tau-norm.
    """
    tol = space.rtol if tol is None else tol
    tau, sigma = space.tau, space.sigma
    messages = []
    scale = max(1.0, float(np.max(np.abs(tau))))
    sym = float(np.max(np.abs(tau - tau.T)))
    anti = float(np.max(np.abs(sigma + sigma.T)))
    ok = True
    if sym > tol * scale:
        ok = False
        messages.append(f"tau not symmetric (defect {sym:.3g})")
    if anti > tol * scale:
        ok = False
        messages.append(f"sigma not antisymmetric (defect {anti:.3g})")

    w, U = la.eigh(0.5 * (tau + tau.T))
    if w[0] <= tol * w[-1] or w[-1] <= 0:
        messages.append(f"tau not positive definite (eigenvalues in [{w[0]:.3g}, {w[-1]:.3g}])")
        return ValidationReport(False, sym, anti, float("nan"), messages)

    W = U / np.sqrt(w)
    d_on = W.T @ (0.5 * (sigma - sigma.T)) @ W
    s = la.svdvals(d_on)
    norm_d = float(s[0])
    if norm_d > 1 + tol:
        ok = False
        messages.append(f"||D|| = {norm_d:.6g} exceeds 1: sigma is not bounded by tau")
    kdim = int(np.sum(s <= tol * max(1.0, norm_d)))
    pad = kdim % 2 == 1
    if pad:
        messages.append(f"ker D has odd dimension {kdim}; purification pads one dimension")
    return ValidationReport(ok, sym, anti, norm_d, messages, kdim, pad)


def direct_sum(spaces: list[SymplecticHilbertSpace]):
    """Block-diagonal sum of spaces.

    Returns the summed space and one index array per summand, mapping summand
    coordinates into the coordinates of the sum.
    """
    if not spaces:
        raise InvalidSummand("need at least one summand")
    for k, sp in enumerate(spaces):
        rep = validate_space(sp)
        if not rep.is_valid:
            raise InvalidSummand(f"summand {k} invalid: {'; '.join(rep.messages)}")
    tau = la.block_diag(*[sp.tau for sp in spaces])
    sigma = la.block_diag(*[sp.sigma for sp in spaces])
    offsets = np.cumsum([0] + [sp.dim for sp in spaces])
    maps = [np.arange(offsets[k], offsets[k + 1]) for k in range(len(spaces))]
    rtol = max(sp.rtol for sp in spaces)
    return SymplecticHilbertSpace(tau, sigma, rtol=rtol), maps


def split_vector(f, maps) -> list[np.ndarray]:
    f = np.asarray(f, dtype=float)
    return [f[idx] for idx in maps]


def join_vector(parts, maps) -> np.ndarray:
    n = sum(len(idx) for idx in maps)
    out = np.zeros(n)
    for part, idx in zip(parts, maps):
        out[idx] = part
    return out


def eval_forms(space: SymplecticHilbertSpace, f, g) -> tuple[float, float]:
    """Return ``(tau(f, g), sigma(f, g))``."""
    f = space.check_vector(f)
    g = space.check_vector(g)
    return float(f @ space.tau @ g), float(f @ space.sigma @ g)
