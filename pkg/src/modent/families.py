"""Increasing families t -> L_t, the surface T_f(s, t), and their checks.

In finite dimensions the surface reduces to

    T_f(s, t) = S_t(Q_s f)   for s < t,
    T_f(s, t) = S_t(f)       for s >= t,

so it is evaluated through the entropy form of L_t and the cut projector of
L_s.  Model-backed families supply closed forms instead.  Derivatives are
central finite differences; checks of the monotonicity properties run over
all grid rectangles at once.
"""

from __future__ import annotations

import csv
import io
import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as la

from .errors import InfiniteOnStencil, JumpOnStencil, NotIncreasing, StencilOutOfDomain
from .modular import EntropyForm, entropy_form, modular_data
from .purification import PureSpace, purify
from .subspaces import Decomposition, decompose, span, symplectic_complement


class MatrixFamily:
    """Family of subspaces of one purified space, given by a generator function.

    Decompositions and entropy forms are cached per parameter value; the
    cache is insert-once and safe under concurrent use.
    """

    def __init__(self, pure: PureSpace, generator: Callable, domain, name: str = "matrix",
                 monotone_attested: bool = False):
        self.pure = pure
        self.generator = generator
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name
        self.monotone_attested = monotone_attested
        self._cache: dict[float, tuple[Decomposition, EntropyForm]] = {}
        self._lock = threading.Lock()

    def _data(self, t: float):
        t = float(t)
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        dec = decompose(self.pure, list(self.generator(t)))
        value = (dec, entropy_form(modular_data(dec)))
        with self._lock:
            return self._cache.setdefault(t, value)

    def decomposition(self, t: float) -> Decomposition:
        return self._data(t)[0]

    def form(self, t: float) -> EntropyForm:
        return self._data(t)[1]

    def entropy(self, f, t: float) -> float:
        return self.form(t).value(f)

    def tf(self, f, s: float, t: float) -> float:
        if s >= t:
            return self.entropy(f, t)
        return self.form(t).value(self.decomposition(s).cut(f))


class ModelFamily:
    """Family given by closed forms ``tf(f, s, t)`` (and optionally derivative terms)."""

    def __init__(self, tf: Callable, domain, name: str = "model",
                 second_derivative_terms: Callable | None = None):
        self._tf = tf
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name
        self.second_derivative_terms = second_derivative_terms
        self.monotone_attested = True

    def tf(self, f, s: float, t: float) -> float:
        return float(self._tf(f, min(s, t), t))

    def entropy(self, f, t: float) -> float:
        return self.tf(f, t, t)


def build_family(space, generator: Callable, domain, attest: bool = False,
                 n_samples: int = 16, name: str = "matrix") -> MatrixFamily:
    """Wrap ``generator`` (t -> list of K vectors) as a cached family.

    With ``attest=True`` inclusion L_s in L_t is checked on ``n_samples``
    increasing parameter values; a violation raises NotIncreasing.
    """
    pure = space if isinstance(space, PureSpace) else purify(space)
    fam = MatrixFamily(pure, generator, domain, name=name)
    if attest:
        ts = np.linspace(fam.domain[0], fam.domain[1], n_samples)
        prev = None
        for t in ts:
            cur = span(pure, list(generator(t)))
            if prev is not None:
                for k, v in enumerate(prev[1].basis.T):
                    if not cur.contains(v):
                        raise NotIncreasing(
                            f"L({prev[0]:.6g}) is not contained in L({t:.6g}) (basis vector {k})")
            prev = (t, cur)
        fam.monotone_attested = True
    return fam


# -- tables -----------------------------------------------------------------


@dataclass
class TfTable:
    s_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray           # len(s_grid) x len(t_grid); inf marks infinite cells
    entropy_diagonal: np.ndarray  # S_t(f) on t_grid
    family_name: str = ""

    @property
    def is_infinite(self) -> np.ndarray:
        return ~np.isfinite(self.values)

    def rows(self):
        for i, s in enumerate(self.s_grid):
            for j, t in enumerate(self.t_grid):
                v = self.values[i, j]
                yield s, t, v, not math.isfinite(v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "T", "is_infinite"])
        for s, t, v, inf in self.rows():
            w.writerow([f"{s:.17g}", f"{t:.17g}", "inf" if inf else f"{v:.17g}", int(inf)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        def enc(x):
            return [None if not math.isfinite(v) else v for v in x]
        return {
            "family": self.family_name,
            "s_grid": self.s_grid.tolist(),
            "t_grid": self.t_grid.tolist(),
            "values": [enc(row) for row in self.values],
            "is_infinite": self.is_infinite.tolist(),
            "entropy_diagonal": enc(self.entropy_diagonal),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def t_table(family, f, s_grid, t_grid, threads: int = 1) -> TfTable:
    s_grid = np.asarray(s_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    cells = [(i, j) for i in range(s_grid.size) for j in range(t_grid.size)]

    def cell(ij):
        i, j = ij
        return family.tf(f, s_grid[i], t_grid[j])

    if threads > 1:
        # warm the per-t cache serially so every cell is a read
        if isinstance(family, MatrixFamily):
            for t in np.union1d(s_grid, t_grid):
                family.form(t)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(cell, cells))
    else:
        out = [cell(ij) for ij in cells]
    values = np.array(out, dtype=float).reshape(s_grid.size, t_grid.size)
    diag = np.array([family.entropy(f, t) for t in t_grid])
    return TfTable(s_grid, t_grid, values, diag, getattr(family, "name", ""))


# -- differential modular position -------------------------------------------


@dataclass
class DmpReport:
    s: float
    t: float
    residual: float          # ||Q^T R (1-Q)|| / (||R|| ||Q|| ||1-Q||)
    sampled_residual: float  # worst normalized pairing over random samples
    tol: float
    holds: bool
    density: str = "vacuous in finite dimensions"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _range_basis(A: np.ndarray, rtol: float) -> np.ndarray:
    if A.shape[1] == 0:
        return A
    U, s, _ = la.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return A[:, :0]
    return U[:, s > rtol * s[0]]


def dmp_check(family: MatrixFamily, s: float, t: float, num_samples: int = 32,
              tol: float = 1e-7, seed: int = 0, eps: float = 1e-14) -> DmpReport:
    """Check that Q_s is orthogonal for the entropy form of L_t."""
    if s >= t:
        return DmpReport(s, t, 0.0, 0.0, tol, True)
    pure = family.pure
    dec_s = family.decomposition(s)
    form_t = family.form(t)
    # R vanishes on L_inf(t), so restricting to the finite-entropy domain is automatic
    R = form_t.R_on
    Q = dec_s.Q_on
    one = np.eye(pure.real_dim)
    cross = Q.T @ R @ (one - Q)
    denom = la.norm(R, 2) * la.norm(Q, 2) * la.norm(one - Q, 2)
    residual = float(la.norm(cross, 2) / denom) if denom > 0 else 0.0
    plus = _range_basis(Q, 1e-10)
    minus = _range_basis(symplectic_complement(pure, dec_s.L, "plus").onb, 1e-10)
    scale = max(1.0, float(la.norm(R, 2)))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_samples if plus.shape[1] and minus.shape[1] else 0):
        a = plus @ rng.standard_normal(plus.shape[1])
        b = minus @ rng.standard_normal(minus.shape[1])
        val = abs(a @ R @ b) / math.sqrt(max(a @ R @ a, 0.0) * max(b @ R @ b, 0.0) + eps * scale)
        worst = max(worst, val)
    return DmpReport(s, t, residual, float(worst), tol, residual <= tol)


# -- derivatives ------------------------------------------------------------


@dataclass
class DerivativeReport:
    t: float
    h: float
    eps: float
    S: float
    dS_dt: float
    d2S_dt2: float
    d2T_dt2_minus: float      # bulk term at s = t - eps
    d2T_dsdt_minus: float     # boundary term at s = t - eps
    d2T_ds2_minus: float
    d2T_dt2_plus: float       # at s = t + eps (equals d2S_dt2 up to rounding)
    bound_residual_upper: float   # d2T_dt2_plus - d2S_dt2, should vanish
    bound_residual_lower: float   # d2S_dt2 - d2T_dt2_minus, should be >= 0 (smooth case)
    bound_residual_lower_nonsmooth: float  # d2S_dt2 - (d2T_dt2 + d2T_ds2)(t - eps)
    closed_form: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def detect_jump(values, rel: float = 1e3, floor: float = 1e-8) -> bool:
    """Flag a step: largest increment > rel * median and above the absolute floor."""
    v = np.asarray(values, dtype=float)
    inc = np.abs(np.diff(v))
    if inc.size == 0:
        return False
    big = inc.max()
    return bool(big > rel * np.median(inc) and big > floor * (1.0 + np.abs(v).max()))


def derivative_report(family, f, t: float, h: float | None = None,
                      eps: float | None = None) -> DerivativeReport:
    """Central-difference second derivatives of S_t(f) and of T_f near the diagonal."""
    lo, hi = family.domain
    if h is None:
        h = 1e-3 * (hi - lo)
    eps = 2 * h if eps is None else eps
    reach = eps + h
    if t - reach < lo or t + reach > hi:
        raise StencilOutOfDomain(f"stencil [{t - reach}, {t + reach}] leaves domain {family.domain}")

    T = family.tf
    stencil = np.linspace(t - reach, t + reach, 7)
    diag = np.array([family.entropy(f, x) for x in stencil])
    if not np.all(np.isfinite(diag)):
        raise InfiniteOnStencil(f"infinite entropy on the stencil around t={t}")
    if detect_jump(diag):
        raise JumpOnStencil(f"entropy jumps on the stencil around t={t}")

    S0 = family.entropy(f, t)
    Sp, Sm = family.entropy(f, t + h), family.entropy(f, t - h)
    d1 = (Sp - Sm) / (2 * h)
    d2 = (Sp - 2 * S0 + Sm) / h**2

    def tt(s0):
        return (T(f, s0, t + h) - 2 * T(f, s0, t) + T(f, s0, t - h)) / h**2

    sm = t - eps
    d2t_minus = tt(sm)
    d2t_plus = tt(t + eps)
    d2ss = (T(f, sm + h, t) - 2 * T(f, sm, t) + T(f, sm - h, t)) / h**2
    mixed = (T(f, sm + h, t + h) - T(f, sm + h, t - h)
             - T(f, sm - h, t + h) + T(f, sm - h, t - h)) / (4 * h**2)
    closed = {}
    terms = getattr(family, "second_derivative_terms", None)
    if terms is not None:
        boundary, bulk = terms(f, t)
        closed = {"boundary": boundary, "bulk": bulk, "sum": boundary + bulk}
    return DerivativeReport(
        t=t, h=h, eps=eps, S=S0, dS_dt=d1, d2S_dt2=d2,
        d2T_dt2_minus=d2t_minus, d2T_dsdt_minus=mixed, d2T_ds2_minus=d2ss,
        d2T_dt2_plus=d2t_plus,
        bound_residual_upper=d2t_plus - d2,
        bound_residual_lower=d2 - d2t_minus,
        bound_residual_lower_nonsmooth=d2 - (d2t_minus + d2ss),
        closed_form=closed,
    )


# -- monotonicity suite -----------------------------------------------------


@dataclass
class CheckResult:
    passed: bool
    worst: float
    failures: list

    def to_dict(self) -> dict:
        return {"passed": self.passed, "worst": self.worst, "failures": self.failures}


@dataclass
class PropertyReport:
    tol: float
    checks: dict
    infinite_cells: int
    table: TfTable | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        return {"tol": self.tol, "passed": self.passed, "infinite_cells": self.infinite_cells,
                "checks": {k: c.to_dict() for k, c in self.checks.items()}}


def _check(slack: np.ndarray, tol: float, where, limit: int = 10) -> CheckResult:
    """slack >= -tol everywhere passes; ``where`` maps flat indices to labels."""
    slack = np.asarray(slack, dtype=float)
    finite = np.isfinite(slack)
    if not finite.any():
        return CheckResult(True, 0.0, [])
    worst = float(slack[finite].min())
    bad = np.argwhere(finite & (slack < -tol))
    fails = [where(tuple(int(k) for k in idx), float(slack[tuple(idx)])) for idx in bad[:limit]]
    return CheckResult(bad.shape[0] == 0, worst, fails)


def property_suite(family, f, grid, tol: float | None = None, threads: int = 1) -> PropertyReport:
    """Monotonicity in t and s, constancy on s >= t, diagonal growth, rectangle inequality."""
    g = np.sort(np.asarray(grid, dtype=float))
    table = t_table(family, f, g, g, threads=threads)
    T = table.values
    finite = np.isfinite(T)
    tmax = float(np.abs(T[finite]).max(initial=0.0))
    tol = 1e-8 * (1.0 + tmax) if tol is None else tol
    with np.errstate(invalid="ignore"):
        dt = T[:, 1:] - T[:, :-1]
        ds = T[1:, :] - T[:-1, :]
        upper = g[:-1, None] >= g[None, :]
        const = np.where(upper, -np.abs(ds), np.nan)
        diag = np.diff(np.diag(T))
        # T(s2,t2) - T(s2,t1) - T(s1,t2) + T(s1,t1) for s1<s2, t1<t2
        rect = (T[None, :, None, :] - T[None, :, :, None]
                - T[:, None, None, :] + T[:, None, :, None])
        n = g.size
        idx = np.arange(n)
        mask = (idx[:, None, None, None] < idx[None, :, None, None]) & \
               (idx[None, None, :, None] < idx[None, None, None, :])
        rect = np.where(mask, rect, np.nan)

    checks = {
        "increasing_in_t": _check(dt, tol, lambda k, v: {"s": g[k[0]], "t": g[k[1]],
                                                         "t_next": g[k[1] + 1], "slack": v}),
        "increasing_in_s": _check(ds, tol, lambda k, v: {"s": g[k[0]], "s_next": g[k[0] + 1],
                                                         "t": g[k[1]], "slack": v}),
        "constant_in_s_on_upper_cone": _check(const, tol, lambda k, v: {
            "s": g[k[0]], "s_next": g[k[0] + 1], "t": g[k[1]], "slack": v}),
        "diagonal_increasing": _check(diag, tol, lambda k, v: {"t": g[k[0]], "t_next": g[k[0] + 1],
                                                               "slack": v}),
        "mixed_monotonicity": _check(rect, tol, lambda k, v: {
            "s": g[k[0]], "s_hat": g[k[1]], "t": g[k[2]], "t_hat": g[k[3]], "slack": v}),
    }
    return PropertyReport(tol, checks, int((~finite).sum()), table)
