"""Chiral U(1) current: vacuum and thermal entropies of half-lines, in closed form.

For L_t = functions supported in (-inf, t):

    vacuum:  T_f(s, t) = 2 pi int_{-inf}^{min(s,t)} (t - x) f'(x)^2 dx
    thermal: T_f(s, t) =      int_{-inf}^{min(s,t)} f'(x)^2 beta (1 - exp(2 pi (x - t)/beta)) dx

and S_t(f) = T_f(t, t).  Both are evaluated through t-independent moments of
f'^2 so that the dependence on t is exact (no quadrature noise between
neighbouring t values at fixed s).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..errors import ConfigError, QuadratureFailure
from .probes import SmoothProbe

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QuadratureParams:
    epsabs: float = 1e-14
    epsrel: float = 1e-12
    limit: int = 200

    def __post_init__(self):
        if self.epsabs <= 0 or self.epsrel <= 0 or self.limit < 1:
            raise ConfigError("quadrature tolerances must be positive")


DEFAULT_QUAD = QuadratureParams()


def integrate_on(fn, a: float, b: float, q: QuadratureParams = DEFAULT_QUAD,
                 points=(), scale: float = 1.0) -> float:
    """Adaptive quadrature of fn over [a, b]; raise QuadratureFailure if it does not converge.

    ``scale`` sets the magnitude against which the absolute tolerance is judged.
    """
    if b <= a:
        return 0.0
    pts = [p for p in points if a < p < b] or None
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, epsabs=q.epsabs, epsrel=q.epsrel,
                                      limit=q.limit, points=pts)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"quadrature on [{a}, {b}] failed: {exc}") from exc
    bound = max(1e3 * q.epsabs * max(1.0, scale), 1e3 * q.epsrel * abs(val))
    if not math.isfinite(val) or err > bound:
        raise QuadratureFailure(f"quadrature on [{a}, {b}]: error estimate {err:.3g} > {bound:.3g}")
    return float(val)


def _fp2(f: SmoothProbe):
    return lambda x: float(f.deriv(x)) ** 2


def _moment(f: SmoothProbe, upper: float, weight, q: QuadratureParams) -> float:
    a, b = f.support
    return integrate_on(lambda x: float(f.deriv(x)) ** 2 * weight(x), a, min(upper, b), q,
                        f.breakpoints)


def _vacuum_tf(f: SmoothProbe, s: float, t: float, q: QuadratureParams) -> float:
    m = min(s, t)
    if m <= f.support[0]:
        return 0.0
    i0 = _moment(f, m, lambda x: 1.0, q)
    i1 = _moment(f, m, lambda x: x, q)
    return TWO_PI * (t * i0 - i1)


def _kms_tf(f: SmoothProbe, s: float, t: float, beta: float, q: QuadratureParams) -> float:
    if not beta > 0:
        raise ConfigError("beta must be positive")
    m = min(s, t)
    if m <= f.support[0]:
        return 0.0
    m_eff = min(m, f.support[1])
    i0 = _moment(f, m, lambda x: 1.0, q)
    e = _moment(f, m, lambda x: math.exp(TWO_PI * (x - m_eff) / beta), q)
    return beta * (i0 - math.exp(TWO_PI * (m_eff - t) / beta) * e)


def u1_tf(f: SmoothProbe, s: float, t: float, beta: float | None = None,
          q: QuadratureParams = DEFAULT_QUAD) -> float:
    """T_f(s, t); ``beta=None`` selects the vacuum."""
    if beta is None or math.isinf(beta):
        return _vacuum_tf(f, s, t, q)
    return _kms_tf(f, s, t, beta, q)


def u1_vacuum_entropy(f: SmoothProbe, t: float, q: QuadratureParams = DEFAULT_QUAD) -> float:
    return _vacuum_tf(f, t, t, q)


def u1_kms_entropy(f: SmoothProbe, t: float, beta: float, q: QuadratureParams = DEFAULT_QUAD) -> float:
    return _kms_tf(f, t, t, beta, q)


def u1_first_derivative(f: SmoothProbe, t: float, beta: float | None = None,
                        q: QuadratureParams = DEFAULT_QUAD) -> float:
    """dS_t/dt: 2 pi int^t f'^2 (vacuum), 2 pi int^t f'^2 exp(2 pi (x-t)/beta) (thermal)."""
    if beta is None or math.isinf(beta):
        return TWO_PI * _moment(f, t, lambda x: 1.0, q)
    return TWO_PI * _moment(f, t, lambda x: math.exp(TWO_PI * (x - t) / beta), q)


@dataclass(frozen=True)
class Reparametrization:
    """Strictly increasing h with h', h''.  Kinds: identity, affine, tanh."""

    kind: str = "identity"
    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("identity", "affine", "tanh"):
            raise ConfigError(f"unknown reparametrization {self.kind!r}")
        if self.kind == "affine" and self.a <= 0:
            raise ConfigError("affine reparametrization needs a > 0")
        if self.kind == "tanh" and not (self.b > 0 and self.a > -self.b):
            raise ConfigError("tanh reparametrization h(t) = t + a tanh(t/b) needs b > 0, a > -b")

    def __call__(self, t):
        if self.kind == "identity":
            return t
        if self.kind == "affine":
            return self.a * t + self.b
        return t + self.a * np.tanh(t / self.b)

    def d1(self, t):
        if self.kind == "identity":
            return 1.0
        if self.kind == "affine":
            return self.a
        return 1.0 + self.a / self.b / np.cosh(t / self.b) ** 2

    def d2(self, t):
        if self.kind in ("identity", "affine"):
            return 0.0
        th = np.tanh(t / self.b)
        return -2.0 * self.a / self.b**2 * th / np.cosh(t / self.b) ** 2


def reparametrized_tf(f: SmoothProbe, s: float, t: float, h: Reparametrization,
                      q: QuadratureParams = DEFAULT_QUAD) -> float:
    """Vacuum surface of the family L_{h(t)}."""
    return _vacuum_tf(f, float(h(s)), float(h(t)), q)


def u1_second_derivative_terms(f: SmoothProbe, t: float, beta: float | None = None,
                               h: Reparametrization | None = None,
                               q: QuadratureParams = DEFAULT_QUAD) -> tuple[float, float]:
    """(boundary, bulk) with boundary = d2T/dsdt and bulk = d2T/dt2 at s = t - 0.

    vacuum:   (2 pi f'(t)^2, 0)
    thermal:  (2 pi f'(t)^2, -(2 pi)^2/beta int^t f'^2 exp(2 pi (x - t)/beta))
    L_{h(t)}: (2 pi h'(t)^2 f'(h(t))^2, 2 pi h''(t) int^{h(t)} f'^2)
    """
    if h is not None and h.kind != "identity":
        if beta is not None:
            raise ConfigError("reparametrized thermal family is not provided")
        x = float(h(t))
        boundary = TWO_PI * float(h.d1(t)) ** 2 * float(f.deriv(x)) ** 2
        bulk = TWO_PI * float(h.d2(t)) * _moment(f, x, lambda y: 1.0, q)
        return boundary, bulk
    boundary = TWO_PI * float(f.deriv(t)) ** 2
    if beta is None or math.isinf(beta):
        return boundary, 0.0
    bulk = -(TWO_PI**2) / beta * _moment(f, t, lambda x: math.exp(TWO_PI * (x - t) / beta), q)
    return boundary, bulk


# -- abelian line ------------------------------------------------------------


def abelian_line_tf(g: SmoothProbe, s: float, t: float, q: QuadratureParams = DEFAULT_QUAD) -> float:
    """2 int^{min(s,t)} (Im f)^2 with ``g`` the imaginary part of f."""
    a, b = g.support
    m = min(s, t, b)
    return 2.0 * integrate_on(lambda x: float(g(x)) ** 2, a, m, q, g.breakpoints)


def abelian_line_second_derivative(g: SmoothProbe, t: float) -> float:
    """d2S/dt2 = 2 d/dt (Im f(t))^2 = 4 g g'."""
    return 4.0 * float(g(t)) * float(g.deriv(t))


# -- families ----------------------------------------------------------------


def u1_family(domain=(-2.0, 2.0), beta: float | None = None,
              h: Reparametrization | None = None, q: QuadratureParams = DEFAULT_QUAD):
    from ..families import ModelFamily

    if h is not None and h.kind != "identity":
        return ModelFamily(lambda f, s, t: reparametrized_tf(f, s, t, h, q), domain,
                           name=f"u1_reparam_{h.kind}",
                           second_derivative_terms=lambda f, t: u1_second_derivative_terms(
                               f, t, None, h, q))
    name = "u1_vacuum" if beta is None else f"u1_kms_beta{beta:g}"
    return ModelFamily(lambda f, s, t: u1_tf(f, s, t, beta, q), domain, name=name,
                       second_derivative_terms=lambda f, t: u1_second_derivative_terms(
                           f, t, beta, None, q))


def abelian_line_family(domain=(-2.0, 2.0), q: QuadratureParams = DEFAULT_QUAD):
    from ..families import ModelFamily

    return ModelFamily(lambda g, s, t: abelian_line_tf(g, s, t, q), domain, name="abelian_line")
