"""Compactly supported test functions on the line, with derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline

from ..errors import ConfigError


@dataclass(frozen=True, eq=False)
class SmoothProbe:
    """f with compact support ``support`` and evaluators for f, f' and f''.

    Kinds:
      * ``bump``      A exp(-1/(1-u^2)), u = (x - center)/width, on |u| < 1;
      * ``piecewise`` f' given by polynomial pieces between ``breaks``
                      (ascending coefficients in x - breaks[k]); f(-inf) = 0;
      * ``sampled``   clamped cubic spline through user samples.
    """

    kind: str
    params: dict
    support: tuple
    _f: object = field(repr=False)
    _df: object = field(repr=False)
    _d2f: object = field(repr=False)
    breakpoints: tuple = ()

    def __call__(self, x):
        return self._f(np.asarray(x, dtype=float))

    def deriv(self, x):
        return self._df(np.asarray(x, dtype=float))

    def deriv2(self, x):
        return self._d2f(np.asarray(x, dtype=float))

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    # -- constructors ------------------------------------------------------

    @classmethod
    def bump(cls, center: float = 0.0, width: float = 1.0, amplitude: float = 1.0) -> "SmoothProbe":
        c, w, A = float(center), float(width), float(amplitude)
        if w <= 0:
            raise ConfigError("bump width must be positive")

        def parts(x):
            u = (x - c) / w
            inside = np.abs(u) < 1
            uu = np.where(inside, u, 0.0)
            q = 1.0 - uu**2
            e = np.where(inside, np.exp(-1.0 / q), 0.0)
            return u, inside, uu, q, e

        def f(x):
            return A * parts(x)[4]

        def df(x):
            _, inside, u, q, e = parts(x)
            return np.where(inside, A * e * (-2 * u / q**2) / w, 0.0)

        def d2f(x):
            _, inside, u, q, e = parts(x)
            g = -2 * u / q**2
            dg = (-2 * q**2 - (-2 * u) * 2 * q * (-2 * u)) / q**4
            return np.where(inside, A * e * (g**2 + dg) / w**2, 0.0)

        return cls("bump", {"center": c, "width": w, "amplitude": A}, (c - w, c + w), f, df, d2f)

    @classmethod
    def piecewise(cls, breaks, coeffs) -> "SmoothProbe":
        breaks = np.asarray(breaks, dtype=float)
        if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
            raise ConfigError("breaks must be a strictly increasing list of length >= 2")
        if len(coeffs) != breaks.size - 1:
            raise ConfigError("need one coefficient list per piece")
        dpieces = [Polynomial(c) for c in coeffs]
        ipieces = [p.integ() for p in dpieces]
        offsets = [0.0]
        for k, p in enumerate(ipieces[:-1]):
            offsets.append(offsets[-1] + p(breaks[k + 1] - breaks[k]))
        total = offsets[-1] + ipieces[-1](breaks[-1] - breaks[-2])

        def evaluate(x, which):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for k in range(len(dpieces)):
                sel = (x >= breaks[k]) & (x < breaks[k + 1])
                z = x[sel] - breaks[k]
                if which == 0:
                    out[sel] = offsets[k] + ipieces[k](z)
                elif which == 1:
                    out[sel] = dpieces[k](z)
                else:
                    out[sel] = dpieces[k].deriv()(z)
            if which == 0:
                out[x >= breaks[-1]] = total
            return out

        return cls("piecewise", {"breaks": breaks.tolist(), "coeffs": [list(map(float, c)) for c in coeffs]},
                   (float(breaks[0]), float(breaks[-1])),
                   lambda x: evaluate(x, 0), lambda x: evaluate(x, 1), lambda x: evaluate(x, 2),
                   breakpoints=tuple(breaks.tolist()))

    @classmethod
    def ramp(cls, a: float = 0.0, b: float = 1.0, slope: float = 1.0) -> "SmoothProbe":
        """f' = slope on (a, b) and 0 elsewhere."""
        return cls.piecewise([a, b], [[slope]])

    @classmethod
    def sampled(cls, x, y) -> "SmoothProbe":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.size < 4 or x.shape != y.shape or np.any(np.diff(x) <= 0):
            raise ConfigError("sampled probe needs >= 4 strictly increasing abscissae")
        cs = CubicSpline(x, y, bc_type="clamped")
        d1, d2 = cs.derivative(1), cs.derivative(2)
        lo, hi = x[0], x[-1]

        def clip(fn):
            def g(z):
                z = np.asarray(z, dtype=float)
                return np.where((z >= lo) & (z <= hi), fn(np.clip(z, lo, hi)), 0.0)
            return g

        return cls("sampled", {"x": x.tolist(), "y": y.tolist()}, (float(lo), float(hi)),
                   clip(cs), clip(d1), clip(d2), breakpoints=tuple(x.tolist()))

    @classmethod
    def from_dict(cls, doc: dict) -> "SmoothProbe":
        doc = dict(doc)
        kind = doc.pop("kind", "bump")
        try:
            if kind == "bump":
                return cls.bump(**doc)
            if kind == "ramp":
                return cls.ramp(**doc)
            if kind == "piecewise":
                return cls.piecewise(doc["breaks"], doc["coeffs"])
            if kind == "sampled":
                return cls.sampled(doc["x"], doc["y"])
        except (TypeError, KeyError) as exc:
            raise ConfigError(f"bad parameters for probe kind {kind!r}: {exc}") from exc
        raise ConfigError(f"unknown probe kind {kind!r}")


def standard_bump() -> SmoothProbe:
    """exp(-1/(1-x^2)) on (-1, 1)."""
    return SmoothProbe.bump(0.0, 1.0, 1.0)
