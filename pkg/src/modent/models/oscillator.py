"""Finite families of harmonic oscillators on C^n.

K = C^n as a real space with coordinates (Re f; Im f), sigma(f, g) = Im (f, g)
and tau(f, g) = Re (f, M g) for a Hermitian M >= 1.  For diagonal M and
L = E K with E a coordinate projector the entropy is 2 sum_{j in E} arcoth(m_j) |f_j|^2.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError, DimensionMismatch
from ..spaces import SymplecticHilbertSpace

ONE_TOL = 1e-12


def oscillator_space(M, rtol: float = 1e-10) -> SymplecticHilbertSpace:
    """Space of n oscillators; ``M`` is a Hermitian matrix or a list of diagonal entries."""
    M = np.asarray(M)
    if M.ndim == 1:
        M = np.diag(M)
    M = M.astype(complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch("M must be square")
    if not np.allclose(M, M.conj().T, atol=1e-12):
        raise ConfigError("M must be Hermitian")
    if np.linalg.eigvalsh(M).min() < 1 - ONE_TOL:
        raise ConfigError("M must satisfy M >= 1")
    n = M.shape[0]
    Mr, Mi = M.real, M.imag
    tau = np.block([[Mr, -Mi], [Mi, Mr]])
    eye, zero = np.eye(n), np.zeros((n, n))
    sigma = np.block([[zero, eye], [-eye, zero]])
    return SymplecticHilbertSpace(tau, sigma, rtol=rtol)


def to_real(f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    return np.concatenate([f.real, f.imag])


def to_complex(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    return v[:n] + 1j * v[n:]


def mode_generators(n: int, modes) -> list[np.ndarray]:
    """Real generators e_j and i e_j of span_C{e_j : j in modes}."""
    gens = []
    for j in modes:
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        gens += [to_real(e), to_real(1j * e)]
    return gens


def arcoth(m: float) -> float:
    if m < 1 - ONE_TOL:
        raise ConfigError(f"arcoth needs m >= 1, got {m}")
    if m - 1 <= ONE_TOL:
        return math.inf
    return 0.5 * math.log((m + 1) / (m - 1))


def oscillator_entropy(M_diag, E_set, f) -> float:
    """2 sum_{j in E} arcoth(m_j) |f_j|^2; ``math.inf`` on a populated mode with m_j = 1."""
    M_diag = np.asarray(M_diag, dtype=float)
    f = np.asarray(f)
    if np.isrealobj(f) and f.shape[0] == 2 * M_diag.shape[0]:
        f = to_complex(f)
    total = 0.0
    for j in E_set:
        w = abs(f[j]) ** 2
        if w == 0:
            continue
        a = arcoth(M_diag[j])
        if math.isinf(a):
            return math.inf
        total += 2 * a * w
    return total


def oscillator_tf(M_diag, f, s: float, t: float) -> float:
    """2 (f, E_s E_t arcoth(M) f) with E_t the spectral projector of M on (-inf, t)."""
    M_diag = np.asarray(M_diag, dtype=float)
    return oscillator_entropy(M_diag, np.flatnonzero(M_diag < min(s, t)), f)


def spectral_family(M_diag, domain=None):
    """L_t = E(-inf, t) K for diagonal M, as a generic matrix-backed family."""
    from ..families import build_family

    M_diag = np.asarray(M_diag, dtype=float)
    n = M_diag.size
    space = oscillator_space(M_diag)
    if domain is None:
        domain = (float(M_diag.min()) - 1.0, float(M_diag.max()) + 1.0)
    return build_family(space, lambda t: mode_generators(n, np.flatnonzero(M_diag < t)), domain,
                        name="oscillator_spectral")


def skew_pair_data():
    """Two oscillators with M = diag(2, 3); L0 = span_R{(1,1), (i,0)} inside L1 = C^2."""
    M = np.array([2.0, 3.0])
    L0 = [to_real([1, 1]), to_real([1j, 0])]
    L1 = mode_generators(2, [0, 1])
    return oscillator_space(M), L0, L1


def skew_pair_family():
    """Two-step family L_t = L0 for t < 1 and C^2 for t >= 1."""
    from ..families import build_family

    space, L0, L1 = skew_pair_data()
    return build_family(space, lambda t: L0 if t < 1 else L1, (0.0, 1.0), name="skew_pair")
