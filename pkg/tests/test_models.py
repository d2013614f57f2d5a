import math

import numpy as np
import pytest
from scipy import integrate

from modent import ConfigError, decompose, derivative_report, entropy_form, modular_data, purify
from modent.models import (Reparametrization, SmoothProbe, abelian_entropy, abelian_line_family,
                           abelian_line_tf, abelian_space, arcoth, complex_vector,
                           convergence_study, discretize_u1, mode_generators,
                           oscillator_entropy, oscillator_space, reparametrized_tf,
                           standard_bump, subset_generators, to_complex, to_real, u1_family,
                           u1_first_derivative, u1_kms_entropy, u1_second_derivative_terms,
                           u1_tf, u1_vacuum_entropy, vacuum_interval_entropy)
from modent.models.u1 import abelian_line_second_derivative


# -- probes -------------------------------------------------------------------


@pytest.mark.parametrize("probe", [
    SmoothProbe.bump(0.2, 0.8, 1.5),
    SmoothProbe.piecewise([-1, 0, 1], [[0, 1], [1, -1]]),
    SmoothProbe.sampled(np.linspace(-1, 1, 9), np.sin(np.pi * np.linspace(-1, 1, 9)) ** 2),
])
def test_probe_derivatives_match_finite_differences(probe):
    xs = np.linspace(probe.support[0] + 0.05, probe.support[1] - 0.05, 9)
    xs = xs[np.min(np.abs(xs[:, None] - np.asarray(probe.breakpoints or [np.inf])[None, :]),
                   axis=1) > 1e-3]
    h = 1e-5
    fd1 = (probe(xs + h) - probe(xs - h)) / (2 * h)
    fd2 = (probe.deriv(xs + h) - probe.deriv(xs - h)) / (2 * h)
    assert np.allclose(fd1, probe.deriv(xs), atol=1e-6)
    assert np.allclose(fd2, probe.deriv2(xs), atol=1e-5)


def test_probe_roundtrip_and_errors():
    p = SmoothProbe.from_dict({"kind": "bump", "center": 0.5, "width": 2.0})
    assert SmoothProbe.from_dict(p.to_dict())(0.7) == p(0.7)
    ramp = SmoothProbe.ramp(0.0, 1.0, 2.0)
    assert float(ramp(2.0)) == pytest.approx(2.0) and float(ramp.deriv(0.5)) == 2.0
    with pytest.raises(ConfigError):
        SmoothProbe.from_dict({"kind": "wave"})
    with pytest.raises(ConfigError):
        SmoothProbe.bump(width=0)
    with pytest.raises(ConfigError):
        SmoothProbe.piecewise([0, 0], [[1]])
    with pytest.raises(ConfigError):
        SmoothProbe.from_dict({"kind": "bump", "bogus": 1})


def test_standard_bump_value():
    assert float(standard_bump()(0.0)) == pytest.approx(math.exp(-1))


# -- U(1) current -------------------------------------------------------------


def test_vacuum_entropy_matches_direct_quadrature():
    f = standard_bump()
    for t in (-0.5, 0.0, 0.3, 2.0):
        direct = integrate.quad(lambda x: 2 * math.pi * (t - x) * float(f.deriv(x)) ** 2,
                                -1, min(t, 1), epsabs=1e-13)[0]
        assert u1_vacuum_entropy(f, t) == pytest.approx(direct, rel=1e-10, abs=1e-14)
    assert u1_vacuum_entropy(f, -1.5) == 0.0


def test_kms_entropy_direct_and_vacuum_limit():
    f = standard_bump()
    beta, t = 3.0, 0.4
    direct = integrate.quad(lambda x: beta * float(f.deriv(x)) ** 2
                            * (1 - math.exp(2 * math.pi * (x - t) / beta)), -1, t)[0]
    assert u1_kms_entropy(f, t, beta) == pytest.approx(direct, rel=1e-9)
    gaps = [abs(u1_kms_entropy(f, t, b) - u1_vacuum_entropy(f, t)) for b in (10, 100, 1000)]
    assert gaps[0] > gaps[1] > gaps[2]
    with pytest.raises(ConfigError):
        u1_tf(f, 0.0, 0.0, beta=-1.0)


@pytest.mark.parametrize("beta", [None, 2.0])
def test_first_and_second_derivative_terms(beta):
    f = standard_bump()
    t, h = -0.3, 1e-4
    S = lambda x: u1_tf(f, x, x, beta)
    fd1 = (S(t + h) - S(t - h)) / (2 * h)
    assert u1_first_derivative(f, t, beta) == pytest.approx(fd1, rel=1e-6)
    fd2 = (S(t + 1e-3) - 2 * S(t) + S(t - 1e-3)) / 1e-6
    boundary, bulk = u1_second_derivative_terms(f, t, beta)
    assert boundary + bulk == pytest.approx(fd2, rel=1e-4)
    if beta is not None:
        assert bulk < 0


def test_reparametrized_family_chain_rule():
    f = standard_bump()
    hmap = Reparametrization("tanh", 0.3, 0.7)
    fam = u1_family(h=hmap)
    for t in (-0.4, 0.1):
        rep = derivative_report(fam, f, t, h=1e-3)
        assert rep.closed_form["sum"] == pytest.approx(rep.d2S_dt2, rel=1e-3)
    assert reparametrized_tf(f, 0.2, 0.2, hmap) == pytest.approx(
        u1_vacuum_entropy(f, float(hmap(0.2))))
    with pytest.raises(ConfigError):
        Reparametrization("tanh", -2.0, 1.0)
    with pytest.raises(ConfigError):
        Reparametrization("cubic")


def test_abelian_line_family():
    g = standard_bump()
    fam = abelian_line_family()
    t = 0.2
    rep = derivative_report(fam, g, t, h=1e-3)
    assert rep.d2S_dt2 == pytest.approx(abelian_line_second_derivative(g, t), rel=1e-4)
    assert abelian_line_tf(g, 5.0, 5.0) == pytest.approx(
        2 * integrate.quad(lambda x: float(g(x)) ** 2, -1, 1)[0], rel=1e-10)


# -- oscillators and abelian spaces -------------------------------------------


def test_arcoth_and_real_complex_conversion():
    assert arcoth(2.0) == pytest.approx(0.5 * math.log(3))
    assert arcoth(1.0) == math.inf
    with pytest.raises(ConfigError):
        arcoth(0.5)
    z = np.array([1 + 2j, -0.5j])
    assert np.allclose(to_complex(to_real(z)), z)


def test_oscillator_engine_matches_closed_form():
    rng = np.random.default_rng(21)
    M = rng.uniform(1.01, 10, 5)
    modes = [0, 2, 3]
    pure = purify(oscillator_space(M))
    form = entropy_form(modular_data(decompose(pure, mode_generators(5, modes))))
    f = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    S = oscillator_entropy(M, modes, f)
    assert form.value(to_real(f)) == pytest.approx(S, rel=1e-10)


def test_nondiagonal_oscillator_space_is_valid():
    M = np.array([[2.0, 0.5j], [-0.5j, 3.0]])
    pure = purify(oscillator_space(M))
    assert pure.real_dim == 8
    with pytest.raises(ConfigError):
        oscillator_space(np.diag([0.5, 2.0]))


def test_abelian_engine_matches_closed_form():
    w = np.array([0.5, 1.0, 2.0, 3.0])
    mask = np.array([True, False, True, True])
    pure = purify(abelian_space(w))
    form = entropy_form(modular_data(decompose(pure, subset_generators(4, mask))))
    f = np.array([1 + 1j, 2 - 0.5j, -1 + 0.25j, 0.3 + 2j])
    assert form.value(complex_vector(pure, f)) == pytest.approx(abelian_entropy(w, mask, f),
                                                                 rel=1e-10)
    # real parts carry no entropy
    assert form.value(complex_vector(pure, f.real)) == pytest.approx(0.0, abs=1e-12)


# -- discretized U(1) ----------------------------------------------------------


def test_discretized_space_is_valid_and_probe_pairs_correctly():
    model = discretize_u1(16)
    assert model.space.dim == 13
    f = standard_bump()
    v = model.probe_vector(f)
    pure = model.pure
    vals = [v @ pure.sigma_plus @ pure.lift(e) for e in np.eye(model.size)]
    assert np.allclose(vals, model.probe_functional(f), atol=1e-10)
    assert len(model.generators(0.0)) < model.size


def test_convergence_gap_decreases():
    rows = convergence_study(standard_bump(), 0.0, (16, 32, 64))
    gaps = [r.gap for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]
    entropies = [r.entropy for r in rows]
    assert entropies[0] < entropies[1] < entropies[2] < rows[0].reference
    assert rows[-1].interval_gap < rows[0].interval_gap
    assert rows[0].interval_reference == pytest.approx(
        vacuum_interval_entropy(standard_bump(), -2.0, 0.0))
