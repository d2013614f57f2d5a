import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modent import (InfiniteComponent, SpectralSingularity, SymplecticHilbertSpace,
                    abelian_entropy_part, c_function, decompose, entropy_form,
                    factorial_entropy, modular_data, modular_flow, pf_via_modular, purify,
                    relative_entropy)
from modent.models import arcoth, mode_generators, oscillator_space, to_real

from helpers import random_generators, random_space


def test_c_function_branches_agree():
    lam = np.array([-1e-4 * 1.0001, -0.99e-4, 0.0, 0.99e-4, 1.0001e-4])
    direct = np.sqrt(lam / -np.expm1(-np.where(lam == 0, 1, lam)))
    direct[2] = 1.0
    assert np.allclose(c_function(lam), direct, rtol=1e-10)
    assert c_function(np.log(3.0)) ** 2 == pytest.approx(np.log(3.0) / (1 - 1 / 3))


def _m2():
    pure = purify(oscillator_space([2.0]))
    dec = decompose(pure, mode_generators(1, [0]))
    return pure, dec, modular_data(dec)


def test_single_oscillator_modular_data():
    pure, dec, md = _m2()
    assert np.allclose(md.log_delta_spectrum, [-np.log(3)] * 2 + [np.log(3)] * 2)
    flip = np.diag([1, 1, -1, -1.0])
    r = 2 / np.sqrt(3)
    expected = np.kron(np.array([[1, -r], [-r, 7 / 3]]), np.eye(2))
    assert np.allclose(flip @ md.Delta @ flip, expected, atol=1e-10)
    form = entropy_form(md)
    assert form.value(to_real([1.0])) == pytest.approx(np.log(3), rel=1e-12)
    assert form.value(to_real([1j])) == pytest.approx(np.log(3), rel=1e-12)
    assert factorial_entropy(md, to_real([1.0])) == pytest.approx(np.log(3), rel=1e-10)


def test_modular_objects_invariants():
    rng = np.random.default_rng(11)
    pure = purify(random_space(rng, 5))
    dec = decompose(pure, random_generators(rng, 5, 3))
    md = modular_data(dec)
    k = md.W.shape[1]
    # Tomita operator fixes Ls
    B = md.W.T @ np.hstack([dec.La.onb, dec.Lf.onb])
    assert np.allclose(md.S_W @ B, B, atol=1e-9)
    assert np.allclose(md.J_W @ md.J_W, np.eye(k), atol=1e-9)
    Dinv = np.linalg.inv(md.Delta_W)
    assert np.allclose(md.J_W @ md.Delta_W @ md.J_W, Dinv, atol=1e-8 * np.abs(Dinv).max())
    R = entropy_form(md).R_on
    assert np.linalg.eigvalsh(R).min() >= -1e-10 * max(1, np.abs(R).max())


def test_modular_flow_is_tau_orthogonal_and_has_group_law():
    rng = np.random.default_rng(12)
    pure = purify(random_space(rng, 4))
    dec = decompose(pure, random_generators(rng, 4, 2))
    md = modular_data(dec)
    v = rng.standard_normal(pure.real_dim)
    v = pure.from_on((np.eye(pure.real_dim) - dec.Linf.projector_on) @ pure.to_on(v))
    w = modular_flow(md, 0.7, v)
    nv = v @ pure.tau_plus @ v
    assert w @ pure.tau_plus @ w == pytest.approx(nv, rel=1e-9)
    assert np.allclose(modular_flow(md, 0.3, modular_flow(md, 0.4, v)), w, atol=1e-9)
    assert np.allclose(modular_flow(md, 0.0, v), v)


def test_modular_flow_rejects_linf():
    pure = purify(SymplecticHilbertSpace(np.eye(2), [[0, 1], [-1, 0]]))
    dec = decompose(pure, [[1, 0], [0, 1]])
    with pytest.raises(InfiniteComponent):
        modular_flow(modular_data(dec), 1.0, [1.0, 0.0])


def test_pf_via_modular_matches_basis_solve():
    pure, dec, md = _m2()
    assert np.allclose(pf_via_modular(md), dec.P_f_on, atol=1e-12)


def test_pf_via_modular_spectral_singularity():
    # Delta_f has eigenvalues 1/3 and 3; a guard window of width 10 around 1 must trip
    pure, dec, md = _m2()
    with pytest.raises(SpectralSingularity):
        pf_via_modular(md, tol=10.0)


def test_infinite_entropy_cases():
    pure = purify(oscillator_space([1.0, 2.0]))
    dec = decompose(pure, mode_generators(2, [0, 1]))
    form = entropy_form(modular_data(dec))
    assert form.value(to_real([1.0, 0.0])) == math.inf
    assert form.is_infinite(to_real([1.0, 0.5]))
    assert math.isfinite(form.value(to_real([0.0, 1.0])))
    assert form.value(to_real([0.0, 1.0])) == pytest.approx(2 * arcoth(2.0))


def test_relative_entropy_is_entropy_of_difference():
    rng = np.random.default_rng(13)
    pure = purify(random_space(rng, 4))
    dec = decompose(pure, random_generators(rng, 4, 2))
    form = entropy_form(modular_data(dec))
    f, g = rng.standard_normal(8), rng.standard_normal(8)
    assert relative_entropy(form, g, f) == pytest.approx(form.value(g - f))
    assert relative_entropy(form, f, f) == 0.0


def test_empty_subspace_has_zero_entropy():
    rng = np.random.default_rng(14)
    pure = purify(random_space(rng, 3))
    dec = decompose(pure, [])
    form = entropy_form(modular_data(dec))
    assert form.value(rng.standard_normal(pure.real_dim)) == 0.0


def test_abelian_part_matches_entropy_on_commutative_space():
    pure = purify(SymplecticHilbertSpace(np.diag([1.0, 2.0]), np.zeros((2, 2))))
    dec = decompose(pure, [[1, 0], [0, 1]])
    form = entropy_form(modular_data(dec))
    g = np.array([0.3, -0.2, 1.5, 0.7])
    assert form.value(g) == pytest.approx(abelian_entropy_part(dec, g), rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000), st.data())
def test_cut_projector_preserves_entropy(n, seed, data):
    rng = np.random.default_rng(seed)
    pure = purify(random_space(rng, n))
    dec = decompose(pure, random_generators(rng, n, data.draw(st.integers(1, n))))
    form = entropy_form(modular_data(dec))
    f = rng.standard_normal(pure.real_dim)
    f = pure.from_on((np.eye(pure.real_dim) - dec.Linf.projector_on) @ pure.to_on(f))
    S = form.value(f)
    assert form.value(dec.cut(f)) == pytest.approx(S, rel=1e-8, abs=1e-9)
    for v in dec.Lprime.basis.T:
        assert abs(form.value(v)) <= 1e-9 * (1 + np.abs(v).max() ** 2)
