import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modent import (NotInBaseSpace, SpaceMismatch, SymplecticHilbertSpace, add, complement,
                    decompose, intersect, project_components, purify, span,
                    symplectic_complement)
from modent.models import mode_generators, oscillator_space

from helpers import random_generators, random_space


def _sigma_plus(pure, a, b):
    return a @ pure.sigma_plus @ b


def test_span_intersect_complement_basics():
    pure = purify(SymplecticHilbertSpace(np.eye(3), np.zeros((3, 3))))
    A = span(pure, [[1, 0, 0], [0, 1, 0]])
    B = span(pure, [[0, 1, 0], [0, 0, 1]])
    assert A.dim == 2 and B.dim == 2
    C = intersect(A, B)
    assert C.dim == 1 and C.contains([0, 1, 0])
    assert add(A, B).dim == 3
    comp = complement(A)
    assert comp.dim == pure.real_dim - 2
    assert np.allclose(A.onb.T @ comp.onb, 0)
    # near-duplicate generators collapse under the rank tolerance
    assert span(pure, [[1, 0, 0], [1, 1e-14, 0]]).dim == 1


def test_intersection_of_nearly_aligned_planes_is_accurate():
    pure = purify(SymplecticHilbertSpace(np.eye(3), np.zeros((3, 3))))
    eps = 1e-6
    A = span(pure, [[1, 0, 0], [0, 1, 0]])
    B = span(pure, [[1, 0, 0], [0, 1, eps]])
    assert intersect(A, B, tol=1e-9).dim == 1
    assert intersect(A, B, tol=1e-5).dim == 2


def test_space_mismatch():
    p1 = purify(SymplecticHilbertSpace(np.eye(2), np.zeros((2, 2))))
    p2 = purify(SymplecticHilbertSpace(np.eye(2), np.zeros((2, 2))))
    with pytest.raises(SpaceMismatch):
        intersect(span(p1, [[1, 0]]), span(p2, [[1, 0]]))


def test_not_in_base_space():
    pure = purify(SymplecticHilbertSpace(np.eye(2), [[0, 0.5], [-0.5, 0]]))
    with pytest.raises(NotInBaseSpace):
        decompose(pure, [np.array([1.0, 0, 0, 1.0])])
    L = span(pure, [np.array([0, 0, 1.0, 0])])
    with pytest.raises(NotInBaseSpace):
        symplectic_complement(pure, L)


def test_symplectic_complement_in_base_space():
    rng = np.random.default_rng(3)
    sp = random_space(rng, 6)
    pure = purify(sp)
    L = span(pure, random_generators(rng, 6, 2))
    Lp = symplectic_complement(pure, L)
    assert Lp.dim == 4
    for a in L.basis.T:
        for b in Lp.basis.T:
            assert abs(_sigma_plus(pure, a, b)) < 1e-10


def _check_decomposition(pure, dec, atol=1e-8):
    n2 = pure.real_dim
    d = dec.dims
    assert d["L0plus"] + d["Laplus"] + d["Lfplus"] + d["Linf"] == n2
    parts = [dec.L0plus, dec.Laplus, dec.Lfplus, dec.Linf]
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            assert np.allclose(a.onb.T @ b.onb, 0, atol=atol)
    # complex parts are i+-invariant
    for X in (dec.Laplus, dec.Lfplus, dec.Linf, dec.L0plus):
        assert X.is_complex(tol=1e-8)
    assert d["Lfplus"] == 2 * d["Lf"] and d["Laplus"] == 2 * d["La"]
    # La is sigma-orthogonal to L, and both La and Lf lie in L
    for a in dec.La.basis.T:
        assert dec.L.contains(a)
        for b in dec.L.basis.T:
            assert abs(_sigma_plus(pure, a, b)) < atol
    for a in dec.Lf.basis.T:
        assert dec.L.contains(a)
    # cut projector: idempotent, kills the sigma+-complement of L, fixes L_inf
    Q = dec.Q_on
    assert np.allclose(Q @ Q, Q, atol=atol)
    assert np.allclose(Q @ dec.Lprime.onb, 0, atol=atol)
    assert np.allclose(Q @ dec.Linf.onb, dec.Linf.onb, atol=atol)
    assert np.allclose(dec.P_f_on @ dec.Lf.onb, dec.Lf.onb, atol=atol)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000), st.data())
def test_random_decompositions(n, seed, data):
    rng = np.random.default_rng(seed)
    sp = random_space(rng, n, kernel=data.draw(st.sampled_from([0, 2])) if n >= 4 else 0)
    pure = purify(sp)
    k = data.draw(st.integers(0, n))
    dec = decompose(pure, random_generators(rng, n, k))
    assert dec.L.dim == k
    _check_decomposition(pure, dec)
    g = rng.standard_normal(pure.real_dim)
    comps = project_components(dec, g)
    assert np.allclose(sum(comps), g, atol=1e-8 * (1 + np.abs(g).max()))


def test_oscillator_whole_space_is_factorial():
    pure = purify(oscillator_space([2.0, 3.0]))
    dec = decompose(pure, mode_generators(2, [0, 1]))
    assert dec.dims == {"L": 4, "L0plus": 0, "Laplus": 0, "Lfplus": 8, "Linf": 0,
                        "La": 0, "Lf": 4}


def test_commuting_subspace_is_abelian():
    pure = purify(SymplecticHilbertSpace(np.diag([1.0, 2.0, 3.0]), np.zeros((3, 3))))
    dec = decompose(pure, [[1, 0, 0], [0, 0, 1]])
    assert dec.La.dim == 2 and dec.Lf.dim == 0 and dec.Linf.dim == 0


def test_pure_whole_space_is_nonseparating():
    pure = purify(SymplecticHilbertSpace(np.eye(2), [[0, 1], [-1, 0]]))
    dec = decompose(pure, [[1, 0], [0, 1]])
    assert dec.Linf.dim == 2 and dec.Lf.dim == 0


def test_skew_pair_dimensions():
    pure = purify(oscillator_space([2.0, 3.0]))
    dec = decompose(pure, [np.array([1, 1, 0, 0.0]), np.array([0, 0, 1, 0.0])])
    assert dec.dims["L0plus"] == 4 and dec.dims["Lf"] == 2
    d = dec.to_dict()
    assert set(d["bases"]) == {"L0plus", "Laplus", "Lfplus", "Linf", "La", "Lf"}
