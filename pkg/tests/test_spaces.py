import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modent import (DimensionMismatch, InvalidSummand, SymplecticHilbertSpace, direct_sum,
                    eval_forms, join_vector, split_vector, validate_space)

from helpers import random_space


def test_valid_space_report():
    sp = SymplecticHilbertSpace(2 * np.eye(2), [[0, 1], [-1, 0]])
    rep = validate_space(sp)
    assert rep.is_valid
    assert rep.operator_norm_D == pytest.approx(0.5)
    assert rep.kernel_dim == 0 and not rep.needs_padding


def test_sigma_exceeding_tau_is_invalid():
    sp = SymplecticHilbertSpace(np.eye(2), [[0, 2], [-2, 0]])
    rep = validate_space(sp)
    assert not rep.is_valid
    assert any("exceeds 1" in m for m in rep.messages)


def test_asymmetric_tau_and_symmetric_sigma_flagged():
    rep = validate_space(SymplecticHilbertSpace([[1, 0.5], [0, 1]], [[0, 0], [0, 0]]))
    assert not rep.is_valid
    rep = validate_space(SymplecticHilbertSpace(np.eye(2), [[0, 0.5], [0.5, 0]]))
    assert not rep.is_valid


def test_indefinite_tau_invalid():
    rep = validate_space(SymplecticHilbertSpace([[1, 0], [0, -1]], np.zeros((2, 2))))
    assert not rep.is_valid


def test_odd_kernel_needs_padding():
    sp = SymplecticHilbertSpace(np.eye(3), [[0, 0.5, 0], [-0.5, 0, 0], [0, 0, 0]])
    rep = validate_space(sp)
    assert rep.kernel_dim == 1 and rep.needs_padding
    padded = sp.pad()
    assert padded.dim == 4 and padded.padded == 1
    assert validate_space(padded).kernel_dim == 2


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        SymplecticHilbertSpace(np.eye(2), np.zeros((3, 3)))
    with pytest.raises(DimensionMismatch):
        SymplecticHilbertSpace(np.ones(3), np.ones(3))
    with pytest.raises(DimensionMismatch):
        SymplecticHilbertSpace.from_dict({"dim": 3, "tau": np.eye(2).tolist(),
                                          "sigma": np.zeros((2, 2)).tolist()})


def test_roundtrip_dict():
    rng = np.random.default_rng(1)
    sp = random_space(rng, 4)
    sp2 = SymplecticHilbertSpace.from_dict(sp.to_dict())
    assert np.array_equal(sp.tau, sp2.tau) and np.array_equal(sp.sigma, sp2.sigma)


def test_direct_sum_blocks_and_maps():
    rng = np.random.default_rng(2)
    a, b = random_space(rng, 2), random_space(rng, 3, kernel=1)
    s, maps = direct_sum([a, b])
    assert s.dim == 5
    f = rng.standard_normal(5)
    fa, fb = split_vector(f, maps)
    assert np.array_equal(join_vector([fa, fb], maps), f)
    tau_ab, sig_ab = eval_forms(s, f, f[::-1].copy())
    g = f[::-1].copy()
    ga, gb = split_vector(g, maps)
    assert tau_ab == pytest.approx(eval_forms(a, fa, ga)[0] + eval_forms(b, fb, gb)[0])
    assert sig_ab == pytest.approx(eval_forms(a, fa, ga)[1] + eval_forms(b, fb, gb)[1])


def test_direct_sum_rejects_invalid():
    bad = SymplecticHilbertSpace(np.eye(2), [[0, 3], [-3, 0]])
    with pytest.raises(InvalidSummand):
        direct_sum([bad])
    with pytest.raises(InvalidSummand):
        direct_sum([])


def test_eval_forms_checks_length():
    sp = SymplecticHilbertSpace(np.eye(2), np.zeros((2, 2)))
    with pytest.raises(DimensionMismatch):
        eval_forms(sp, [1, 2, 3], [1, 2])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_random_spaces_validate_and_bound_holds(n, seed):
    rng = np.random.default_rng(seed)
    sp = random_space(rng, n)
    assert validate_space(sp).is_valid
    f, g = rng.standard_normal(n), rng.standard_normal(n)
    t_fg, s_fg = eval_forms(sp, f, g)
    assert s_fg**2 <= eval_forms(sp, f, f)[0] * eval_forms(sp, g, g)[0] * (1 + 1e-10)
