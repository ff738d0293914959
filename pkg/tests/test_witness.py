"""Witness generator and epsilon-family tests."""

from fractions import Fraction

import pytest

from secant3.decompose import Jet3
from secant3.errors import InvalidRange
from secant3.tensorspace import (Format, JetScheme, jet_vectors,
                                 tensor_combination, verify_decomposition)
from secant3.witness import (border_family, make_witness, residual_slope)


def test_witness_basic_k4():
    wb = make_witness(4, 3, seed=1)
    assert wb.rank == 3
    assert wb.decomposition.size == 3
    assert wb.format == Format((1,) * 4, (1,) * 4)
    assert wb.certificate.flattening_max_rank == 3
    verify_decomposition(wb.tensor, wb.decomposition, tol=1e-8)


def test_witness_k5_x4():
    wb = make_witness(5, 4, seed=7)
    assert wb.decomposition.size == 4
    assert wb.padded_factors == ()


def test_witness_padding():
    wb = make_witness(6, 3, seed=2)
    assert len(wb.padded_factors) == 2
    assert wb.decomposition.size == 3
    verify_decomposition(wb.tensor, wb.decomposition, tol=1e-8)


def test_witness_range_validation():
    with pytest.raises(InvalidRange):
        make_witness(3, 3, seed=0)  # empty range for three factors
    with pytest.raises(InvalidRange):
        make_witness(5, 5, seed=0)
    with pytest.raises(InvalidRange):
        make_witness(5, 2, seed=0)


def test_witness_flattening_profile():
    wb = make_witness(5, 3, seed=3)
    from secant3.tensorspace import flattening_report
    rep = flattening_report(wb.tensor)
    assert all(r <= 3 for r in rep.ranks.values())
    assert max(rep.ranks.values()) == 3


def test_witness_lower_bound_note():
    assert "not machine-certified" in make_witness(5, 4, seed=4).certificate.lower_bound_note
    assert "flattening" in make_witness(5, 3, seed=4).certificate.lower_bound_note


def _diagonal_jet3(k):
    fmt = Format((1,) * k, (1,) * k)
    return JetScheme(fmt, 3, (((1, 0, 0), (0, 1, 0)),) * k)


def test_family_residual_decays_linearly():
    jet = _diagonal_jet3(4)
    p = tensor_combination(jet_vectors(jet), [Fraction(1), Fraction(2), Fraction(1)])
    pres = Jet3(jet)
    prev = None
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        dec, resid = border_family(pres, p, eps, seed=0)
        assert dec.size == 3
        if prev is not None:
            assert resid < prev
        prev = resid
    slope = residual_slope(pres, p)
    assert slope >= 0.9


def test_family_exact_zero_for_points_of_the_variety():
    jet = _diagonal_jet3(3)
    p = tensor_combination(jet_vectors(jet), [Fraction(1), Fraction(0), Fraction(0)])
    dec, resid = border_family(Jet3(jet), p, 1e-3, seed=0)
    assert resid == 0.0
    assert dec.size == 3  # companions carry zero weight


def test_family_subjet_point_residual_decays():
    jet = _diagonal_jet3(4)
    p = tensor_combination(jet_vectors(jet), [Fraction(1), Fraction(1), Fraction(0)])
    _, r1 = border_family(Jet3(jet), p, 1e-2, seed=0)
    _, r2 = border_family(Jet3(jet), p, 1e-3, seed=0)
    assert r2 < r1


def test_family_rejects_zero_eps():
    jet = _diagonal_jet3(3)
    p = tensor_combination(jet_vectors(jet), [Fraction(1), Fraction(1), Fraction(1)])
    from secant3.errors import InvalidInput
    with pytest.raises(InvalidInput):
        border_family(Jet3(jet), p, 0)


def test_family_monotone_band():
    # residual decreasing along a geometric ladder within a factor 4
    wb = make_witness(5, 4, seed=11)
    pres, p = wb.presentation, wb.tensor
    resids = [border_family(pres, p, eps, seed=0)[1]
              for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    for a, b in zip(resids, resids[1:]):
        assert b <= 4 * a


def test_witness_deterministic_in_seed():
    w1 = make_witness(5, 4, seed=9)
    w2 = make_witness(5, 4, seed=9)
    assert w1.tensor.coeffs == w2.tensor.coeffs
    assert [c for c, _ in w1.decomposition.terms] == \
           [c for c, _ in w2.decomposition.terms]
