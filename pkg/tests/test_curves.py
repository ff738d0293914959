"""Curve constructions through jets: extension, conics, linearization,
hyperplane sections."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secant3 import linalg, polynomials as poly
from secant3.curves import (CurveMap, PiecewiseCurve, conic_through_3jet,
                            curve_through_jet3, detect_power_substitution,
                            extend_jet_to_map, hyperplane_section_decompose,
                            jets_projectively_equal, linearize,
                            mobius_from_3jet)
from secant3.errors import (AutarkyViolation, DegenerateJet, InvalidInput,
                            NotAnEmbedding, NotInSpan)
from secant3.tensorspace import (Format, JetScheme, embed, jet_vectors,
                                 tensor_combination, verify_decomposition)


# ---------------------------------------------------------------------------
# extension of truncations (arbitrary order)


def test_extend_linear_jet():
    e, forms = extend_jet_to_map([[1], [0, 1]], 3)
    assert e == 1
    assert forms == ((1, 0), (0, 1))


def test_extend_constant_jet():
    e, forms = extend_jet_to_map([[1], [], []], 4)
    assert e == 0
    assert forms == ((1,), (0,), (0,))


def test_extend_ramified_jet():
    e, forms = extend_jet_to_map([[1], [0, 0, 1]], 3)
    assert e == 2
    assert forms == ((1, 0, 0), (0, 0, 1))


def test_extend_rejects_all_zero():
    with pytest.raises(InvalidInput):
        extend_jet_to_map([[], []], 3)


def test_extend_restriction_identity_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        c = int(rng.integers(2, 7))
        n = int(rng.integers(1, 4))
        polys = [[int(v) for v in rng.integers(-4, 5, size=c)]
                 for _ in range(n + 1)]
        if not any(p[0] for p in polys):
            polys[0][0] = 1
        e, forms = extend_jet_to_map(polys, c)
        assert 0 <= e <= c
        # restriction to the fat point equals the jet exactly (projectively)
        assert jets_projectively_equal([list(f) for f in forms], polys, c)
        # output family is basepoint-free
        assert poly.forms_common_factor_degree([list(f) for f in forms]) == 0


# ---------------------------------------------------------------------------
# order-3 builders


def test_mobius_identity():
    den, num = mobius_from_3jet(0, 1, 0)
    assert (tuple(den), tuple(num)) == ((1, 0), (0, 1))


def test_mobius_geometric_series():
    den, num = mobius_from_3jet(0, 1, 1)  # t + t^2 + ... = t/(1-t)
    assert (tuple(den), tuple(num)) == ((1, -1), (0, 1))


def test_mobius_translation():
    den, num = mobius_from_3jet(1, 1, 0)
    assert (tuple(den), tuple(num)) == ((1, 0), (1, 1))


def test_mobius_requires_immersion():
    with pytest.raises(NotAnEmbedding):
        mobius_from_3jet(1, 0, 2)


def test_mobius_matches_jet_property():
    rng = np.random.default_rng(19)
    for _ in range(50):
        j0, j2 = (int(v) for v in rng.integers(-5, 6, size=2))
        j1 = int(rng.integers(1, 6))
        den, num = mobius_from_3jet(j0, j1, j2)
        inv = poly.series_inverse(list(den), 3)
        series = poly.mul_trunc(list(num), inv, 3)
        assert series == [j0, j1, j2]


def test_conic_standard():
    forms = conic_through_3jet([[1], [0, 1], [0, 0, 1]])
    norm = [tuple(Fraction(c) / forms[0][0] for c in f) for f in forms]
    assert norm == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_conic_matches_general_jet():
    jet = [[1], [0, 1], [0, 1, 1]]
    forms = conic_through_3jet(jet)
    assert jets_projectively_equal([list(f)[:3] for f in forms], jet, 3)
    # smoothness: the output parametrization is basepoint-free
    assert poly.forms_common_factor_degree([list(f) for f in forms]) == 0


def test_conic_rejects_collinear_jet():
    with pytest.raises(DegenerateJet):
        conic_through_3jet([[1], [0, 1], [0, 2]])


# ---------------------------------------------------------------------------
# the order-3 product dispatcher


def _diagonal_jet(k):
    fmt = Format((1,) * k, (1,) * k)
    return JetScheme(fmt, 3, (((1, 0, 0), (0, 1, 0)),) * k)


def test_curve_through_jet3_diagonal():
    curve = curve_through_jet3(_diagonal_jet(4))
    assert curve.multidegree == (1, 1, 1, 1)
    assert curve.embedded_degree == 4


def test_curve_through_jet3_ramified_factor():
    fmt = Format((1, 1, 1), (1, 1, 1))
    jet = JetScheme(fmt, 3, ((((1, 0, 0)), (0, 0, 1)),
                             ((1, 0, 0), (0, 1, 0)),
                             ((1, 0, 0), (0, 1, 0))))
    curve = curve_through_jet3(jet)
    assert curve.multidegree == (2, 1, 1)


def test_curve_through_jet3_plane_factor():
    fmt = Format((2, 1), (1, 1))
    jet = JetScheme(fmt, 3, (((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                             ((1, 0, 0), (0, 1, 0))))
    curve = curve_through_jet3(jet)
    assert curve.multidegree == (2, 1)


def test_curve_through_jet3_restriction_matches():
    rng = np.random.default_rng(37)
    fmt = Format((1, 1), (2, 1))
    for _ in range(20):
        o0 = (int(rng.integers(1, 4)), int(rng.integers(-3, 4)))
        jet = JetScheme(fmt, 3, (
            ((o0[0], int(rng.integers(-3, 4)), int(rng.integers(-3, 4))),
             (o0[1], int(rng.integers(1, 4)), int(rng.integers(-3, 4)))),
            ((1, int(rng.integers(1, 4)), int(rng.integers(-3, 4))),
             (0, 1, int(rng.integers(-3, 4))))))
        try:
            curve = curve_through_jet3(jet)
        except AutarkyViolation:
            continue
        for i in range(fmt.k):
            assert jets_projectively_equal(curve.factors[i], jet.factors[i], 3)


def test_curve_through_jet3_rejects_constant_factor():
    fmt = Format((1, 1), (1, 1))
    jet = JetScheme(fmt, 3, (((1, 0, 0), (2, 0, 0)),
                             ((1, 0, 0), (0, 1, 0))))
    with pytest.raises(AutarkyViolation):
        curve_through_jet3(jet)


# ---------------------------------------------------------------------------
# linearization


def test_linearize_diagonal_segre():
    curve = curve_through_jet3(_diagonal_jet(2))
    lin = linearize(curve)
    assert lin.degree == 2
    assert lin.span_dim == 2  # a plane conic in its span
    assert [list(r) for r in lin.matrix] == [[1, 0, 0], [0, 1, 0], [0, 1, 0],
                                             [0, 0, 1]]


def test_linearize_veronese_conic():
    fmt = Format((2,), (3,))
    jet = JetScheme(fmt, 3, (((1, 0, 0), (0, 1, 0), (0, 0, 1)),))
    curve = curve_through_jet3(jet)
    lin = linearize(curve)
    assert lin.degree == 6
    assert lin.span_dim == 6  # rational normal curve of degree 6


def test_linearize_identity_on_parameters():
    curve = curve_through_jet3(_diagonal_jet(3))
    lin = linearize(curve)
    rng = np.random.default_rng(2)
    for _ in range(5):
        t0 = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        x = curve.evaluate(Fraction(1), t0)
        direct = embed(curve.format, x).coeffs
        mono = [t0 ** j for j in range(lin.degree + 1)]
        via = [sum(row[j] * mono[j] for j in range(lin.degree + 1))
               for row in lin.matrix]
        assert list(direct) == via


def test_detect_power_substitution():
    fmt = Format((1,), (1,))
    curve = CurveMap(fmt, (((1, 0, 0), (0, 0, 1)),))  # (s^2, t^2)
    kappa, reduced = detect_power_substitution(curve)
    assert kappa == 2
    assert reduced.factors == (((1, 0), (0, 1)),)
    kappa2, same = detect_power_substitution(reduced)
    assert kappa2 == 1 and same is reduced


# ---------------------------------------------------------------------------
# hyperplane sections


def test_section_point_on_curve():
    curve = curve_through_jet3(_diagonal_jet(3))
    fmt = curve.format
    p = embed(fmt, curve.evaluate(1.0 + 0j, 0.5 + 0j))
    dec = hyperplane_section_decompose(curve, p, seed=1)
    assert dec.size == 1
    verify_decomposition(p, dec, tol=1e-8)


def test_section_generic_point_twisted_cubic():
    curve = curve_through_jet3(_diagonal_jet(3))
    fmt = curve.format
    vecs = jet_vectors(_diagonal_jet(3))
    p = tensor_combination([v for v in vecs], [1.0, -2.0, 1.5])
    dec = hyperplane_section_decompose(curve, p, seed=3)
    assert dec.size <= 3
    verify_decomposition(p, dec, tol=1e-8)
    # every output point lies on the curve: re-embed and check the span
    for _, x in dec.terms:
        flat = embed(fmt, x)
        lin = linearize(curve)
        cols = [[complex(v) for v in lin.column(j)]
                for j in range(lin.degree + 1)]
        assert linalg.solve_in_span([complex(v) for v in flat.coeffs],
                                    cols, tol=1e-7) is not None


def test_section_not_in_span():
    curve = curve_through_jet3(_diagonal_jet(3))
    fmt = curve.format
    # a point off the curve span: unit tensor at the last index
    coeffs = [0.0] * fmt.size
    coeffs[3] = 1.0
    coeffs[5] = -1.0
    from secant3.tensorspace import PSTensor
    p = PSTensor(fmt, tuple(coeffs))
    with pytest.raises(NotInSpan):
        hyperplane_section_decompose(curve, p, seed=0)


def test_piecewise_section():
    fmt = Format((1, 1), (1, 1))
    base = ((1, 0), (1, 0))
    l1 = CurveMap(fmt, (((1, 0), (0, 1)), ((1,), (0,))))
    l2 = CurveMap(fmt, (((1,), (0,)), ((1, 0), (0, 1))))
    piece = PiecewiseCurve((l1, l2))
    p1 = embed(fmt, ((1, 2), (1, 0)))
    p2 = embed(fmt, ((1, 0), (1, 3)))
    p = tensor_combination([p1, p2], [1.0, 2.0])
    dec = hyperplane_section_decompose(piece, p, seed=5)
    assert dec.size <= 2
    verify_decomposition(p, dec, tol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.lists(st.integers(-4, 4), min_size=2, max_size=6))
def test_extend_degree_bound_property(c, tail):
    polys = [[1] + tail[: c - 1], [0] + tail[: c - 1]]
    e, forms = extend_jet_to_map(polys, c)
    assert 0 <= e <= c
    assert all(len(f) == e + 1 for f in forms)
