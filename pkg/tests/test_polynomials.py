"""Polynomial and binary-form helper tests."""

from fractions import Fraction

import pytest

from secant3 import polynomials as poly
from secant3.errors import InvalidInput


def test_mul_trunc_matches_full_product():
    p, q = [1, 2, 3], [4, 0, 5]
    full = poly.mul(p, q)
    assert poly.mul_trunc(p, q, 4) == full[:4]


def test_series_inverse():
    p = [1, 1]  # 1 + t
    inv = poly.series_inverse(p, 5)
    assert inv == [1, -1, 1, -1, 1]
    assert poly.mul_trunc(p, inv, 5) == [1, 0, 0, 0, 0]


def test_series_inverse_requires_unit():
    with pytest.raises(InvalidInput):
        poly.series_inverse([0, 1], 3)


def test_gcd_monic():
    # (t-1)(t-2) and (t-1)(t+3)
    a = poly.mul([-1, 1], [-2, 1])
    b = poly.mul([-1, 1], [3, 1])
    assert poly.gcd(a, b) == [Fraction(-1), Fraction(1)]


def test_gcd_coprime():
    assert poly.gcd([1, 1], [2, 0, 1]) == [Fraction(1)]


def test_squarefree_detection():
    assert poly.is_squarefree_exact([-2, 1])
    assert not poly.is_squarefree_exact(poly.mul([-1, 1], [-1, 1]))


def test_form_eval_homogeneous():
    # s^2 - t^2 at (1, 2) -> -3, at (2, 1) -> 3
    f = [1, 0, -1]
    assert poly.form_eval(f, 1, 2) == -3
    assert poly.form_eval(f, 2, 1) == 3


def test_form_substitute_degree():
    f = [0, 1, 0]  # s t
    sub = poly.form_substitute(f, [1, 1], [0, 1])  # s -> s+t, t -> t
    # (s+t) t = st + t^2
    assert sub == [0, 1, 1]


def test_form_infinity_multiplicity():
    assert poly.form_infinity_multiplicity([1, 1, 0, 0]) == 2
    assert poly.form_infinity_multiplicity([0, 0, 1]) == 0


def test_form_squarefree_rejects_double_infinity():
    assert not poly.form_is_squarefree_exact([1, 1, 0, 0])  # s^2 (s + t)
    assert poly.form_is_squarefree_exact([1, 1, 0])  # s (s + t), simple roots


def test_forms_common_factor_degree():
    # (s t, t^2) share t
    assert poly.forms_common_factor_degree([[0, 1, 0], [0, 0, 1]]) == 1
    # (s^2, t^2) are basepoint-free
    assert poly.forms_common_factor_degree([[1, 0, 0], [0, 0, 1]]) == 0
    # (s^3, s^2 t) share s^2
    assert poly.forms_common_factor_degree([[1, 0, 0, 0], [0, 1, 0, 0]]) == 2


def test_find_roots_polished():
    roots = poly.find_roots([-6, 11, -6, 1])  # (t-1)(t-2)(t-3)
    assert sorted(round(r.real) for r in roots) == [1, 2, 3]
    assert all(abs(r - round(r.real)) < 1e-12 for r in roots)


def test_form_roots_infinity():
    params = poly.form_roots([0, 1, 0, 0])  # s^2 t: roots 0 and infinity twice -> merged off
    finite = [p for p in params if abs(p[0]) > 0.5]
    inf = [p for p in params if abs(p[0]) <= 0.5]
    assert len(finite) == 1 and abs(finite[0][1]) < 1e-12
    assert len(inf) == 2


def test_integerize():
    out = poly.integerize([[Fraction(1, 2), Fraction(3, 4)], [Fraction(0), Fraction(2)]])
    assert out == [[2, 3], [0, 8]]
