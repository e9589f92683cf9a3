import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wlab.errors import PoleError
from wlab.rational import (I, BivariatePoly, ComplexPoly, ExactComplex,
                           RationalComplexFunction as RF, poly_gcd, poly_roots, rf_derivative,
                           rf_eval, rf_simplify)


def z_exact():
    return RF.identity(exact=True)


def test_eval_henneberg_f_at_one():
    z = z_exact()
    assert rf_eval((z ** 4 - 1) / z ** 4, 1) == 0


def test_eval_identity():
    assert rf_eval(RF.identity(), 3 + 4j) == 3 + 4j


def test_eval_meeks_g_at_two():
    z = z_exact()
    assert rf_eval(z ** 2 * (z + 1) / (z - 1), 2) == pytest.approx(12)


def test_eval_pole_raises():
    z = z_exact()
    with pytest.raises(PoleError):
        rf_eval(1 / z, 0)


def test_eval_vectorized():
    z = z_exact()
    pts = np.array([1 + 1j, 2, -0.5j])
    np.testing.assert_allclose(rf_eval(z * z + 1, pts), pts ** 2 + 1)


def test_derivative_examples():
    z = z_exact()
    assert rf_derivative(z).identity_residual(RF.constant(1)) == 0
    assert rf_derivative((z ** 4 - 1) / z ** 4).identity_residual(4 / z ** 5) == 0
    assert rf_derivative(RF.constant(ExactComplex(3, -2))).is_zero()


@pytest.mark.parametrize("p, expected", [
    (ComplexPoly([-1, 0, 0, 0, 1]), [(-1, 1), (-1j, 1), (1j, 1), (1, 1)]),
    (ComplexPoly([-1, -1, 1]), [((1 - math.sqrt(5)) / 2, 1), ((1 + math.sqrt(5)) / 2, 1)]),
    (ComplexPoly([4, -4, 1]), [(2, 2)]),
])
def test_poly_roots_examples(p, expected):
    got = poly_roots(p)
    assert len(got) == len(expected)
    for (r, m), (e, k) in zip(got, expected):
        assert abs(r - e) <= 1e-10
        assert m == k


def test_poly_roots_float_multiplicity():
    p = ComplexPoly.from_roots([1.0, 1.0, 1.0, 2.0, 2.0, -3.0 + 1j])
    got = poly_roots(p)
    assert sorted(m for _, m in got) == [1, 2, 3]
    assert sum(m for _, m in got) == 6


def test_poly_roots_close_but_distinct():
    got = poly_roots(ComplexPoly.from_roots([1.0, 1.0 + 1e-4]))
    assert len(got) == 2


def test_simplify_examples():
    z = z_exact()
    f = 2 * I * (z - 1) ** 2 / z ** 4
    g = z ** 2 * (z + 1) / (z - 1)
    fg2 = rf_simplify(f * g * g)
    assert fg2.denominator.is_constant()
    assert fg2.identity_residual(2 * I * (z + 1) ** 2) == 0
    assert rf_simplify((z ** 2 - 1) / (z - 1)).identity_residual(z + 1) == 0
    assert rf_simplify(z / z).is_constant()


def test_simplify_float_mode_cancels():
    z = RF.identity(exact=False)
    r = ((z - 0.3) * (z + 2j)) / ((z - 0.3) * (z - 5))
    s = rf_simplify(r)
    assert s.denominator.degree == 1
    assert abs(s(1.0) - (1 + 2j) / (1 - 5)) < 1e-12


def test_gcd_exact():
    a = ComplexPoly.from_roots([1, 2, 3])
    b = ComplexPoly.from_roots([2, 3, 7])
    assert poly_gcd(a, b) == ComplexPoly.from_roots([2, 3])


def test_compose_mobius_and_conj():
    z = z_exact()
    r = (z + I) / (z - 2)
    inv = r.compose_mobius(0, -1, 1, 0)
    w = 0.3 + 0.8j
    assert abs(inv(w) - r(-1 / w)) < 1e-14
    assert abs(r.conj()(w.conjugate()) - r(w).conjugate()) < 1e-14


def test_exact_complex_arithmetic():
    a = ExactComplex(1, 2)
    b = ExactComplex(3, -1)
    assert complex(a * b) == (1 + 2j) * (3 - 1j)
    assert complex(a / b) == pytest.approx((1 + 2j) / (3 - 1j))
    assert a.conjugate() == ExactComplex(1, -2)


def test_bivariate_evaluates_modulus():
    p = ComplexPoly([1, ExactComplex(0, 1)])  # 1 + i z
    q = BivariatePoly.from_z(p) * BivariatePoly.from_w(p.conj())
    z = 0.4 - 0.7j
    assert abs(q(z, z.conjugate()) - abs(1 + 1j * z) ** 2) < 1e-14


# ---------------------------------------------------------------- properties

coef = st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False,
                          allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, min_size=1, max_size=4),
       st.floats(0, 2 * math.pi))
def test_derivative_matches_central_difference(num, den, angle):
    r = RF(ComplexPoly(num), ComplexPoly(den))
    z0 = 1.7 * cmath.exp(1j * angle)
    scale = ComplexPoly(den).magnitude_scale(z0)
    if abs(r.denominator(z0)) < 1e-2 * scale:
        return
    poles = [p for p, _ in poly_roots(ComplexPoly(den))] if len(den) > 1 else []
    if any(abs(z0 - p) < 0.1 for p in poles):
        return
    h = 1e-6
    fd = (r(z0 + h) - r(z0 - h)) / (2 * h)
    exact = rf_derivative(r)(z0)
    assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=2, max_size=13))
def test_roots_resubstitute_and_reconstruct(coeffs):
    p = ComplexPoly(coeffs)
    roots = poly_roots(p)
    assert sum(m for _, m in roots) == p.degree
    for r, _ in roots:
        assert abs(p(r)) <= 1e-10 * p.magnitude_scale(r)
    flat = [r for r, m in roots for _ in range(m)]
    rebuilt = ComplexPoly.from_roots(flat, leading=p.coeffs[-1])
    err = max(abs(a - b) for a, b in zip(rebuilt.coeffs, p.coeffs))
    assert err <= 1e-8 * max(abs(c) for c in p.coeffs)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=3),
       st.lists(coef, min_size=1, max_size=3), st.lists(coef, min_size=1, max_size=3))
def test_simplify_preserves_values(common, num, den):
    c = ComplexPoly.from_roots(common)
    r = RF(ComplexPoly(num) * c, ComplexPoly(den) * c)
    s = rf_simplify(r)
    rng = np.random.default_rng(0)
    pts = rng.normal(size=50) * 2 + 1j * rng.normal(size=50) * 2
    bad = [p for p, _ in poly_roots(c)] + ([p for p, _ in poly_roots(ComplexPoly(den))]
                                          if len(den) > 1 else [])
    for z in pts:
        if any(abs(z - b) < 0.05 for b in bad):
            continue
        a, b = r(z), s(z)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
