"""Term-language layer: closure, derivatives, products, Taylor, integrals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltawell.distcalc import CONST, COS, EXP, SIN, SmoothExpr, Term
from deltawell.errors import ClosureError

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
# rates near zero (but not exactly zero) make 1/rate antiderivative
# coefficients overflow; that is float reality, not what we test here
rates = st.one_of(st.just(0.0),
                  st.floats(0.01, 3.0), st.floats(-3.0, -0.01))


@st.composite
def smooth_exprs(draw, kinds=(CONST, SIN, COS, EXP)):
    n = draw(st.integers(1, 3))
    terms = []
    for _ in range(n):
        terms.append(Term(
            coeff=complex(draw(finite), draw(finite)),
            power=draw(st.integers(0, 3)),
            kind=draw(st.sampled_from(kinds)),
            rate=draw(rates),
            phase=draw(finite),
        ))
    return SmoothExpr.of(terms)


trig_exprs = smooth_exprs(kinds=(CONST, SIN, COS))


@settings(max_examples=150, deadline=None)
@given(trig_exprs, trig_exprs, finite)
def test_product_matches_pointwise(e1, e2, x):
    p = e1 * e2
    assert p.evaluate(x) == pytest.approx(e1.evaluate(x) * e2.evaluate(x), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(smooth_exprs(), finite)
def test_derivative_matches_finite_difference(e, x):
    h = 1e-6
    fd = (e.evaluate(x + h) - e.evaluate(x - h)) / (2 * h)
    # rounding in the difference quotient scales with |e|/h
    scale = max(1.0, abs(fd), abs(e.evaluate(x)) * 1e-16 / h * 1e5)
    assert abs(e.derivative().evaluate(x) - fd) < 1e-5 * scale


@settings(max_examples=100, deadline=None)
@given(smooth_exprs(), finite)
def test_antiderivative_inverts_derivative(e, x):
    F = e.antiderivative()
    assert F.derivative().evaluate(x) == pytest.approx(e.evaluate(x), rel=1e-8, abs=1e-8)


def test_antiderivative_matches_simpson():
    e = SmoothExpr.of([Term(1.0, 2, SIN, 2.0, 0.3), Term(0.5, 1, EXP, -0.7, 0.0)])
    F = e.antiderivative()
    exact = F.evaluate(1.5) - F.evaluate(0.25)
    xs = np.linspace(0.25, 1.5, 2001)
    ys = e.evaluate_array(xs)
    w = np.ones(len(xs))
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    simpson = np.sum(w * ys) * (xs[1] - xs[0]) / 3.0
    assert exact == pytest.approx(simpson, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(smooth_exprs(), finite)
def test_taylor_reproduces_local_values(e, x0):
    coeffs = e.taylor(x0, 14)
    dx = 0.05
    val = sum(c * dx**j for j, c in enumerate(coeffs))
    assert val == pytest.approx(e.evaluate(x0 + dx), rel=1e-8, abs=1e-9)


def test_taylor_exact_for_polynomials():
    e = SmoothExpr.of([Term(2.0, 3), Term(-1.0, 1)])  # 2x^3 - x
    c = e.taylor(1.0, 4)
    assert c == [pytest.approx(v) for v in (1.0, 5.0, 6.0, 2.0, 0.0)]


def test_exp_trig_product_leaves_language():
    with pytest.raises(ClosureError):
        SmoothExpr.sine(1.0, 2.0) * SmoothExpr.exponential(1.0, -1.0)


def test_exp_exp_product_adds_rates():
    p = SmoothExpr.exponential(2.0, 1.5, 0.25) * SmoothExpr.exponential(3.0, -0.5)
    (t,) = p.terms
    assert (t.kind, t.rate, t.phase) == (EXP, 1.0, 0.25)
    assert t.coeff == 6.0


def test_rate_zero_oscillators_fold_to_constants():
    e = SmoothExpr.of([Term(2.0, 0, SIN, 0.0, math.pi / 2)])
    (t,) = e.terms
    assert t.kind == CONST
    assert t.coeff == pytest.approx(2.0)


def test_negative_rate_sines_are_canonicalized():
    a = SmoothExpr.sine(1.0, -2.0, 0.5)
    b = SmoothExpr.sine(-1.0, 2.0, -0.5)
    assert a == b


def test_evaluate_array_matches_scalar():
    e = SmoothExpr.of([Term(1 + 2j, 2, COS, 3.0, 0.1)])
    xs = np.array([0.0, 0.3, 1.7])
    got = e.evaluate_array(xs)
    want = [e.evaluate(x) for x in xs]
    assert np.allclose(got, want)


def test_conjugate_flips_imaginary_coefficients():
    e = SmoothExpr.of([Term(1 + 2j, 0, SIN, 1.0, 0.0)])
    assert e.conjugate().evaluate(0.4) == e.evaluate(0.4).conjugate()
