from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bspole.bsroots import window_roots
from bspole.polecriterion import symmetry_class, vanishes_by_symmetry
from bspole.polyring import UniPoly, Weights, infer_weights, parse_poly, restrict
from bspole.quadrature import (
    DivergentTail,
    StructuralInvariantViolated,
    Tolerances,
    abs_power_integral,
    convergence_precheck,
    criterion_terms,
    gauss_jacobi_rule,
    singular_integral,
    tanh_sinh_pair,
    tanh_sinh_rule,
)

from conftest import fixture_polys

# Reference values computed once with mpmath (see cusp_reference below) and frozen.
CUSP_I00 = 13.270393927728033  # ∫ 2|1+u^3|^(-5/6) du over the real line


def exact_jacobi_moment(beta: Fraction, p: int) -> Fraction:
    """∫_{-1}^{1} (1+t)^beta t^p dt times (beta+1)/2^(beta+1), exactly.

    With t = 2x - 1 the integral is 2^(beta+1) Σ_k C(p,k) 2^k (-1)^(p-k) / (beta+k+1).
    The common irrational factor 2^(beta+1) is kept outside so the rest is rational.
    """
    return sum(Fraction(math.comb(p, k) * 2**k * (-1) ** (p - k)) / (beta + k + 1) for k in range(p + 1))


def cusp_reference(dps: int = 40) -> mpmath.mpf:
    """Independent high-precision value of ∫ |1+u^3|^(-5/6) du.

    Near the root u = -1 the substitution u = -1 ± v^6 turns the integrand
    smooth; plain tanh-sinh on the raw singular integrand is only good to ~1e-8.
    """
    with mpmath.workdps(dps):
        s = mpmath.mpf(-5) / 6
        q = lambda u: abs(u * u - u + 1) ** s  # 1 + u^3 = (1 + u)(u^2 - u + 1)
        near = mpmath.quad(lambda v: 6 * v**5 * (v**6) ** s * (q(-1 + v**6) + q(-1 - v**6)), [0, 1])
        far = mpmath.quad(lambda u: abs(1 + u**3) ** s, [-mpmath.inf, -2]) + mpmath.quad(
            lambda u: abs(1 + u**3) ** s, [0, mpmath.inf]
        )
        return near + far


def abs_moment(beta: Fraction, p: int) -> float:
    """∫_{-1}^{1} (1+t)^beta |t|^p dt: a Beta function on [-1, 0] plus a smooth integral on [0, 1]."""
    with mpmath.workdps(30):
        bb = mpmath.mpf(beta.numerator) / beta.denominator
        left = mpmath.beta(p + 1, bb + 1)
        right = mpmath.quad(lambda t: (1 + t) ** bb * t**p, [0, 1])
        return float(left + right)


# --- rules ---------------------------------------------------------------------


def test_gauss_legendre_three_point():
    x, w = gauss_jacobi_rule(0.0, 3)
    assert np.allclose(np.sort(x), [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], atol=1e-15)
    assert np.allclose(w[np.argsort(x)], [5 / 9, 8 / 9, 5 / 9], atol=1e-15)


def test_gauss_jacobi_weight_integral_one_node():
    _, w = gauss_jacobi_rule(-0.5, 1)
    assert w.sum() == pytest.approx(2 * math.sqrt(2), rel=1e-15)


def test_degree_five_exact_at_three_nodes():
    beta = Fraction(-5, 6)
    x, w = gauss_jacobi_rule(float(beta), 3)
    coeffs = [3, -1, 4, 1, -5, 9]
    exact = sum(c * exact_jacobi_moment(beta, p) for p, c in enumerate(coeffs)) * 2 ** (float(beta) + 1)
    approx = float(np.sum(w * np.polyval(coeffs[::-1], x)))
    assert approx == pytest.approx(float(exact), rel=1e-13)


@pytest.mark.parametrize(
    "beta", [Fraction(-5, 6), Fraction(-1, 2), Fraction(-11, 15), Fraction(-14, 15), Fraction(-1, 12), Fraction(0)]
)
def test_gauss_jacobi_moments(beta):
    # errors are measured against the moment of |t|^p, so odd moments that
    # nearly cancel are judged on the scale of their terms
    scale = 2 ** (float(beta) + 1)
    for n in (1, 2, 3, 4, 8, 16, 32, 64, 128):
        x, w = gauss_jacobi_rule(float(beta), n)
        for p in range(2 * n):
            exact = float(exact_jacobi_moment(beta, p)) * scale
            assert abs(float(np.sum(w * x**p)) - exact) <= 1e-13 * abs_moment(beta, p), (n, p)


def test_gauss_jacobi_rejects_nonintegrable():
    with pytest.raises(ValueError):
        gauss_jacobi_rule(-1.0, 4)


def test_tanh_sinh_embedded_rule():
    x, w, wc = tanh_sinh_pair(5)
    x0, w0 = tanh_sinh_rule(5)
    xc, _ = tanh_sinh_rule(4)
    assert np.array_equal(x, x0) and np.array_equal(w, w0)
    assert np.allclose(np.sort(x[wc > 0]), np.sort(xc))
    f = lambda t: np.exp(t) * np.sqrt(t)
    ref = float(mpmath.quad(lambda t: mpmath.exp(t) * mpmath.sqrt(t), [0, 1]))
    assert abs(w @ f(x) - ref) < 1e-13
    assert abs(wc @ f(x) - ref) < 1e-9


# --- tolerances ---------------------------------------------------------------------


def test_tolerances_positive():
    with pytest.raises(ValueError):
        Tolerances(rel_err=0)
    with pytest.raises(ValueError):
        Tolerances(zero_abs=-1)


# --- precheck ---------------------------------------------------------------------


def test_precheck_cusp():
    f, w = parse_poly("x^2+y^3"), Weights(3, 2, 6)
    assert convergence_precheck(f, w, Fraction(-5, 6), 0) == 3
    assert w.m - w.b * 3 == 0


def test_precheck_divergent():
    f, w = parse_poly("x^2+y^3"), Weights(3, 2, 6)
    with pytest.raises(DivergentTail):
        convergence_precheck(f, w, Fraction(-5, 6), 2)


def test_precheck_structural_violation():
    # x^2 divides f, so f(1,u) has too small a degree for the weights
    with pytest.raises(StructuralInvariantViolated):
        convergence_precheck(parse_poly("x^2*y"), Weights(1, 1, 3), Fraction(-2, 3), 0)


@pytest.mark.parametrize("text", fixture_polys())
def test_structural_invariant_on_fixtures(text):
    f = parse_poly(text)
    w = infer_weights(f)
    D = max(restrict(f, 1).degree, restrict(f, -1).degree)
    assert w.m - w.b * D in (0, w.a)
    for c in window_roots(w):
        for j, k in c.representations:
            assert convergence_precheck(f, w, c.s0, k) == D


# --- integrals ----------------------------------------------------------------------


def test_cusp_against_high_precision_reference():
    ref = 2 * cusp_reference()
    assert float(ref) == pytest.approx(CUSP_I00, rel=1e-15)
    res = singular_integral(parse_poly("x^2+y^3"), Fraction(-5, 6), 0, 0)
    assert res.value > 2.0
    assert abs(res.value - float(ref)) <= 1e-11 * float(ref)
    assert abs(res.value - float(ref)) <= max(2 * res.abs_error_estimate, 1e-13 * float(ref))


def test_cusp_reference_stable_in_precision():
    assert abs(cusp_reference(40) - cusp_reference(60)) < mpmath.mpf(10) ** -35


def test_parity_cancellation_exact():
    res = singular_integral(parse_poly("x^4+y^3"), Fraction(-5, 6), 1, 0)
    assert abs(res.value) < 1e-12
    assert res.l1_mass > 1


def test_jacobi_path_on_unit_segment():
    res = abs_power_integral(UniPoly([0, 1]), -0.5, lo=0.0, hi=1.0)
    assert res.value == pytest.approx(2.0, rel=1e-14)
    assert any(seg.method == "gauss-jacobi" for seg in res.segments)


def test_segments_cover_line_with_tail_transforms():
    res = singular_integral(parse_poly("x^2+y^3"), Fraction(-5, 6), 0, 0)
    methods = {seg.method for seg in res.segments}
    assert methods == {"gauss-jacobi", "adaptive", "tail-transform"}


def test_irrational_roots():
    # f(1,u) = u^2 - 2 has roots ±sqrt(2); over [-3, 3] the integral of
    # |u^2 - 2|^(-1/2) is pi + 2 arccosh(3/sqrt(2)) in closed form
    f = parse_poly("y^2-2*x^2")
    res = abs_power_integral(restrict(f, 1), -0.5, lo=-3.0, hi=3.0)
    ref = math.pi + 2 * math.acosh(3 / math.sqrt(2))
    assert res.value == pytest.approx(ref, rel=1e-13)


def test_tail_transform_against_truncation():
    g = UniPoly([1, 0, 0, 1])
    s, L = -5 / 6, 1e6
    tail = abs_power_integral(g, s, lo=2.0)
    truncated = abs_power_integral(g, s, lo=2.0, hi=L)
    expo = 0 + 3 * s + 1  # k + D*s0 + 1
    bound = 1.01 * L**expo / abs(expo)  # |1+u^3|^s <= 1.01 u^(3s) for u >= 1e6
    assert 0 <= tail.value - truncated.value <= bound
    assert tail.value - truncated.value >= 0.99 * L**expo / abs(expo)


NONSYM = [
    (text, c.d, j, k)
    for text in ["x^4+y^3", "x^3+y^5", "x^3+x*y^3", "x^3*y+x*y^5", "x^2+x*y^3"]
    for c in window_roots(infer_weights(parse_poly(text)))
    for j, k in c.representations
]


@pytest.mark.parametrize("text, d, j, k", NONSYM)
def test_node_doubling_stability(text, d, j, k):
    f = parse_poly(text)
    s0 = Fraction(-d, infer_weights(f).m)
    a = singular_integral(f, s0, j, k, base_nodes=16)
    b = singular_integral(f, s0, j, k, base_nodes=32)
    assert a.abs_error_estimate >= 0
    assert abs(a.value - b.value) <= 2 * max(a.abs_error_estimate, b.abs_error_estimate)


@pytest.mark.parametrize("text", fixture_polys())
def test_symmetric_representations_vanish_numerically(text):
    f = parse_poly(text)
    w = infer_weights(f)
    sym = symmetry_class(f)
    for c in window_roots(w):
        for j, k in c.representations:
            if vanishes_by_symmetry(sym, j, k):
                assert abs(singular_integral(f, c.s0, j, k).value) <= 1e-10, (c.d, j, k)


def test_criterion_terms_combine():
    f = parse_poly("x^3+y^5")
    plus, minus = criterion_terms(f, Fraction(-11, 15), 1)
    total = singular_integral(f, Fraction(-11, 15), 0, 1)
    assert total.value == pytest.approx(plus.value + minus.value, abs=1e-14)
    assert total.l1_mass == pytest.approx(plus.l1_mass + minus.l1_mass)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.fractions(Fraction(-9, 10), Fraction(-1, 10), max_denominator=20))
def test_power_integral_against_beta_function(p, q, s):
    # ∫_0^1 u^(p-1) |1-u^q|^s du = B(p/q, s+1)/q, two endpoint singularities
    g = UniPoly([1] + [0] * (q - 1) + [-1])
    mono = lambda u: u ** (p - 1)
    res = abs_power_integral(g, float(s), mono, lo=0.0, hi=1.0)
    ref = mpmath.beta(mpmath.mpf(p) / q, mpmath.mpf(s.numerator) / s.denominator + 1) / q
    assert res.value == pytest.approx(float(ref), rel=1e-10)
