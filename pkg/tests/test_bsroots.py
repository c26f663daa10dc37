from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from bspole.bsroots import (
    eigenvalue_report,
    full_bs_roots,
    graded_dims,
    milnor_graded_dim,
    milnor_number,
    representations,
    window_roots,
)
from bspole.polecriterion import classify_roots
from bspole.polyring import Weights, infer_weights, parse_poly

from conftest import fixture_polys

X, Y = sympy.symbols("x y")


def brute_force_window(a: int, b: int, m: int) -> set[int]:
    """Numerators d = j'a + k'b with j', k' >= 1 and d < m, by direct double loop."""
    return {jp * a + kp * b for jp in range(1, m + 1) for kp in range(1, m + 1) if jp * a + kp * b < m}


def groebner_graded_dims(text: str, w: Weights) -> dict[int, int]:
    """Graded dimensions of the Milnor algebra from a Groebner basis (standard monomials)."""
    f = sympy.sympify(text.replace("^", "**"))
    G = sympy.groebner([sympy.diff(f, X), sympy.diff(f, Y)], X, Y, order="grevlex")
    leads = [sympy.Poly(g, X, Y).monoms(order="grevlex")[0] for g in G.exprs]
    dims: dict[int, int] = {}
    for p in range(2 * w.m):
        for q in range(2 * w.m):
            if not any(p >= lp and q >= lq for lp, lq in leads):
                t = p * w.a + q * w.b
                dims[t] = dims.get(t, 0) + 1
    return dims


# --- window --------------------------------------------------------------------


def test_window_examples():
    roots = window_roots(Weights(3, 4, 12))
    assert [c.d for c in roots] == [7, 10, 11]
    assert [c.s0 for c in roots] == [Fraction(-7, 12), Fraction(-5, 6), Fraction(-11, 12)]
    (cusp,) = window_roots(Weights(3, 2, 6))
    assert cusp.d == 5 and cusp.s0 == Fraction(-5, 6) and cusp.representations == ((0, 0),)
    assert window_roots(Weights(1, 1, 2)) == []


def test_window_matches_brute_force_random():
    rng = random.Random(20240601)
    checked = 0
    while checked < 200:
        a, b, m = rng.randint(1, 12), rng.randint(1, 12), rng.randint(1, 120)
        if a > m or b > m:
            continue
        w = Weights.normalized(a, b, m)
        got = {c.d for c in window_roots(w)}
        assert got == brute_force_window(w.a, w.b, w.m), (a, b, m)
        checked += 1


@pytest.mark.parametrize("text", fixture_polys())
def test_representations_exhaustive(text):
    w = infer_weights(parse_poly(text))
    for c in window_roots(w):
        expected = {(j, k) for j in range(c.d) for k in range(c.d) if (j + 1) * w.a + (k + 1) * w.b == c.d}
        assert set(c.representations) == expected
        assert c.representations == representations(w, c.d)
        assert w.a + w.b <= c.d < w.m
        assert -1 < c.s0 < 0


# --- Milnor algebra --------------------------------------------------------------


def test_graded_dim_examples():
    f, w = parse_poly("x^2+y^3"), Weights(3, 2, 6)
    assert milnor_graded_dim(f, w, 0) == 1
    assert milnor_graded_dim(f, w, 2) == 1
    assert milnor_graded_dim(f, w, 3) == 0


def test_milnor_numbers():
    assert milnor_number(parse_poly("x^2+y^3"), Weights(3, 2, 6)) == 2
    assert milnor_number(parse_poly("x^4+y^3"), Weights(3, 4, 12)) == 6


@pytest.mark.parametrize("text", fixture_polys())
def test_graded_dims_match_groebner_oracle(text):
    f = parse_poly(text)
    w = infer_weights(f)
    ours = {t: d for t, d in graded_dims(f, w).items() if d}
    assert ours == groebner_graded_dims(text, w)
    # classical formula for the Milnor number of a weighted homogeneous isolated singularity
    assert milnor_number(f, w) == Fraction((w.m - w.a) * (w.m - w.b), w.a * w.b)


def test_full_roots_examples():
    assert full_bs_roots(parse_poly("x^2+y^3"), Weights(3, 2, 6)) == [Fraction(-7, 6), Fraction(-1), Fraction(-5, 6)]
    assert full_bs_roots(parse_poly("x^2+y^2"), Weights(1, 1, 2)) == [Fraction(-1)]
    assert full_bs_roots(parse_poly("x*y"), Weights(1, 1, 2)) == [Fraction(-1)]


@pytest.mark.parametrize("text", fixture_polys())
def test_window_roots_are_bs_roots(text):
    f = parse_poly(text)
    w = infer_weights(f)
    full = set(full_bs_roots(f, w))
    assert {c.s0 for c in window_roots(w)} <= full
    assert {r for r in full if -1 < r < 0} == {c.s0 for c in window_roots(w)}


# --- eigenvalue report -----------------------------------------------------------


def test_eigenvalue_report_quartic():
    f = parse_poly("x^4+y^3")
    w = infer_weights(f)
    report = eigenvalue_report(f, w, classify_roots(f, w, window_roots(w), threads=1))
    by_alpha = {e["alpha1"]: e for e in report}
    assert by_alpha["-5/6"]["pole"] is False and by_alpha["-5/6"]["case"] == 2
    assert by_alpha["-7/12"]["case"] == 1


def test_eigenvalue_report_cusp():
    f = parse_poly("x^2+y^3")
    w = infer_weights(f)
    report = eigenvalue_report(f, w, classify_roots(f, w, window_roots(w), threads=1))
    (entry,) = [e for e in report if e["alpha1"] == "-5/6"]
    assert entry["pole"] is True and entry["case"] == 1


def test_eigenvalue_report_empty_window():
    assert eigenvalue_report(parse_poly("x*y"), Weights(1, 1, 2), []) == []
