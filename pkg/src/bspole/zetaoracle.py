"""A second, independent route to the poles: the zeta function itself.

Test functions are products of one-variable bumps with prescribed Taylor
coefficients at the origin. ``Z(s) = ∫|f|^s φ`` is evaluated directly for
``s > 0`` and through the integration-by-parts continuation for ``s > -1``;
residues come from a closed form and from a symmetric-difference fit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from .bsroots import representations
from .chainrule import cijk_table
from .polyring import Poly, Weights, restrict
from .quadrature import (
    IntegralResult,
    QuadratureFailure,
    Tolerances,
    abs_power_integral,
    singular_integral,
    tanh_sinh_pair,
)

EPS = np.finfo(float).eps


class EvaluationAtPole(ValueError):
    pass


class FitUnstable(RuntimeError):
    pass


# rho~ = e * exp(-1/(1-x^2)) = exp(-x^2/(1-x^2)); its log g has simple closed-form derivatives
_EDGE = 2e-3  # below this value of 1 - x^2 every derivative of rho~ underflows

# The N-th t-derivative of phi is much larger than its t-integral (a factor 1e7
# for x^4+y^3 near s = -7/12), so G carries about 1e-8 relative noise and the
# outer quadrature targets 1e-7.
ORACLE_TOL = Tolerances(rel_err=1e-7)


@lru_cache(maxsize=None)
def _ratio_at_zero(n: int) -> tuple[Fraction, ...]:
    """``R_l(0) = rho~^(l)(0) / rho~(0)`` for ``l <= n``, exactly."""
    gd = [Fraction(0)] + [Fraction(-math.factorial(l)) if l % 2 == 0 else Fraction(0) for l in range(1, n + 2)]
    R = [Fraction(1)]
    for k in range(n):
        R.append(sum(math.comb(k, l) * gd[l + 1] * R[k - l] for l in range(k + 1)))
    return tuple(R)


def _rho_derivs(x: np.ndarray, n: int) -> list[np.ndarray]:
    """``rho~^(l)(x)`` for ``l <= n`` on an array, zero outside the open support."""
    x = np.asarray(x, dtype=float)
    inside = 1.0 - x * x > _EDGE
    xs = np.where(inside, x, 0.0)
    gd = [None]
    for l in range(1, n + 2):
        fl = math.factorial(l)
        gd.append(-0.5 * fl * ((1.0 - xs) ** -(l + 1) + (-1) ** l * (1.0 + xs) ** -(l + 1)))
    R = [np.ones_like(xs)]
    for k in range(n):
        R.append(sum(math.comb(k, l) * gd[l + 1] * R[k - l] for l in range(k + 1)))
    base = np.where(inside, np.exp(-xs * xs / (1.0 - xs * xs)), 0.0)
    return [base * r for r in R]


@dataclass(frozen=True)
class BumpSpec:
    """``psi(x) = sum_i gamma_i x^i * e * rho(x)`` with ``psi^(k)(0) = [k == r]`` for ``k <= degree``."""

    degree: int
    r: int
    coeffs: tuple[Fraction, ...]

    def derivatives(self, x, n: int) -> list[np.ndarray]:
        """``psi^(l)(x)`` for ``l = 0..n``, by Leibniz on ``P(x) * rho~(x)``."""
        x = np.asarray(x, dtype=float)
        rho = _rho_derivs(x, n)
        poly = np.polynomial.Polynomial([float(c) for c in self.coeffs])
        pd = [poly.deriv(l)(x) if l <= self.degree else None for l in range(n + 1)]
        out = []
        for order in range(n + 1):
            acc = np.zeros_like(x)
            for l in range(min(order, self.degree) + 1):
                acc = acc + math.comb(order, l) * pd[l] * rho[order - l]
            out.append(acc)
        return out

    def __call__(self, x):
        if isinstance(x, float):
            if 1.0 - x * x <= _EDGE:
                return 0.0
            p = 0.0
            for c in reversed(self._floats):
                p = p * x + c
            return p * math.exp(-x * x / (1.0 - x * x))
        return self.derivatives(x, 0)[0]

    @cached_property
    def _floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coeffs)

    def derivative_at_zero(self, k: int) -> Fraction:
        """Exact ``psi^(k)(0)``."""
        R = _ratio_at_zero(k)
        return sum(
            (c * math.perm(k, i) * R[k - i] for i, c in enumerate(self.coeffs) if i <= k),
            Fraction(0),
        )


@lru_cache(maxsize=None)
def bump_psi(d: int, r: int) -> BumpSpec:
    """Solve the triangular system ``sum_i gamma_i k!/(k-i)! R_{k-i}(0) = [k == r]``, ``k <= d``."""
    if not 0 <= r <= d:
        raise ValueError("need 0 <= r <= d")
    R = _ratio_at_zero(d)
    gamma = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        rhs = Fraction(int(k == r)) - sum(gamma[i] * math.perm(k, i) * R[k - i] for i in range(k))
        gamma[k] = rhs / math.factorial(k)
    return BumpSpec(d, r, tuple(gamma))


@dataclass(frozen=True)
class BumpSpec2D:
    """``phi(x, y) = psi_{d,i}(x) * psi_{d,j}(y)``."""

    d: int
    i: int
    j: int

    @property
    def px(self) -> BumpSpec:
        return bump_psi(self.d, self.i)

    @property
    def py(self) -> BumpSpec:
        return bump_psi(self.d, self.j)

    def __call__(self, x, y) -> np.ndarray:
        return self.px(x) * self.py(y)

    def partial_at_origin(self, k: int, l: int) -> Fraction:
        return self.px.derivative_at_zero(k) * self.py.derivative_at_zero(l)

    def integral(self) -> float:
        return _bump_integral(self.d, self.i) * _bump_integral(self.d, self.j)


@lru_cache(maxsize=None)
def _bump_integral(d: int, r: int) -> float:
    psi = bump_psi(d, r)
    return integrate.quad(lambda x: float(psi(x)), -1, 1, epsabs=0, epsrel=1e-13, limit=200)[0]


# ---------------------------------------------------------------------------
# direct evaluation


def zeta_direct(f: Poly, phi: BumpSpec2D, s: float, tol: Tolerances = Tolerances()) -> float:
    """``∫∫_{[-1,1]^2} |f|^s phi`` by nested adaptive quadrature, for ``s > 0``.

    The inner integral in ``y`` is split at the real roots of ``f(x, .)``,
    where ``|f|^s`` has a cusp.
    """
    if not s > 0:
        raise ValueError("direct evaluation needs s > 0")
    px, py = phi.px, phi.py
    cy = [np.array([float(c) for c in p.coeffs], dtype=float) for p in f.coeffs_in_y()]
    epsrel = max(tol.rel_err, 1e-12)

    def inner(x: float) -> float:
        wx = float(px(x))
        if wx == 0.0:
            return 0.0
        coeffs = [np.polyval(c[::-1], x) if c.size else 0.0 for c in cy]
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        pts = []
        if len(coeffs) > 1:
            r = np.roots(coeffs[::-1])
            pts = sorted({float(z.real) for z in r if abs(z.imag) < 1e-9 and -1 < z.real < 1})

        def h(y):
            v = sum(c * y**q for q, c in enumerate(coeffs))
            return abs(v) ** s * float(py(y))

        val, err, *_ = integrate.quad(h, -1, 1, points=pts or None, epsabs=0, epsrel=epsrel, limit=400, full_output=1)
        return wx * val

    val, err, *rest = integrate.quad(inner, -1, 1, points=[0.0], epsabs=0, epsrel=epsrel, limit=400, full_output=1)
    if err > 1e3 * epsrel * max(abs(val), 1e-300):
        raise QuadratureFailure(f"direct zeta integral did not converge (error {err:.3g})")
    return val


# ---------------------------------------------------------------------------
# continuation


def _order(w: Weights) -> int:
    return w.m - w.a - w.b + 1


def _check_order(w: Weights, s: float, order: int | None) -> int:
    n = _order(w) if order is None else int(order)
    if n < 1 or not w.m * s + w.a + w.b + n > 0:
        raise ValueError(f"{n} integrations by parts do not reach s = {s}")
    return n


def _inner_factor(w: Weights, phi: BumpSpec2D, s: float, alpha: int, level: int, n: int):
    """``u -> (G_alpha(u), error)``: the ``t``-integral of the n-th derivative term."""
    table = [(i, j, k, float(c)) for (i, j, k), c in cijk_table(w.a, w.b, n).items()]
    max_i = max((i for i, _, _, _ in table), default=0)
    max_j = max((j for _, j, _, _ in table), default=0)
    tau, wt, wc = tanh_sinh_pair(level)
    power = w.m * s + w.a + w.b + n - 1
    px, py = phi.px, phi.py

    def G(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        T = np.minimum(1.0, np.power(np.abs(u), -1.0 / w.b, where=u != 0, out=np.full(u.shape, np.inf)))
        t = T[:, None] * tau[None, :]
        dx = px.derivatives(alpha * t**w.a, max_i)
        dy = py.derivatives(t**w.b * u[:, None], max_j)
        acc = np.zeros_like(t)
        for i, j, k, c in table:
            acc += c * alpha**i * u[:, None] ** j * t**k * dx[i] * dy[j]
        vals = t**power * acc
        fine, coarse = T * (vals @ wt), T * (vals @ wc)
        # the embedded coarse rule bounds the t-quadrature and cancellation error
        noise = T * (np.abs(vals) @ wt) * 64 * EPS
        return fine, np.abs(fine - coarse) + noise

    return G


def phi_plus_minus(
    f: Poly,
    w: Weights,
    phi: BumpSpec2D,
    s: float,
    tol: Tolerances = ORACLE_TOL,
    level: int = 7,
    order: int | None = None,
) -> tuple[IntegralResult, IntegralResult]:
    """``(Phi_+(s), Phi_-(s))`` for ``s > -1``.

    ``Phi_alpha(s) = ∫ |f(alpha,u)|^s G_alpha(u) du`` where ``G_alpha`` integrates
    ``t^(m(s+1))`` times the N-th ``t``-derivative of ``phi(alpha t^a, t^b u)``,
    ``N = m - a - b + 1``. ``t`` is capped at ``min(1, |u|^(-1/b))`` because
    ``phi`` vanishes off the unit square. For large ``|u|``, ``G`` decays like
    ``|u|^(-(ms+a+b)/b)`` times a smooth function of ``|u|^(-1/b)``.

    ``order`` replaces N by fewer integrations by parts ``n`` (power
    ``t^(ms+a+b+n-1)``), valid while ``ms + a + b + n > 0``. Each derivative of
    the bump costs digits, so small ``n`` is better conditioned.
    """
    s = float(s)
    if not s > -1:
        raise ValueError("continuation formula needs s > -1")
    n = _check_order(w, s, order)
    growth = -(w.m * s + w.a + w.b) / w.b
    out = []
    for alpha in (1, -1):
        G = _inner_factor(w, phi, s, alpha, level, n)
        out.append(
            abs_power_integral(
                restrict(f, alpha), s, G, growth=growth, tail_power=w.b, tol=tol, abs_tol=1e-15, max_evals=20_000
            )
        )
    return out[0], out[1]


def _pole_product(w: Weights, s: float, n: int, skip: int | None = None) -> float:
    return math.prod(w.m * s + k for k in range(w.a + w.b, w.a + w.b + n) if k != skip)


def zeta_continued(
    f: Poly, w: Weights, phi: BumpSpec2D, s, tol: Tolerances = ORACLE_TOL, order: int | None = None
) -> float:
    """``Z(s) = (-1)^N a / prod_{k=a+b}^{m} (ms + k) * (Phi_+ + Phi_-)``.

    With ``order = n`` the product runs over ``k < a + b + n`` instead.
    """
    return _zeta_with_error(f, w, phi, s, tol, order)[0]


def _zeta_with_error(f, w, phi, s, tol, order) -> tuple[float, float]:
    n = _check_order(w, float(s), order)
    ks = range(w.a + w.b, w.a + w.b + n)
    if isinstance(s, (int, Fraction)):
        if any(w.m * Fraction(s) + k == 0 for k in ks):
            raise EvaluationAtPole(f"s = {s} is a zero of the denominator")
    s = float(s)
    denom = _pole_product(w, s, n)
    if abs(denom) < 1e-13:
        raise EvaluationAtPole(f"s = {s} is too close to a zero of the denominator")
    plus, minus = phi_plus_minus(f, w, phi, s, tol, order=n)
    c = (-1) ** n * w.a / denom
    return c * (plus.value + minus.value), abs(c) * (plus.abs_error_estimate + minus.abs_error_estimate)


# ---------------------------------------------------------------------------
# residues


def _check_window(w: Weights, d: int) -> tuple[tuple[int, int], ...]:
    reps = representations(w, d) if w.a + w.b <= d < w.m else ()
    if not reps:
        raise ValueError(f"d = {d} is not a window numerator for weights {w}")
    return reps


def residue_closed_form(
    f: Poly, w: Weights, d: int, phi: BumpSpec2D, tol: Tolerances = Tolerances()
) -> float:
    """Residue of ``Z`` at ``s0 = -d/m`` from the representation sum.

    ``(Phi_+ + Phi_-)(s0) = (-1)^(m-d-1) (m-d)! sum c_ij0 d^(i+j)phi(0,0) I(i,j,s0)``;
    the factorial comes from integrating the power ``t^(m-d-1)`` by parts
    ``m - d`` times against the ``t``-derivatives. The vanishing factor ``ms+d``
    of the denominator contributes ``1/m``.
    """
    reps = _check_window(w, d)
    s0 = Fraction(-d, w.m)
    table = cijk_table(w.a, w.b, d - w.a - w.b)
    terms = []
    for i, j in reps:
        partial = phi.partial_at_origin(i, j)
        if partial == 0:
            continue
        c = table[(i, j, 0)]
        I = singular_integral(f, s0, i, j, tol).value
        terms.append(float(c * partial) * I)
    phi_sum = (-1) ** (w.m - d - 1) * math.factorial(w.m - d) * math.fsum(terms)
    prefactor = (-1) ** _order(w) * w.a / (w.m * _pole_product(w, float(s0), _order(w), skip=d))
    return prefactor * phi_sum


def residue_numeric_fit(
    f: Poly,
    w: Weights,
    d: int,
    phi: BumpSpec2D,
    tol: float = 1e-3,
    eps: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
    qtol: Tolerances = ORACLE_TOL,
) -> float:
    """Residue at ``-d/m`` from ``R(e) = e (Z(s0+e) - Z(s0-e)) / 2``.

    ``R(e) = R + O(e^2)`` because a constant term cancels, so successive halvings of
    ``e`` are Richardson-extrapolated in ``e^2``. ``FitUnstable`` is raised if the
    last two extrapolants differ by more than ``10 * tol`` relative to the
    larger of the result and ``e * |Z|`` at the samples, unless the gap is
    within the propagated quadrature error of the samples (a residue that is
    zero up to noise, e.g. when ``Z`` vanishes identically by parity).

    ``Z`` is sampled with ``d - a - b + 1`` integrations by parts, the fewest
    that reach ``s0 - e``; that keeps the bump derivatives small.
    """
    _check_window(w, d)
    if max(eps) >= 1 / w.m:
        raise ValueError("sample offsets must stay below 1/m, the spacing of the candidate poles")
    s0 = -d / w.m
    n = d - w.a - w.b + 1
    raw, zscale, noise = [], 0.0, 0.0
    for e in eps:
        zp, ep = _zeta_with_error(f, w, phi, s0 + e, qtol, n)
        zm, em = _zeta_with_error(f, w, phi, s0 - e, qtol, n)
        raw.append(e * (zp - zm) / 2)
        zscale = max(zscale, e * abs(zp), e * abs(zm))
        noise = max(noise, e * (ep + em) / 2)
    table = [raw]
    while len(table[-1]) > 1:
        prev = table[-1]
        level = len(table)
        nxt = []
        for k in range(len(prev) - 1):
            ratio = (eps[k] / eps[k + level]) ** 2
            nxt.append((ratio * prev[k + 1] - prev[k]) / (ratio - 1))
        table.append(nxt)
    best = table[-1][0]
    prev_best = table[-2][-1]
    # a vanishing residue is judged against e*|Z|, the size of the sampled terms
    scale = max(abs(best), zscale)
    # Richardson weights in e^2 with halving sum to less than 4 in absolute value
    if abs(best - prev_best) > max(10 * tol * scale, 8 * noise):
        raise FitUnstable(f"extrapolants {prev_best:.6g} and {best:.6g} disagree")
    return best
