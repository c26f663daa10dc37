"""Quadrature for integrals of ``|g(u)|**s * F(u)`` over the real line.

``g`` is a squarefree rational polynomial, so ``|g|**s`` has algebraic
singularities of known exponent ``s`` at its simple real roots. The line is
split at the isolated roots, at midpoints between them and at ``+-L``. Segments
touching a root use Gauss-Jacobi rules carrying the exact ``|u - r|**s``
weight. Root-free segments use Gauss-Legendre with node doubling and
bisection. The two tails are mapped onto a finite interval by
``u = +-w**(-p)``, which leaves an algebraic endpoint singularity at ``w = 0``
that is again absorbed by a Gauss-Jacobi weight.

Error estimates compare each segment rule with the rule at half the nodes.
This is an empirical estimate, not a certified bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .polyring import (
    Poly,
    RootInterval,
    UniPoly,
    Weights,
    isolate_real_roots,
    restrict,
)

EPS = np.finfo(float).eps
_MAX_DEPTH = 24


class QuadratureFailure(RuntimeError):
    pass


class DivergentTail(ValueError):
    pass


class StructuralInvariantViolated(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    rel_err: float = 1e-11
    zero_abs: float = 1e-9
    zero_rel: float = 1e-7
    root_width: Fraction = Fraction(1, 10**30)

    def __post_init__(self):
        for name in ("rel_err", "zero_abs", "zero_rel", "root_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name} must be positive")


@dataclass(frozen=True)
class SegmentInfo:
    lo: float
    hi: float
    method: str  # "gauss-jacobi", "adaptive" or "tail-transform"
    nodes: int
    value: float
    error: float


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abs_error_estimate: float
    l1_mass: float
    segments: tuple[SegmentInfo, ...] = field(default=(), repr=False)

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            math.fsum([self.value, other.value]),
            self.abs_error_estimate + other.abs_error_estimate,
            self.l1_mass + other.l1_mass,
            self.segments + other.segments,
        )

    def scaled(self, c: float) -> "IntegralResult":
        return IntegralResult(c * self.value, abs(c) * self.abs_error_estimate, abs(c) * self.l1_mass, self.segments)


# ---------------------------------------------------------------------------
# rules


def _jacobi_recurrence(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal three-term coefficients for ``(1 + t)**beta``: ``n + 1`` diagonal, ``n`` off-diagonal."""
    k = np.arange(n + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = beta**2 / ((2 * k + beta) * (2 * k + beta + 2))
    diag[0] = beta / (beta + 2)
    k1 = np.arange(1, n + 1, dtype=float)
    off = np.sqrt(
        4 * k1 * k1 * (k1 + beta) ** 2
        / ((2 * k1 + beta) ** 2 * (2 * k1 + beta + 1) * (2 * k1 + beta - 1))
    )
    return diag, off


@lru_cache(maxsize=512)
def _gauss_jacobi(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    # Golub-Welsch nodes, one Newton step on the orthonormal recurrence, then
    # Christoffel weights 1/sum p_k(x)^2. The sum has no cancellation, unlike
    # eigenvector components, which lose digits at the heavy node near t = -1.
    diag, off = _jacobi_recurrence(n, beta)
    x = eigh_tridiagonal(diag[:n], off[: n - 1], eigvals_only=True) if n > 1 else diag[:1].copy()
    # polish and sum in extended precision where the platform has it
    ld = np.longdouble
    diag, off, x = diag.astype(ld), off.astype(ld), x.astype(ld)
    p_prev, p = np.zeros(n, ld), np.ones(n, ld)
    dp_prev, dp = np.zeros(n, ld), np.zeros(n, ld)
    acc = np.ones(n, ld)
    for j in range(n):
        back = off[j - 1] if j else 0.0
        p_next = ((x - diag[j]) * p - back * p_prev) / off[j]
        dp_next = (p + (x - diag[j]) * dp - back * dp_prev) / off[j]
        p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
    x = x - p / dp
    p_prev, p = np.zeros(n, ld), np.ones(n, ld)
    for j in range(n - 1):
        back = off[j - 1] if j else 0.0
        p_prev, p = p, ((x - diag[j]) * p - back * p_prev) / off[j]
        acc += p * p
    w = (2.0 ** (beta + 1) / (beta + 1) / acc).astype(float)
    x = x.astype(float)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi_rule(exponent: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``n``-point Gauss rule on [-1, 1] for the weight ``(1 + t)**exponent``.

    Exact for polynomials of degree ``2n - 1``. Nodes are eigenvalues of the
    Jacobi matrix polished by one Newton step; weights are Christoffel numbers.
    """
    if not exponent > -1:
        raise ValueError(f"exponent must exceed -1, got {exponent}")
    if n < 1:
        raise ValueError("need at least one node")
    return _gauss_jacobi(int(n), float(exponent))


@lru_cache(maxsize=16)
def tanh_sinh_rule(level: int = 6, cutoff: float = 3.5) -> tuple[np.ndarray, np.ndarray]:
    """Double-exponential rule on [0, 1] with step ``2**-level``.

    Nodes are returned with their distance to the nearer endpoint so callers
    can evaluate near-endpoint factors without cancellation.
    """
    h = 2.0**-level
    k = np.arange(-int(cutoff / h), int(cutoff / h) + 1)
    t = k * h
    s = 0.5 * math.pi * np.sinh(t)
    # node = (1 + tanh(s)) / 2, written to avoid cancellation near 0
    x = 1.0 / (1.0 + np.exp(-2.0 * s))
    w = h * 0.5 * math.pi * np.cosh(t) / (2.0 * np.cosh(s) ** 2)
    keep = (x > 0) & (x < 1) & (w > 0)
    return x[keep], w[keep]


def tanh_sinh_pair(level: int = 6, cutoff: float = 3.5) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(x, w, w_coarse)``: the level rule plus the embedded rule one level down.

    The coarse rule uses every other node with doubled weight, so both
    estimates come from the same evaluations.
    """
    h = 2.0**-level
    k = np.arange(-int(cutoff / h), int(cutoff / h) + 1)
    x, w = tanh_sinh_rule(level, cutoff)
    t = k * h
    s = 0.5 * math.pi * np.sinh(t)
    xx = 1.0 / (1.0 + np.exp(-2.0 * s))
    ww = h * 0.5 * math.pi * np.cosh(t) / (2.0 * np.cosh(s) ** 2)
    keep = (xx > 0) & (xx < 1) & (ww > 0)
    coarse = np.where(k[keep] % 2 == 0, 2.0 * w, 0.0)
    return x, w, coarse


# ---------------------------------------------------------------------------
# segment integration


def _segment_rule(lo: float, hi: float, sing: str | None, exponent: float, n: int):
    t, wt = gauss_jacobi_rule(exponent if sing else 0.0, n)
    half = 0.5 * (hi - lo)
    if sing == "hi":
        z = hi - half * (1.0 + t)
    else:
        z = lo + half * (1.0 + t)
    scale = half ** (1.0 + exponent) if sing else half
    return z, wt * scale


def _split(out):
    """Factor output as ``(values, abs_errors or None)``."""
    return out if isinstance(out, tuple) else (out, None)


def _times(c, out):
    v, e = _split(out)
    return c * v, None if e is None else np.abs(c) * e


def _integrate_segment(func, lo, hi, sing, exponent, *, rel, abs_tol, n0, max_nodes, budget, depth=0):
    """Integrate ``|z - z_sing|**exponent * func(z)`` over ``[lo, hi]``.

    Node counts double up to ``max_nodes``, then the segment is bisected; the
    half that keeps the singular end keeps the Jacobi weight. ``budget`` is a
    one-element list of remaining function evaluations shared by the whole
    integral, so a noise-limited integrand stops refining instead of recursing
    without end. Returns ``(value, error, mass, nodes_used)``.

    ``func`` may return ``(values, abs_errors)``; the integrated value error
    is added to the reported error but does not drive refinement, since more
    outer nodes cannot reduce it.
    """
    n = n0
    z, w = _segment_rule(lo, hi, sing, exponent, n // 2)
    prev = math.fsum(w * _split(func(z))[0])
    budget[0] -= n // 2
    while True:
        z, w = _segment_rule(lo, hi, sing, exponent, n)
        fv, fe = _split(func(z))
        vals = w * fv
        budget[0] -= n
        q = math.fsum(vals)
        mass = math.fsum(np.abs(vals))
        err = abs(q - prev) + 16 * EPS * mass
        ferr = 0.0 if fe is None else math.fsum(np.abs(w) * fe)
        if err <= rel * mass + abs_tol:
            return q, err + ferr, mass, n
        if n >= max_nodes:
            break
        prev = q
        n *= 2
    if depth >= _MAX_DEPTH or budget[0] <= 0:
        return q, err + ferr, mass, n
    mid = 0.5 * (lo + hi)
    if sing == "lo":
        parts = [(lo, mid, "lo"), (mid, hi, None)]
    elif sing == "hi":
        parts = [(lo, mid, None), (mid, hi, "hi")]
    else:
        parts = [(lo, mid, None), (mid, hi, None)]
    vals, err, mass, used = [], 0.0, 0.0, 0
    for a, b, sg in parts:
        v, e, m, k = _integrate_segment(
            func, a, b, sg, exponent,
            rel=rel, abs_tol=0.5 * abs_tol, n0=n0, max_nodes=max_nodes, budget=budget, depth=depth + 1,
        )
        vals.append(v)
        err += e
        mass += m
        used += k
    return math.fsum(vals), err, mass, used


def _root_anchor(r: RootInterval) -> Fraction:
    return r.lo if r.exact else r.mid


def abs_power_integral(
    g: UniPoly,
    s: float,
    factor: Callable[[np.ndarray], np.ndarray] | None = None,
    *,
    growth: float = 0.0,
    tail_power: int = 1,
    lo: float = -math.inf,
    hi: float = math.inf,
    tol: Tolerances = Tolerances(),
    base_nodes: int = 16,
    max_nodes: int = 256,
    max_evals: int = 200_000,
    abs_tol: float = 0.0,
    roots: list[RootInterval] | None = None,
    split_at_zero: bool = True,
) -> IntegralResult:
    """Integrate ``|g(u)|**s * factor(u)`` over ``[lo, hi]``.

    ``factor`` must be smooth on the real line (vectorized, default 1). It
    may return ``(values, abs_errors)`` when it is itself computed
    approximately; the error is integrated into ``abs_error_estimate``. For
    an infinite end it must behave like ``|u|**growth`` times a function that
    is smooth in ``w = |u|**(-1/tail_power)`` near ``w = 0``; e.g. a monomial
    ``u**k`` has ``growth = k`` with ``tail_power = 1``.

    ``l1_mass`` is the quadrature of ``|integrand|``, which is the scale the
    zero tests in :mod:`bspole.polecriterion` compare against.
    """
    if g.is_zero():
        raise ValueError("integrand is |0|**s")
    s = float(s)
    if not s > -1:
        raise ValueError("need s > -1 for local integrability at simple roots")
    if factor is None:
        factor = np.ones_like
    if roots is None:
        roots = isolate_real_roots(g, tol.root_width) if g.degree > 0 else []
    anchors = [_root_anchor(r) for r in roots]
    infinite_lo, infinite_hi = math.isinf(lo), math.isinf(hi)
    L = None
    if infinite_lo or infinite_hi:
        L = math.ceil(2 * (1 + max((abs(a) for a in anchors), default=Fraction(0))))
    left = Fraction(-L) if infinite_lo else Fraction(lo)
    right = Fraction(L) if infinite_hi else Fraction(hi)
    if not left < right:
        raise ValueError("empty integration range")
    inside = [a for a in anchors if left <= a <= right]
    points = {left, right, *inside}
    for a, b in zip(anchors, anchors[1:]):
        mid = (a + b) / 2
        if left < mid < right:
            points.add(mid)
    if split_at_zero and left < 0 < right:
        points.add(Fraction(0))
    points = sorted(points)
    anchor_set = set(inside)
    quotients = {a: g.deflate(a) for a in inside}

    rel = tol.rel_err
    budget = [max_evals]
    values, errors, masses, infos = [], [], [], []

    def record(v, e, m, info):
        values.append(v)
        errors.append(e)
        masses.append(m)
        infos.append(info)

    for p, q in zip(points, points[1:]):
        if p in anchor_set or q in anchor_set:
            sing = "lo" if p in anchor_set else "hi"
            root = p if sing == "lo" else q
            h = quotients[root]
            fn = lambda u, h=h: _times(np.abs(h(u)) ** s, factor(u))
            v, e, m, n = _integrate_segment(
                fn, float(p), float(q), sing, s, rel=rel, abs_tol=abs_tol, n0=base_nodes, max_nodes=max_nodes, budget=budget
            )
            record(v, e, m, SegmentInfo(float(p), float(q), "gauss-jacobi", n, v, e))
        else:
            fn = lambda u: _times(np.abs(g(u)) ** s, factor(u))
            v, e, m, n = _integrate_segment(
                fn, float(p), float(q), None, 0.0, rel=rel, abs_tol=abs_tol, n0=base_nodes, max_nodes=max_nodes, budget=budget
            )
            record(v, e, m, SegmentInfo(float(p), float(q), "adaptive", n, v, e))

    if L is not None:
        D = g.degree
        pw = int(tail_power)
        lam = -pw * (growth + D * s + 1) - 1
        if not lam > -1:
            raise DivergentTail(f"integrand decays like |u|^{growth + D * s:.6g}, not integrable at infinity")
        W = float(L) ** (-1.0 / pw)
        mu = -pw * growth
        for side, active in ((1, infinite_hi), (-1, infinite_lo)):
            if not active:
                continue
            rev = (g if side == 1 else g.compose_neg()).reversed()

            def fn(wv, rev=rev, side=side):
                u = side * wv ** (-pw)
                return _times(pw * np.abs(rev(wv**pw)) ** s * wv ** (-mu), factor(u))

            v, e, m, n = _integrate_segment(
                fn, 0.0, W, "lo", lam, rel=rel, abs_tol=abs_tol, n0=base_nodes, max_nodes=max_nodes, budget=budget
            )
            span = (float(L), math.inf) if side == 1 else (-math.inf, -float(L))
            record(v, e, m, SegmentInfo(span[0], span[1], "tail-transform", n, v, e))

    order = sorted(range(len(infos)), key=lambda i: infos[i].lo)
    value = math.fsum(values)
    err = math.fsum(errors)
    mass = math.fsum(masses)
    target = rel * mass + abs_tol
    if not np.isfinite(value) or err > 10 * max(target, 16 * EPS * mass):
        raise QuadratureFailure(f"error estimate {err:.3g} exceeds 10x target {target:.3g}")
    return IntegralResult(value, err, mass, tuple(infos[i] for i in order))


# ---------------------------------------------------------------------------
# criterion integral


def convergence_precheck(f: Poly, w: Weights, s0: Fraction, k: int) -> int:
    """Check integrability of the criterion integral; returns the tail degree ``D``.

    ``D`` is the common degree of ``f(+-1, u)``. The weighted degree forces
    ``m - b*D`` to be ``0`` or ``a``; anything else means ``x**2`` divides
    ``f``. Integrability at infinity needs ``k + D*s0 < -1``.
    """
    s0 = Fraction(s0)
    gp, gm = restrict(f, 1), restrict(f, -1)
    D = max(gp.degree, gm.degree)
    if w.m - w.b * D not in (0, w.a):
        raise StructuralInvariantViolated(f"m - b*D = {w.m - w.b * D} is neither 0 nor a = {w.a}")
    if not gp.is_squarefree() or not gm.is_squarefree():
        raise StructuralInvariantViolated("f(1,u) or f(-1,u) has a multiple root")
    if not k + D * s0 < -1:
        raise DivergentTail(f"k + D*s0 = {k + D * s0} >= -1: criterion integral diverges")
    return D


def criterion_terms(
    f: Poly, s0, k: int, tol: Tolerances = Tolerances(), base_nodes: int = 16
) -> tuple[IntegralResult, IntegralResult]:
    """``(∫|f(1,u)|^s0 u^k du, ∫|f(-1,u)|^s0 u^k du)`` as separate results."""
    s = float(s0)
    mono = (lambda u: u**k) if k else None
    out = []
    for sign in (1, -1):
        g = restrict(f, sign)
        out.append(abs_power_integral(g, s, mono, growth=k, tol=tol, base_nodes=base_nodes))
    return out[0], out[1]


def singular_integral(
    f: Poly, s0, j: int, k: int, tol: Tolerances = Tolerances(), base_nodes: int = 16
) -> IntegralResult:
    """The criterion integral ``∫ (|f(1,u)|^s0 + (-1)^j |f(-1,u)|^s0) u^k du``.

    ``l1_mass`` is the sum of the masses of the two terms, an upper bound for
    the L1 norm of the combined integrand that does not shrink when the two
    terms cancel.
    """
    plus, minus = criterion_terms(f, s0, k, tol, base_nodes)
    return plus + minus.scaled(-1.0 if j % 2 else 1.0)
