"""Pole decisions for the roots of b_f in (-1, 0).

``s0 = -d/m`` is a pole of the zeta function iff the criterion integral
``∫ (|f(1,u)|^s0 + (-1)^j |f(-1,u)|^s0) u^k du`` is nonzero for at least one
representation ``(j+1)a + (k+1)b = d``. Each representation is settled by the
first applicable rule: an exact parity identity, a positivity certificate, or
quadrature with an explicit gray zone.
"""
from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bsroots import CandidateRoot
from .polyring import Poly, Weights
from .quadrature import (
    IntegralResult,
    QuadratureFailure,
    Tolerances,
    convergence_precheck,
    singular_integral,
)

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SymmetryClass:
    even_x: bool
    odd_x: bool
    even_y: bool
    odd_y: bool
    even_xy: bool
    odd_xy: bool

    def flags(self) -> list[str]:
        return [name for name in ("even_x", "odd_x", "even_y", "odd_y", "even_xy", "odd_xy") if getattr(self, name)]


def symmetry_class(f: Poly) -> SymmetryClass:
    if f.is_zero():
        raise ValueError("symmetry class of the zero polynomial is undefined")
    ps = [p for p, _ in f.support()]
    qs = [q for _, q in f.support()]
    ts = [p + q for p, q in f.support()]
    return SymmetryClass(
        even_x=all(p % 2 == 0 for p in ps),
        odd_x=all(p % 2 == 1 for p in ps),
        even_y=all(q % 2 == 0 for q in qs),
        odd_y=all(q % 2 == 1 for q in qs),
        even_xy=all(t % 2 == 0 for t in ts),
        odd_xy=all(t % 2 == 1 for t in ts),
    )


def symmetry_rule(sym: SymmetryClass, j: int, k: int) -> str | None:
    """Name of the first parity rule that kills the integrand, if any."""
    if (sym.even_x or sym.odd_x) and j % 2:
        return "even_x" if sym.even_x else "odd_x"
    if (sym.even_y or sym.odd_y) and k % 2:
        return "even_y" if sym.even_y else "odd_y"
    if (sym.even_xy or sym.odd_xy) and (j + k) % 2:
        return "even_xy" if sym.even_xy else "odd_xy"
    return None


def vanishes_by_symmetry(sym: SymmetryClass, j: int, k: int) -> bool:
    return symmetry_rule(sym, j, k) is not None


@dataclass(frozen=True)
class NonZeroCertificate:
    """Both terms are ``|.|^s0 u^k >= 0`` with ``j, k`` even and not a.e. zero."""

    j: int
    k: int
    reason: str = "j and k even: integrand is a nonnegative sum of absolute powers"


def positivity_shortcut(f: Poly, sym: SymmetryClass, j: int, k: int) -> NonZeroCertificate | None:
    if j % 2 == 0 and k % 2 == 0:
        return NonZeroCertificate(j, k)
    return None


class Status(enum.Enum):
    POLE = "Pole"
    NOT_POLE_SYMMETRY = "NotPoleSymmetry"
    NOT_POLE_NUMERIC = "NotPoleNumeric"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Evidence:
    """How one representation ``(j, k)`` was settled.

    ``kind`` is ``symmetry``, ``positivity``, ``quadrature`` or ``failure``;
    ``outcome`` is ``zero``, ``nonzero`` or ``gray``.
    """

    j: int
    k: int
    kind: str
    outcome: str
    rule: str | None = None
    integral: IntegralResult | None = None
    threshold: float | None = None
    message: str | None = None


@dataclass(frozen=True)
class PoleVerdict:
    root: CandidateRoot
    status: Status
    evidence: tuple[Evidence, ...]


def zero_test(result: IntegralResult, cfg: Tolerances) -> tuple[str, float]:
    """``(outcome, threshold)`` for a quadrature value.

    ``threshold = max(zero_abs, zero_rel * l1_mass)``. Zero needs the value
    below the threshold and within ten times its noise; nonzero needs it at
    least ten times both. Shrinking the threshold therefore never turns a zero
    into a nonzero.
    """
    v = abs(result.value)
    thr = max(cfg.zero_abs, cfg.zero_rel * result.l1_mass)
    noise = max(result.abs_error_estimate, 64 * EPS * result.l1_mass)
    if v < thr and v <= 10 * noise:
        return "zero", thr
    if v >= 10 * thr and v > 10 * noise:
        return "nonzero", thr
    return "gray", thr


def _evidence_for(f: Poly, w: Weights, c: CandidateRoot, sym: SymmetryClass, j: int, k: int, cfg: Tolerances) -> Evidence:
    rule = symmetry_rule(sym, j, k)
    if rule is not None:
        return Evidence(j, k, "symmetry", "zero", rule=rule)
    cert = positivity_shortcut(f, sym, j, k)
    if cert is not None:
        return Evidence(j, k, "positivity", "nonzero", message=cert.reason)
    convergence_precheck(f, w, c.s0, k)
    try:
        res = singular_integral(f, c.s0, j, k, cfg)
    except QuadratureFailure as exc:
        return Evidence(j, k, "failure", "gray", message=str(exc))
    outcome, thr = zero_test(res, cfg)
    return Evidence(j, k, "quadrature", outcome, integral=res, threshold=thr)


def _status(evidence: Sequence[Evidence]) -> Status:
    if all(e.kind == "symmetry" for e in evidence):
        return Status.NOT_POLE_SYMMETRY
    if any(e.outcome == "nonzero" for e in evidence):
        return Status.POLE
    if all(e.outcome == "zero" for e in evidence):
        return Status.NOT_POLE_NUMERIC
    return Status.INDETERMINATE


def classify_root(f: Poly, w: Weights, c: CandidateRoot, cfg: Tolerances = Tolerances()) -> PoleVerdict:
    """Settle every representation of ``c`` and combine them.

    Pole if some representation is nonzero, NotPoleSymmetry if all vanish by
    parity, NotPoleNumeric if the rest are numerically zero, else Indeterminate.
    """
    sym = symmetry_class(f)
    evidence = tuple(_evidence_for(f, w, c, sym, j, k, cfg) for j, k in sorted(c.representations))
    return PoleVerdict(c, _status(evidence), evidence)


def thread_count(default: int | None = None) -> int:
    """Worker cap from ``BSPOLE_THREADS``; at least 1."""
    raw = os.environ.get("BSPOLE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"BSPOLE_THREADS must be an integer, got {raw!r}") from None
    return default or min(8, os.cpu_count() or 1)


def classify_roots(
    f: Poly, w: Weights, roots: Sequence[CandidateRoot], cfg: Tolerances = Tolerances(), threads: int | None = None
) -> list[PoleVerdict]:
    """``classify_root`` over many roots; results keep the input order."""
    n = threads or thread_count()
    if n <= 1 or len(roots) <= 1:
        return [classify_root(f, w, c, cfg) for c in roots]
    with ThreadPoolExecutor(max_workers=min(n, len(roots))) as pool:
        return list(pool.map(lambda c: classify_root(f, w, c, cfg), roots))
