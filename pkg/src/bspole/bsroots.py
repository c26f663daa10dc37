"""Roots of the Bernstein-Sato polynomial of a weighted homogeneous curve.

Roots in the open window (-1, 0) come from the numerical semigroup generated
by the weights; the full root set comes from the graded pieces of the Milnor
algebra, computed by exact linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyring import Poly, Weights, rank


@dataclass(frozen=True)
class CandidateRoot:
    """A root ``s0 = -d/m`` of b_f in (-1, 0) and every ``(j, k)`` with ``(j+1)a + (k+1)b = d``."""

    d: int
    m: int
    representations: tuple[tuple[int, int], ...]

    @property
    def s0(self) -> Fraction:
        return Fraction(-self.d, self.m)


def representations(w: Weights, d: int) -> tuple[tuple[int, int], ...]:
    out = []
    for j in range(d // w.a):
        rest = d - (j + 1) * w.a
        if rest >= w.b and rest % w.b == 0:
            out.append((j, rest // w.b - 1))
    return tuple(out)


def window_roots(w: Weights) -> list[CandidateRoot]:
    """All roots of b_f in (-1, 0), sorted by numerator ``d``."""
    out = []
    for d in range(w.a + w.b, w.m):
        reps = representations(w, d)
        if reps:
            out.append(CandidateRoot(d, w.m, reps))
    return out


def _monomials(w: Weights, t: int) -> list[tuple[int, int]]:
    if t < 0:
        return []
    return [(p, (t - p * w.a) // w.b) for p in range(t // w.a + 1) if (t - p * w.a) % w.b == 0]


def milnor_graded_dim(f: Poly, w: Weights, t: int) -> int:
    """Dimension of the weighted-degree-``t`` piece of ``Q[x, y] / (f_x, f_y)``."""
    basis = _monomials(w, t)
    if not basis:
        return 0
    col = {e: i for i, e in enumerate(basis)}
    rows = []
    for g, deg in ((f.diff_x(), w.m - w.a), (f.diff_y(), w.m - w.b)):
        if g.is_zero():
            continue
        for p, q in _monomials(w, t - deg):
            row = [Fraction(0)] * len(basis)
            for (gp, gq), c in g.terms.items():
                row[col[(gp + p, gq + q)]] += c
            rows.append(row)
    return len(basis) - rank(rows)


def socle_degree(w: Weights) -> int:
    return 2 * (w.m - w.a - w.b)


def graded_dims(f: Poly, w: Weights) -> dict[int, int]:
    """Nonzero graded dimensions of the Milnor algebra.

    Raises ``RuntimeError`` if the algebra does not vanish just above the socle
    degree, which means the input slipped past the singularity check.
    """
    top = socle_degree(w)
    dims = {t: milnor_graded_dim(f, w, t) for t in range(top + 1)}
    for t in range(top + 1, top + max(w.a, w.b) + 1):
        if milnor_graded_dim(f, w, t):
            raise RuntimeError(f"Milnor algebra of {f} is nonzero in degree {t} > {top}")
    return {t: n for t, n in dims.items() if n}


def milnor_number(f: Poly, w: Weights) -> int:
    return sum(graded_dims(f, w).values())


def full_bs_roots(f: Poly, w: Weights) -> list[Fraction]:
    """Root set of b_f, ascending: -1 and ``-(t + a + b)/m`` for each nonzero graded piece."""
    roots = {Fraction(-1)}
    for t in graded_dims(f, w):
        roots.add(Fraction(-(t + w.a + w.b), w.m))
    return sorted(roots)


def eigenvalue_report(f: Poly, w: Weights, verdicts: Sequence) -> list[dict]:
    """Compare the largest b_f root with the largest pole per monodromy eigenvalue.

    Roots are grouped by their class modulo 1, i.e. by ``exp(2 pi i s)``;
    the trivial class (integer roots) is skipped. ``verdicts`` are
    :class:`~bspole.polecriterion.PoleVerdict` objects for the window roots.
    Classes with a window root are reported as case 1 (it is a pole) or case 2
    (it is not, so the largest pole lies below -1). Classes whose largest root
    is below -1 are case 3, which this package does not resolve.
    """
    full_roots = full_bs_roots(f, w)
    by_class: dict[Fraction, list] = {}
    for v in verdicts:
        by_class.setdefault(v.root.s0 % 1, []).append(v)
    out = []
    classes = {r % 1 for r in full_roots if r % 1 != 0} | set(by_class)
    for cls in sorted(classes):
        in_window = sorted(by_class.get(cls, []), key=lambda v: v.root.s0, reverse=True)
        below = [r for r in full_roots if r % 1 == cls and r < -1]
        entry = {"class": str(cls), "eigenvalue": f"exp(2*pi*i*{cls})"}
        if in_window:
            top = in_window[0]
            entry["alpha1"] = str(top.root.s0)
            entry["status"] = top.status.value
            if top.status.value == "Pole":
                entry.update(case=1, pole=True, alpha2=str(top.root.s0))
            elif top.status.value in ("NotPoleSymmetry", "NotPoleNumeric"):
                entry.update(case=2, pole=False, alpha2="unknown below window")
            else:
                entry.update(case=None, pole=None, alpha2="unknown")
        else:
            entry["alpha1"] = str(max(below))
            entry["status"] = "undecidable"
            entry.update(case=3, pole=None, alpha2="unknown below window")
        out.append(entry)
    return out
