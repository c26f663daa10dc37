"""Coefficients of the higher chain rule along a weighted curve.

For ``g(t) = phi(alpha * t**a, t**b * u)`` the N-th derivative expands as::

    g^(N)(t) = sum c[i, j, k] * alpha**i * u**j * t**k * (d^(i+j) phi / dx^i dy^j)(alpha t^a, t^b u)

over ``i + j <= N``, ``k >= 0`` and ``i*a + j*b = N + k``. The coefficients
are positive integers that depend only on ``(a, b)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

Index = tuple[int, int, int]


class OrderTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class CijkTable:
    a: int
    b: int
    N: int
    entries: Mapping[Index, int] = field(repr=False)

    def __getitem__(self, key: Index) -> int:
        return self.entries.get(key, 0)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def k_zero(self) -> dict[tuple[int, int], int]:
        """Entries with ``k == 0``, keyed by ``(i, j)``."""
        return {(i, j): c for (i, j, k), c in self.entries.items() if k == 0}


def _admissible(a: int, b: int, N: int):
    for i in range(N + 1):
        for j in range(N + 1 - i):
            k = i * a + j * b - N
            if k >= 0:
                yield i, j, k


@lru_cache(maxsize=None)
def _levels(a: int, b: int, N: int) -> tuple[Mapping[Index, int], ...]:
    if N == 0:
        return (MappingProxyType({(0, 0, 0): 1}),)
    prev_levels = _levels(a, b, N - 1)
    prev = prev_levels[-1]
    cur = {}
    for i, j, k in _admissible(a, b, N):
        c = (k + 1) * prev.get((i, j, k + 1), 0)
        if i >= 1:
            c += a * prev.get((i - 1, j, k - a + 1), 0)
        if j >= 1:
            c += b * prev.get((i, j - 1, k - b + 1), 0)
        if c:
            cur[(i, j, k)] = c
    return prev_levels + (MappingProxyType(dict(sorted(cur.items()))),)


def cijk_table(a: int, b: int, N: int) -> CijkTable:
    """Coefficient table for the N-th derivative, built level by level from ``c[0,0,0] = 1``.

    The term ``(i, j, k + 1)`` of level ``N - 1`` contributes ``(k + 1) * c`` through
    the derivative of ``t**(k+1)``; the other two predecessors come from
    differentiating the x- and y-arguments of ``phi``. Tables are memoized per
    ``(a, b)`` so higher orders reuse the lower levels.
    """
    if a <= 0 or b <= 0 or N < 0:
        raise ValueError("need positive weights and a nonnegative order")
    return CijkTable(a, b, N, _levels(a, b, N)[N])


def symbolic_oracle(a: int, b: int, N: int) -> CijkTable:
    """Same table by brute-force formal differentiation, without the recurrence.

    A term is ``(alpha_pow, u_pow, t_pow, dx, dy) -> coefficient``; one
    derivative in ``t`` applies the product rule to the monomial and the chain
    rule to ``phi``'s partial. Like terms are collected after each step.
    """
    if N > 12:
        raise OrderTooLarge(f"symbolic oracle is limited to N <= 12, got {N}")
    terms = {(0, 0, 0, 0, 0): 1}
    for _ in range(N):
        nxt: dict[tuple[int, int, int, int, int], int] = {}
        for (ap, up, tp, dx, dy), c in terms.items():
            if tp:
                key = (ap, up, tp - 1, dx, dy)
                nxt[key] = nxt.get(key, 0) + c * tp
            # d/dt of phi_{dx,dy}(alpha t^a, t^b u)
            key = (ap + 1, up, tp + a - 1, dx + 1, dy)
            nxt[key] = nxt.get(key, 0) + c * a
            key = (ap, up + 1, tp + b - 1, dx, dy + 1)
            nxt[key] = nxt.get(key, 0) + c * b
        terms = {k: v for k, v in nxt.items() if v}
    entries = {}
    for (ap, up, tp, dx, dy), c in terms.items():
        if ap != dx or up != dy:
            raise AssertionError("alpha/u powers must track the derivative multi-index")
        entries[(dx, dy, tp)] = entries.get((dx, dy, tp), 0) + c
    return CijkTable(a, b, N, MappingProxyType(dict(sorted(entries.items()))))
