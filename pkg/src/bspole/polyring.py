"""Exact bivariate polynomials over the rationals.

Provides the sparse :class:`Poly` type with a small text parser, weight-type
inference for weighted homogeneous polynomials, the isolated-singularity
certificate used to admit an input, dense univariate polynomials and
Sturm-sequence real root isolation.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, int]


class PolyError(ValueError):
    """Base class for rejected polynomial input."""


class PolySyntaxError(PolyError):
    """``position`` is the 0-based character offset. ``token_index`` is the
    1-based index of the whitespace-separated token holding the error, or the
    token the input ends in; ``lexeme_index`` counts lexical tokens.
    """

    def __init__(self, message: str, text: str, position: int, lexeme_index: int):
        token_index = len(text[:position].split()) + (0 if position and not text[position - 1].isspace() else 1)
        super().__init__(f"{message} (char {position}, token {token_index})")
        self.position = position
        self.token_index = token_index
        self.lexeme_index = lexeme_index


class NotWeightedHomogeneous(PolyError):
    pass


class AmbiguousWeights(PolyError):
    pass


class NonIsolatedSingularity(PolyError):
    def __init__(self, message: str, certificate: object = None):
        super().__init__(message)
        self.certificate = certificate


class SmoothAtOrigin(PolyError):
    pass


class ZeroPolynomial(PolyError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Poly:
    """Sparse polynomial in ``x`` and ``y`` with :class:`Fraction` coefficients.

    ``terms`` maps exponent pairs ``(p, q)`` (for ``x**p * y**q``) to nonzero
    coefficients. Instances are immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | Iterable[tuple[Exponent, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for (p, q), c in items:
            p, q = int(p), int(q)
            if p < 0 or q < 0:
                raise ValueError("exponents must be nonnegative")
            acc[(p, q)] = acc.get((p, q), Fraction(0)) + _frac(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @classmethod
    def monomial(cls, p: int, q: int, c=1) -> "Poly":
        return cls({(p, q): c})

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(0, 0): c})

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (p, q), c in sorted(self._terms.items(), key=lambda t: (-t[0][0] - t[0][1], -t[0][0])):
            mono = []
            if p:
                mono.append("x" if p == 1 else f"x^{p}")
            if q:
                mono.append("y" if q == 1 else f"y^{q}")
            mag = abs(c)
            if mono:
                body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.constant(_frac(other))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return Poly(acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        acc: dict[Exponent, Fraction] = {}
        for (p1, q1), c1 in self._terms.items():
            for (p2, q2), c2 in other._terms.items():
                e = (p1 + p2, q1 + q2)
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return Poly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "Poly":
        c = _frac(c)
        return Poly({e: c * v for e, v in self._terms.items()})

    def diff_x(self) -> "Poly":
        return Poly({(p - 1, q): p * c for (p, q), c in self._terms.items() if p > 0})

    def diff_y(self) -> "Poly":
        return Poly({(p, q - 1): q * c for (p, q), c in self._terms.items() if q > 0})

    def __call__(self, x, y):
        """Evaluate exactly for rational arguments, or in floating point otherwise."""
        if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
            return sum((c * Fraction(x) ** p * Fraction(y) ** q for (p, q), c in self._terms.items()), Fraction(0))
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (p, q), c in self._terms.items():
            out = out + float(c) * x**p * y**q
        return out

    def degree_x(self) -> int:
        return max((p for p, _ in self._terms), default=-1)

    def degree_y(self) -> int:
        return max((q for _, q in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((p + q for p, q in self._terms), default=-1)

    def coeffs_in_y(self) -> list["UniPoly"]:
        """Coefficients of ``y**q`` as univariate polynomials in ``x``."""
        out = [dict() for _ in range(self.degree_y() + 1)]
        for (p, q), c in self._terms.items():
            out[q][p] = c
        return [UniPoly.from_dict(d) for d in out]

    def coeffs_in_x(self) -> list["UniPoly"]:
        out = [dict() for _ in range(self.degree_x() + 1)]
        for (p, q), c in self._terms.items():
            out[p][q] = c
        return [UniPoly.from_dict(d) for d in out]

    def swap(self) -> "Poly":
        return Poly({(q, p): c for (p, q), c in self._terms.items()})


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<dec>\d*\.\d+|\d+\.\d*|\d+[eE][-+]?\d+)"
    r"|(?P<rat>\d+\s*/\s*\d+)|(?P<int>\d+)|(?P<var>[xy])|(?P<op>[-+*^()])|(?P<bad>\S))"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int
    index: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        if kind is None:
            break
        start = m.start(kind)
        tok = _Token(kind, m.group(kind), start, len(tokens) + 1)
        if kind == "dec":
            raise PolySyntaxError(f"non-rational literal {tok.text!r}; write it as p/q", text, start, tok.index)
        if kind == "bad":
            raise PolySyntaxError(f"unexpected character {tok.text!r}", text, start, tok.index)
        tokens.append(tok)
        pos = m.end()
    tokens.append(_Token("end", "", len(text), len(tokens) + 1))
    return tokens


class _Parser:
    # expr   := ['-'|'+'] term (('+'|'-') term)*
    # term   := power ('*' power)*
    # power  := atom ['^' int]
    # atom   := int | int '/' int | 'x' | 'y' | '(' expr ')'
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message: str):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise PolySyntaxError(f"{message}, found {what}", self.text, t.pos, t.index)

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Poly:
        out = self.expr()
        if self.tok.kind != "end":
            self.fail("expected operator")
        return out

    def expr(self) -> Poly:
        negate = False
        if self.eat("-"):
            negate = True
        else:
            self.eat("+")
        out = self.term()
        if negate:
            out = -out
        while True:
            if self.eat("+"):
                out = out + self.term()
            elif self.eat("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> Poly:
        out = self.power()
        while self.eat("*"):
            out = out * self.power()
        return out

    def power(self) -> Poly:
        base = self.atom()
        if self.eat("^"):
            if self.tok.kind != "int":
                self.fail("exponent must be a nonnegative integer")
            n = int(self.tok.text)
            self.i += 1
            return base**n
        return base

    def atom(self) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Poly.constant(int(t.text))
        if t.kind == "rat":
            num, den = (int(s) for s in t.text.split("/"))
            if den == 0:
                raise PolySyntaxError("zero denominator", self.text, t.pos, t.index)
            self.i += 1
            return Poly.constant(Fraction(num, den))
        if t.kind == "var":
            self.i += 1
            return Poly.monomial(1, 0) if t.text == "x" else Poly.monomial(0, 1)
        if self.eat("("):
            inner = self.expr()
            if not self.eat(")"):
                self.fail("expected ')'")
            return inner
        self.fail("expected a number, variable or '('")


def parse_poly(text: str) -> Poly:
    """Parse ``text`` such as ``"3/2*x^4 - x*y^2"`` into an exact :class:`Poly`.

    Multiplication must be explicit and ``^`` takes a nonnegative integer
    literal. Raises :class:`PolySyntaxError` with the character offset and the
    1-based index of the offending token.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weights:
    """Weighted-homogeneity type ``(a, b; m)``: ``f(l^a x, l^b y) = l^m f(x, y)``."""

    a: int
    b: int
    m: int

    def __post_init__(self):
        for name in ("a", "b", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"weight {name} must be a positive integer, got {v!r}")
        if self.a > self.m or self.b > self.m:
            raise ValueError(f"weights ({self.a},{self.b};{self.m}) need a <= m and b <= m")
        if math.gcd(self.a, self.b, self.m) != 1:
            raise ValueError(f"weights ({self.a},{self.b};{self.m}) are not normalized (gcd != 1)")

    @classmethod
    def normalized(cls, a: int, b: int, m: int) -> "Weights":
        g = math.gcd(a, b, m)
        return cls(a // g, b // g, m // g)

    @classmethod
    def parse(cls, text: str) -> "Weights":
        parts = [int(p) for p in text.replace(";", ",").split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'a,b,m', got {text!r}")
        return cls.normalized(*parts)

    def degree(self, p: int, q: int) -> int:
        return p * self.a + q * self.b

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.m})"


def infer_weights(f: Poly) -> Weights:
    """Return the normalized positive weights making ``f`` weighted homogeneous."""
    support = f.support()
    if not support:
        raise ZeroPolynomial("the zero polynomial has no weight type")
    if len(support) == 1:
        raise AmbiguousWeights(f"single monomial {f}: weights are under-determined; pass them explicitly")
    p0, q0 = support[0]
    a = b = None
    for p, q in support[1:]:
        dp, dq = p - p0, q - q0
        # p*a + q*b constant => dp*a + dq*b = 0, which needs opposite signs for positive a, b
        if dp * dq >= 0:
            raise NotWeightedHomogeneous(f"{f} is not weighted homogeneous with positive weights")
        a, b = abs(dq), abs(dp)
        break
    g = math.gcd(a, b)
    a, b = a // g, b // g
    m = p0 * a + q0 * b
    for p, q in support:
        if p * a + q * b != m:
            raise NotWeightedHomogeneous(f"{f} is not weighted homogeneous: support is not on one weighted line")
    return Weights.normalized(a, b, m)


def check_weights(f: Poly, w: Weights) -> None:
    for p, q in f.support():
        if w.degree(p, q) != w.m:
            raise NotWeightedHomogeneous(f"monomial x^{p}*y^{q} has weighted degree {w.degree(p, q)} != {w.m}")


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Dense univariate polynomial with ascending :class:`Fraction` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_dict(cls, d: Mapping[int, Fraction]) -> "UniPoly":
        if not d:
            return cls()
        out = [Fraction(0)] * (max(d) + 1)
        for k, c in d.items():
            out[k] += c
        return cls(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = _frac(other)
            return UniPoly([c * v for v in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        lead = other.lead
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[k + i] -= c * oc
        return UniPoly(quot), UniPoly(rem[:dq])

    def monic(self) -> "UniPoly":
        return self * (1 / self.lead) if self.coeffs else self

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    def compose_neg(self) -> "UniPoly":
        """``u -> g(-u)``."""
        return UniPoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def reversed(self) -> "UniPoly":
        """``v -> v**deg * g(1/v)``."""
        return UniPoly(list(reversed(self.coeffs)))

    def deflate(self, r: Fraction) -> "UniPoly":
        """Quotient of synthetic division by ``(u - r)``; the remainder is dropped."""
        n = self.degree
        if n <= 0:
            return UniPoly()
        q = [Fraction(0)] * n
        acc = Fraction(0)
        for k in range(n, 0, -1):
            acc = acc * r + self.coeffs[k]
            q[k - 1] = acc
        return UniPoly(q)

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def sign_at(self, x: Fraction) -> int:
        v = self(x)
        return (v > 0) - (v < 0)


def restrict(f: Poly, sign: int) -> UniPoly:
    """The univariate polynomial ``u -> f(sign, u)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    d: dict[int, Fraction] = {}
    for (p, q), c in f.terms.items():
        d[q] = d.get(q, Fraction(0)) + (c if sign == 1 or p % 2 == 0 else -c)
    return UniPoly.from_dict(d)


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Resultant via the exact determinant of the Sylvester matrix."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return Fraction(1)
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    return _det(rows)


def _det(rows: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= factor * row_c[c]
    return det


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank over the rationals by Gaussian elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    rk = 0
    for col in range(ncols):
        piv = next((r for r in range(rk, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        p = a[rk][col]
        for r in range(rk + 1, len(a)):
            if a[r][col]:
                factor = a[r][col] / p
                for c in range(col, ncols):
                    a[r][c] -= factor * a[rk][c]
        rk += 1
        if rk == len(a):
            break
    return rk


def bivariate_resultant_y(F: Poly, G: Poly) -> UniPoly:
    """``Res_y(F, G)`` as a polynomial in ``x``, by evaluation and exact interpolation."""
    Fy, Gy = F.coeffs_in_y(), G.coeffs_in_y()
    if not Fy or not Gy:
        return UniPoly()
    dF, dG = len(Fy) - 1, len(Gy) - 1
    bound = dG * max(F.degree_x(), 0) + dF * max(G.degree_x(), 0)
    xs, vals = [], []
    x0 = 0
    while len(xs) < bound + 1:
        x0 += 1
        for cand in (x0, -x0):
            if Fy[-1](cand) == 0 or Gy[-1](cand) == 0:
                continue
            fu = UniPoly([c(cand) for c in Fy])
            gu = UniPoly([c(cand) for c in Gy])
            xs.append(Fraction(cand))
            vals.append(resultant(fu, gu))
            if len(xs) == bound + 1:
                break
    return _interpolate(xs, vals)


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPoly:
    # Newton divided differences
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * UniPoly([-xs[i], 1]) + UniPoly([coef[i]])
    return out


def _is_nonzero_monomial(p: UniPoly) -> bool:
    return not p.is_zero() and sum(1 for c in p.coeffs if c != 0) == 1


@dataclass(frozen=True)
class SingularityCertificate:
    res_y: UniPoly
    res_x: UniPoly
    squarefree_plus: bool
    squarefree_minus: bool


def validate_isolated_singularity(f: Poly, w: Weights | None = None) -> SingularityCertificate:
    """Certify that ``f`` has an isolated singular point at the origin.

    The certificate combines squarefreeness of ``f(1, u)`` and ``f(-1, u)``
    with monomiality of the resultants of the two partial derivatives
    (eliminating ``y`` and then ``x``), so the partials share no zero away
    from the coordinate axes and none on them except the origin.
    """
    w = w if w is not None else infer_weights(f)
    check_weights(f, w)
    if w.m == 1 or (1, 0) in f.terms or (0, 1) in f.terms:
        raise SmoothAtOrigin(f"{f} has a nonzero linear part; the origin is not singular")
    fx, fy = f.diff_x(), f.diff_y()
    if fx.is_zero() or fy.is_zero():
        raise NonIsolatedSingularity(f"{f} depends on one variable only; its singular locus is a line")
    res_y = bivariate_resultant_y(fx, fy)
    res_x = bivariate_resultant_y(fx.swap(), fy.swap())
    if not _is_nonzero_monomial(res_y) or not _is_nonzero_monomial(res_x):
        raise NonIsolatedSingularity(
            f"partial derivatives of {f} have a common zero away from the origin "
            f"(Res_y = {res_y}, Res_x = {res_x})",
            certificate=(res_y, res_x),
        )
    sq_plus = restrict(f, 1).is_squarefree()
    sq_minus = restrict(f, -1).is_squarefree()
    if not (sq_plus and sq_minus):
        raise NonIsolatedSingularity(
            f"f(1,u) or f(-1,u) has a repeated factor for {f}", certificate=(sq_plus, sq_minus)
        )
    return SingularityCertificate(res_y, res_x, sq_plus, sq_minus)


# ---------------------------------------------------------------------------
# real roots


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval ``[lo, hi]`` of a real root; ``lo == hi`` when ``exact``."""

    lo: Fraction
    hi: Fraction
    exact: bool = False

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def sturm_sequence(g: UniPoly) -> list[UniPoly]:
    seq = [g, g.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-seq[-2].divmod(seq[-1])[1])
    return [p for p in seq if not p.is_zero()]


def _variations(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for s, t in zip(nz, nz[1:]) if s != t)


def sign_variations(seq: Sequence[UniPoly], x: Fraction) -> int:
    return _variations(p.sign_at(x) for p in seq)


def sign_variations_at_infinity(seq: Sequence[UniPoly], sign: int) -> int:
    signs = []
    for p in seq:
        s = 1 if p.lead > 0 else -1
        if sign < 0 and p.degree % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(g: UniPoly) -> int:
    seq = sturm_sequence(g)
    return sign_variations_at_infinity(seq, -1) - sign_variations_at_infinity(seq, 1)


def cauchy_bound(g: UniPoly) -> Fraction:
    lead = abs(g.lead)
    return 1 + max((abs(c) / lead for c in g.coeffs[:-1]), default=Fraction(0))


def rational_roots(g: UniPoly) -> list[Fraction]:
    """All rational roots of ``g`` by the rational root test."""
    if g.is_zero():
        raise ZeroPolynomial("zero polynomial")
    cs = list(g.coeffs)
    roots = []
    shift = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        shift += 1
    if shift:
        roots.append(Fraction(0))
    if len(cs) <= 1:
        return roots
    den = math.lcm(*(c.denominator for c in cs))
    ints = [int(c * den) for c in cs]
    g0 = math.gcd(*ints)
    ints = [c // g0 for c in ints]
    h = UniPoly(ints)
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            if math.gcd(p, q) != 1:
                continue
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if h(cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def isolate_real_roots(g: UniPoly, width: Fraction = Fraction(1, 1024)) -> list[RootInterval]:
    """Disjoint sorted isolating intervals of the real roots of squarefree ``g``.

    Intervals are half-open ``(lo, hi]`` in the Sturm count and refined by
    bisection until ``hi - lo <= width``. Rational roots are reported exactly.
    """
    if g.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    width = Fraction(width)
    if g.degree <= 0:
        return []
    seq = sturm_sequence(g)
    exact = set(rational_roots(g))
    B = cauchy_bound(g)
    out: list[RootInterval] = []
    stack = [(-B, B, sign_variations(seq, -B), sign_variations(seq, B))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append(_finish_root(g, lo, hi, exact, width))
            continue
        mid = (lo + hi) / 2
        vmid = sign_variations(seq, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort(key=lambda r: r.lo)
    return out


def _finish_root(g: UniPoly, lo: Fraction, hi: Fraction, exact: set, width: Fraction) -> RootInterval:
    for r in exact:
        if lo < r <= hi:
            return RootInterval(r, r, exact=True)
    # the root is irrational, simple and inside (lo, hi); lo may itself be a neighbouring root
    slo = g.sign_at(lo) or -g.sign_at(hi)
    while hi - lo > width:
        mid = (lo + hi) / 2
        smid = g.sign_at(mid)
        if smid == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)
