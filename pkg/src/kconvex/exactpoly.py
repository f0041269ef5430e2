"""Exact rational polynomials, Sturm sequences and rational null spaces.

Every scalar is a :class:`fractions.Fraction`; nothing in this module ever
rounds.  Polynomials are dense coefficient tuples, lowest degree first, with
trailing zeros stripped (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)\s*/\s*([+-]?\d+)$")
_DEC_RE = re.compile(r"^([+-]?)(\d*)\.(\d*)$")


class ParseError(ValueError):
    """Raised when a string is not an exact rational literal."""


def rational_parse(text: str) -> Fraction:
    """Parse an integer, ``p/q`` or finite decimal string exactly.

    >>> rational_parse("3/6")
    Fraction(1, 2)
    >>> rational_parse("-0.125")
    Fraction(-1, 8)
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _FRAC_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    m = _DEC_RE.match(s)
    if m and (m.group(2) or m.group(3)):
        sign, whole, frac = m.groups()
        value = Fraction(int(whole or "0")) + (
            Fraction(int(frac), 10 ** len(frac)) if frac else 0
        )
        return -value if sign == "-" else value
    raise ParseError(f"not a rational literal: {text!r}")


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rational_parse(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def rational_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def _strip(coeffs: Iterable[Fraction]) -> tuple:
    c = [as_rational(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Dense univariate polynomial over the rationals, ``coeffs[i]`` of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        self.coeffs = _strip(coeffs)

    @classmethod
    def const(cls, c: RationalLike) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def linear_power(cls, a: RationalLike, sign: int, power: int) -> "Poly":
        """Expand ``(sign * (x - a)) ** power`` binomially; ``sign`` is +1 or -1."""
        from math import comb

        a = as_rational(a)
        # (s*x - s*a)^p = sum_i C(p,i) (s x)^i (-s a)^(p-i)
        return cls(
            Fraction(comb(power, i)) * (sign**i) * (-sign * a) ** (power - i)
            for i in range(power + 1)
        )

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}" if i > 1 else f"{c}*x")
        return "Poly(" + " + ".join(terms) + ")"

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c: RationalLike) -> "Poly":
        c = as_rational(c)
        return Poly(c * v for v in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "Poly") -> tuple:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), Poly(rem)
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for shift in range(dq, -1, -1):
            c = rem[shift + len(other.coeffs) - 1] / lead
            quot[shift] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other) -> "Poly":
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other) -> "Poly":
        return self.divmod(_as_poly(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    return Poly.const(p)


def poly_eval(p: Poly, x: RationalLike) -> Fraction:
    """Horner evaluation."""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def squarefree_part(p: Poly) -> Poly:
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    g = poly_gcd(p, p.derivative())
    return p // g


def sturm_chain(p: Poly) -> list:
    """Sturm sequence of the squarefree part of ``p``."""
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    p0 = squarefree_part(p)
    chain = [p0]
    if p0.degree == 0:
        return chain
    chain.append(p0.derivative())
    while True:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r)
    return chain


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def sign_variations(chain: Sequence[Poly], x: Fraction) -> int:
    prev = 0
    count = 0
    for q in chain:
        s = _sign(poly_eval(q, x))
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


class SturmSequence:
    """A Sturm chain bundled with its counting and isolation routines."""

    def __init__(self, p: Poly):
        self.chain = sturm_chain(p)
        self.base = self.chain[0]

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct roots in the half-open interval ``(lo, hi]``."""
        if lo >= hi:
            return 0
        return sign_variations(self.chain, lo) - sign_variations(self.chain, hi)

    def _refine(self, a: Fraction, b: Fraction, resolution) -> Interval:
        # exactly one root in (a, b]
        f = self.base
        while True:
            if poly_eval(f, b) == 0:
                return Interval(b, b)
            if poly_eval(f, a) != 0 and (resolution is None or b - a <= resolution):
                return Interval(a, b)
            m = (a + b) / 2
            if poly_eval(f, m) == 0:
                return Interval(m, m)
            if self.count(a, m) == 1:
                b = m
            else:
                a = m

    def isolate(self, lo: Fraction, hi: Fraction, resolution=None) -> list:
        out = []
        if poly_eval(self.base, lo) == 0:
            out.append(Interval(lo, lo))
        stack = [(lo, hi)]
        found = []
        while stack:
            a, b = stack.pop()
            c = self.count(a, b)
            if c == 0:
                continue
            if c == 1:
                found.append(self._refine(a, b, resolution))
                continue
            m = (a + b) / 2
            stack.append((a, m))
            stack.append((m, b))
        out.extend(sorted(found, key=lambda iv: iv.lo))
        return out


def count_roots(p: Poly, iv: Interval) -> int:
    """Number of distinct real roots of ``p`` in ``(iv.lo, iv.hi]``."""
    return SturmSequence(p).count(iv.lo, iv.hi)


DEFAULT_DEPTH = 40


def isolate_roots(p: Poly, iv: Interval, resolution: Union[Fraction, None, str] = "default") -> list:
    """Disjoint intervals, one per distinct root of ``p`` in the closed ``iv``.

    Each result is either a point ``[r, r]`` with ``p(r) == 0`` or an interval
    ``[l, h]`` whose endpoints are not roots and which contains exactly one
    root, in its interior.  ``resolution="default"`` refines to width
    ``(hi - lo) / 2**40``; ``None`` stops as soon as roots are separated.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if resolution == "default":
        resolution = iv.width / 2**DEFAULT_DEPTH
    if p.degree == 0:
        return []
    return SturmSequence(p).isolate(iv.lo, iv.hi, resolution)


@dataclass(frozen=True)
class NonNeg:
    """Marker result: the polynomial is nonnegative on the interval."""

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Witness:
    """A rational point where the tested function is strictly negative."""

    x: Fraction
    value: Fraction

    def __bool__(self):
        return False


def sample_points(p: Poly, iv: Interval) -> list:
    """Rational points hitting every constant-sign region of ``p`` on ``iv``.

    Endpoints, plus one point strictly between every pair of consecutive
    isolated roots (the virtual roots ``lo`` and ``hi`` included).
    """
    if p.is_zero() or p.degree == 0 or iv.lo == iv.hi:
        return [iv.lo] if iv.lo == iv.hi else [iv.lo, iv.hi]
    roots = isolate_roots(p, iv, resolution=None)
    edges = [(iv.lo, iv.lo)] + [(r.lo, r.hi) for r in roots] + [(iv.hi, iv.hi)]
    pts = {iv.lo, iv.hi}
    for (_, r1), (l2, _) in zip(edges, edges[1:]):
        pts.add((r1 + l2) / 2)
    return sorted(pts)


def nonneg_on_interval(p: Poly, iv: Interval):
    """Decide ``p(x) >= 0`` on ``[lo, hi]`` exactly.

    Returns :class:`NonNeg` or the leftmost negative sample as a :class:`Witness`.
    """
    if p.is_zero():
        return NonNeg()
    if p.degree == 0:
        return NonNeg() if p.coeffs[0] >= 0 else Witness(iv.lo, p.coeffs[0])
    for x in sample_points(p, iv):
        v = poly_eval(p, x)
        if v < 0:
            return Witness(x, v)
    return NonNeg()


def _bareiss_echelon(rows: list) -> tuple:
    """Fraction-free row echelon form over the integers; returns (rows, pivot cols)."""
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def null_space(matrix: Sequence[Sequence[RationalLike]]) -> list:
    """Exact basis of the right null space, one primitive integer vector per free column.

    Rows are scaled to integers and reduced with Bareiss elimination; each
    basis vector is scaled to coprime integers with a positive first nonzero
    entry.
    """
    rows = [[as_rational(v) for v in row] for row in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    int_rows = []
    for row in rows:
        d = lcm(*(v.denominator for v in row)) if row else 1
        int_rows.append([int(v * d) for v in row])
    ech, pivots = _bareiss_echelon(int_rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            s = sum((ech[r][j] * x[j] for j in range(pc + 1, ncols)), Fraction(0))
            x[pc] = -s / ech[r][pc]
        basis.append(_primitive(x))
    return basis


def _primitive(v: list) -> tuple:
    d = lcm(*(x.denominator for x in v))
    ints = [int(x * d) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g:
        ints = [i // g for i in ints]
    first = next((i for i in ints if i), 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(Fraction(i) for i in ints)


def matrix_rank(matrix: Sequence[Sequence[RationalLike]]) -> int:
    rows = [[as_rational(v) for v in row] for row in matrix]
    if not rows:
        return 0
    int_rows = []
    for row in rows:
        d = lcm(*(v.denominator for v in row)) if row else 1
        int_rows.append([int(v * d) for v in row])
    return len(_bareiss_echelon(int_rows)[1])


def cauchy_bound(p: Poly) -> Fraction:
    """Every real root ``r`` of ``p`` satisfies ``|r| <= bound``."""
    if p.degree <= 0:
        return Fraction(0)
    lead = abs(p.lead)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])
