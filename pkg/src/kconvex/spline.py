"""Truncated power splines ``r_j(x) = sum_i w_i (a_i - x)_+^(j-1)`` and sign changes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactpoly import (
    Interval,
    NonNeg,
    Poly,
    Witness,
    as_rational,
    cauchy_bound,
    isolate_roots,
    nonneg_on_interval,
    poly_eval,
    sample_points,
)


def truncated_power(x: Fraction, power: int) -> Fraction:
    """``(x)_+^power``; the zeroth power is the indicator of ``x > 0``."""
    if x <= 0:
        return Fraction(0)
    return x**power


@dataclass(frozen=True)
class InequalityProblem:
    """Canonical node list for ``sum_i w_i f(a_i) >= 0`` over ``f^(k) >= 0``.

    Build instances with :meth:`from_pairs`, which sorts arguments strictly
    decreasing, merges repeated arguments and drops zero weights.
    """

    nodes: tuple
    k: int
    domain: Interval

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        args = [a for a, _ in self.nodes]
        if any(x <= y for x, y in zip(args, args[1:])):
            raise ValueError("arguments must be strictly decreasing")
        if any(w == 0 for _, w in self.nodes):
            raise ValueError("zero weights must be removed")
        if any(a not in self.domain for a in args):
            raise ValueError("domain must contain every argument")

    @classmethod
    def from_pairs(cls, pairs: Iterable, k: int, domain: Optional[Sequence] = None) -> "InequalityProblem":
        merged: dict = {}
        for a, w in pairs:
            a, w = as_rational(a), as_rational(w)
            merged[a] = merged.get(a, Fraction(0)) + w
        nodes = tuple(sorted(((a, w) for a, w in merged.items() if w != 0), reverse=True))
        if domain is None:
            if nodes:
                dom = Interval(nodes[-1][0], nodes[0][0])
            else:
                dom = Interval(0, 0)
        else:
            dom = domain if isinstance(domain, Interval) else Interval(*domain)
        return cls(nodes, int(k), dom)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def args(self) -> tuple:
        return tuple(a for a, _ in self.nodes)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self.nodes)

    def negated(self) -> "InequalityProblem":
        return InequalityProblem(tuple((a, -w) for a, w in self.nodes), self.k, self.domain)

    def with_k(self, k: int) -> "InequalityProblem":
        return InequalityProblem(self.nodes, k, self.domain)

    def moment(self, j: int) -> Fraction:
        return sum((w * a**j for a, w in self.nodes), Fraction(0))


@dataclass(frozen=True)
class TruncatedPowerSpline:
    """Exact piecewise polynomial in the basis ``(a - x)_+^degree``.

    ``pieces[i]`` is valid on ``(breakpoints[i+1], breakpoints[i])``; the last
    piece covers everything left of the smallest breakpoint.  The spline is
    zero to the right of ``breakpoints[0]``.
    """

    breakpoints: tuple
    pieces: tuple
    degree: int

    def region(self, i: int, left_limit: Fraction) -> tuple:
        hi = self.breakpoints[i]
        lo = self.breakpoints[i + 1] if i + 1 < len(self.breakpoints) else left_limit
        return lo, hi

    def derivative(self) -> "TruncatedPowerSpline":
        return TruncatedPowerSpline(
            self.breakpoints, tuple(p.derivative() for p in self.pieces), max(self.degree - 1, 0)
        )

    def scale(self, c) -> "TruncatedPowerSpline":
        return TruncatedPowerSpline(self.breakpoints, tuple(p.scale(c) for p in self.pieces), self.degree)

    def left_limit(self) -> Fraction:
        """A point left of every real root of the unbounded left piece."""
        if not self.breakpoints:
            return Fraction(0)
        low = self.breakpoints[-1]
        bound = cauchy_bound(self.pieces[-1])
        return min(low, -bound) - 1


def build_rk(problem: InequalityProblem, j: int) -> TruncatedPowerSpline:
    """Piecewise expansion of ``r_j`` for the problem's nodes."""
    if j < 1:
        raise ValueError("order j must be positive")
    pieces = []
    acc = Poly()
    for a, w in problem.nodes:
        acc = acc + Poly.linear_power(a, -1, j - 1).scale(w)
        pieces.append(acc)
    return TruncatedPowerSpline(problem.args, tuple(pieces), j - 1)


def spline_eval(s: TruncatedPowerSpline, x) -> Fraction:
    x = as_rational(x)
    active = 0
    for b in s.breakpoints:
        if b > x:
            active += 1
        else:
            break
    if active == 0:
        return Fraction(0)
    return poly_eval(s.pieces[active - 1], x)


def direct_rk(problem: InequalityProblem, j: int, x) -> Fraction:
    """``sum_i w_i (a_i - x)_+^(j-1)`` straight from the definition."""
    x = as_rational(x)
    return sum((w * truncated_power(a - x, j - 1) for a, w in problem.nodes), Fraction(0))


def _pieces_left_to_right(s: TruncatedPowerSpline, iv: Interval):
    """Yield (poly, clipped interval) for pieces meeting ``iv``, leftmost first."""
    n = len(s.breakpoints)
    left = min(iv.lo, s.breakpoints[-1]) if n else iv.lo
    for i in range(n - 1, -1, -1):
        lo, hi = s.region(i, left)
        lo, hi = max(lo, iv.lo), min(hi, iv.hi)
        if lo <= hi:
            yield s.pieces[i], Interval(lo, hi)
    top = s.breakpoints[0] if n else iv.lo
    if iv.hi > top:
        yield Poly(), Interval(max(top, iv.lo), iv.hi)


def spline_nonneg(s: TruncatedPowerSpline, iv: Interval):
    """``NonNeg()`` or the leftmost negative sample as a ``Witness``."""
    for p, piece_iv in _pieces_left_to_right(s, iv):
        res = nonneg_on_interval(p, piece_iv)
        if isinstance(res, Witness):
            return res
    return NonNeg()


def spline_min(s: TruncatedPowerSpline, iv: Interval) -> tuple:
    """Minimum of the spline on ``iv`` as ``(approx argmin, value)``.

    Candidates are piece endpoints and critical points: exact for quadratic
    pieces, otherwise refined to width ``2**-40`` of the piece, so the value is
    accurate far below ``1e-9``.
    """
    best = None
    for p, piece_iv in _pieces_left_to_right(s, iv):
        cands = [piece_iv.lo, piece_iv.hi]
        dp = p.derivative()
        if dp.degree == 1:
            r = -dp.coeffs[0] / dp.coeffs[1]
            if r in piece_iv:
                cands.append(r)
        elif dp.degree > 1 and piece_iv.lo < piece_iv.hi:
            for r in isolate_roots(dp, piece_iv):
                cands.append((r.lo + r.hi) / 2)
        for x in cands:
            v = poly_eval(p, x)
            if best is None or v < best[1]:
                best = (x, v)
    return best


def count_sign_changes(seq: Iterable) -> int:
    """Adjacent opposite-sign pairs after deleting zeros."""
    count = 0
    prev = 0
    for v in seq:
        sgn = (v > 0) - (v < 0)
        if sgn:
            if prev and sgn != prev:
                count += 1
            prev = sgn
    return count


def spline_sign_changes(s: TruncatedPowerSpline) -> int:
    """Sign changes of the spline as a function on the whole real line."""
    if not s.breakpoints:
        return 0
    support = Interval(s.left_limit(), s.breakpoints[0])
    values = []
    for p, piece_iv in _pieces_left_to_right(s, support):
        values.extend(poly_eval(p, x) for x in sample_points(p, piece_iv))
    return count_sign_changes(values)


@dataclass(frozen=True)
class SignChangeReport:
    weight_changes: int
    partial_sum_changes: int
    r2_value_changes: int


def partial_sums(problem: InequalityProblem) -> list:
    out, acc = [], Fraction(0)
    for w in problem.weights:
        acc += w
        out.append(acc)
    return out


def r2_values(problem: InequalityProblem) -> list:
    """``s_j = sum_{i<=j} w_i a_i - (sum_{i<=j} w_i) a_j``: r_2 at each breakpoint."""
    out = []
    wsum = wa = Fraction(0)
    for a, w in problem.nodes:
        wsum += w
        wa += w * a
        out.append(wa - wsum * a)
    return out


def sign_change_report(problem: InequalityProblem) -> SignChangeReport:
    return SignChangeReport(
        weight_changes=count_sign_changes(problem.weights),
        partial_sum_changes=count_sign_changes(partial_sums(problem)),
        r2_value_changes=count_sign_changes(r2_values(problem)),
    )
