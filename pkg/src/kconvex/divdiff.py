"""Divided differences, the sliding-window Popoviciu decomposition, and
exact test functions ``P(x) + sum_j c_j (x - t_j)_+^(k-1)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactpoly import Poly, as_rational, poly_eval
from .spline import InequalityProblem, truncated_power


@dataclass(frozen=True)
class FunctionTable:
    points: tuple
    values: tuple

    def __post_init__(self):
        pts = tuple(as_rational(p) for p in self.points)
        vals = tuple(as_rational(v) for v in self.values)
        if len(pts) != len(vals):
            raise ValueError("points and values differ in length")
        if len(set(pts)) != len(pts):
            raise ValueError("repeated points (confluent divided differences are unsupported)")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @classmethod
    def tabulate(cls, f: Callable, points: Iterable) -> "FunctionTable":
        pts = tuple(as_rational(p) for p in points)
        return cls(pts, tuple(f(p) for p in pts))

    def lookup(self, x) -> Fraction:
        return self.values[self.points.index(as_rational(x))]


def divided_difference(table: FunctionTable) -> Fraction:
    """``[x_0, ..., x_m; f]`` via the recursive triangle."""
    if not table.points:
        raise ValueError("need at least one point")
    pts = table.points
    col = list(table.values)
    for level in range(1, len(pts)):
        col = [(col[i] - col[i + 1]) / (pts[i] - pts[i + level]) for i in range(len(col) - 1)]
    return col[0]


def divided_difference_explicit(points: Sequence, values: Sequence) -> Fraction:
    """Closed form ``sum_i f(x_i) / prod_{j != i} (x_i - x_j)``."""
    total = Fraction(0)
    for i, (xi, fi) in enumerate(zip(points, values)):
        den = Fraction(1)
        for j, xj in enumerate(points):
            if j != i:
                den *= xi - xj
        total += fi / den
    return total


@dataclass(frozen=True)
class SynthFunction:
    """``f(x) = poly_part(x) + sum_j c_j (x - t_j)_+^(order-1)`` with every ``c_j >= 0``.

    Such ``f`` have a nonnegative ``order``-th derivative in the distributional
    sense, so they are admissible test functions for every inequality here.
    """

    poly_part: Poly
    knots: tuple = ()
    order: int = 1

    def __post_init__(self):
        knots = tuple((as_rational(t), as_rational(c)) for t, c in self.knots)
        if any(c < 0 for _, c in knots):
            raise ValueError("knot weights must be nonnegative")
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "knots", knots)

    def __call__(self, x) -> Fraction:
        return synth_eval(self, x)


def synth_eval(f: SynthFunction, x) -> Fraction:
    x = as_rational(x)
    v = poly_eval(f.poly_part, x)
    for t, c in f.knots:
        v += c * truncated_power(x - t, f.order - 1)
    return v


def prototype(t, k: int) -> SynthFunction:
    """``(x - t)_+^(k-1)``, the extreme ray of order-k convex functions."""
    return SynthFunction(Poly(), ((t, 1),), k)


def apply_functional(problem: InequalityProblem, f: SynthFunction) -> Fraction:
    """Exact ``sum_i w_i f(a_i)``."""
    if f.order != problem.k:
        raise ValueError(f"test function order {f.order} != problem order {problem.k}")
    return sum((w * synth_eval(f, a) for a, w in problem.nodes), Fraction(0))


@dataclass(frozen=True)
class HammerDecomposition:
    """Window coefficients of ``sum_j w_j f(a_j) = sum_j coef_j [a_j..a_{j+k}; f]``.

    ``inner_sums[j]`` is ``sum_{i<=j} w_i prod_{l=1}^{k-1} (a_i - a_{j+l})``, the
    quantity the criterion requires to be nonnegative; ``coefficients[j]``
    multiplies it by the window width ``a_j - a_{j+k}``.
    """

    coefficients: tuple
    inner_sums: tuple
    windows: tuple
    args: tuple = field(default=())
    weights: tuple = field(default=())

    @property
    def passes(self) -> bool:
        return all(s >= 0 for s in self.inner_sums)

    @property
    def first_violation(self):
        """``(window number, inner sum)`` of the first negative window, 1-based."""
        for j, s in enumerate(self.inner_sums, start=1):
            if s < 0:
                return j, s
        return None


def _anchored_nodes(problem: InequalityProblem, anchors: Iterable) -> list:
    nodes = dict(problem.nodes)
    for t in anchors:
        nodes.setdefault(as_rational(t), Fraction(0))
    return sorted(nodes.items(), reverse=True)


def hammer_decompose(problem: InequalityProblem, anchors: Iterable = ()) -> HammerDecomposition:
    """Window coefficients for the problem, with optional zero-weight anchor arguments."""
    nodes = _anchored_nodes(problem, anchors)
    k = problem.k
    n = len(nodes)
    if n < k + 1:
        raise ValueError(f"need at least k+1 = {k + 1} nodes, have {n}")
    a = [x for x, _ in nodes]
    w = [y for _, y in nodes]
    coefs, inners, windows = [], [], []
    for j in range(n - k):
        inner = Fraction(0)
        for i in range(j + 1):
            prod = w[i]
            for l in range(1, k):
                prod *= a[i] - a[j + l]
            inner += prod
        inners.append(inner)
        coefs.append((a[j] - a[j + k]) * inner)
        windows.append(tuple(a[j : j + k + 1]))
    return HammerDecomposition(tuple(coefs), tuple(inners), tuple(windows), tuple(a), tuple(w))


@dataclass(frozen=True)
class IdentityMismatch:
    lhs: Fraction
    rhs: Fraction

    def __bool__(self):
        return False


@dataclass(frozen=True)
class IdentityHolds:
    value: Fraction

    def __bool__(self):
        return True


class MomentError(ValueError):
    def __init__(self, j: int, value: Fraction):
        super().__init__(f"moment {j} is {value}, not 0")
        self.j = j
        self.value = value


def first_moment_violation(problem: InequalityProblem):
    for j in range(problem.k):
        m = problem.moment(j)
        if m != 0:
            return j, m
    return None


def hammer_identity_check(problem: InequalityProblem, table: FunctionTable, anchors: Iterable = ()):
    """Compare ``sum_j w_j f(a_j)`` with the window expansion, exactly."""
    bad = first_moment_violation(problem)
    if bad is not None:
        raise MomentError(*bad)
    dec = hammer_decompose(problem, anchors)
    k = problem.k
    lhs = sum((w * table.lookup(a) for a, w in zip(dec.args, dec.weights)), Fraction(0))
    rhs = Fraction(0)
    for j, coef in enumerate(dec.coefficients):
        pts = dec.args[j : j + k + 1]
        rhs += coef * divided_difference(FunctionTable(pts, tuple(table.lookup(p) for p in pts)))
    return IdentityHolds(lhs) if lhs == rhs else IdentityMismatch(lhs, rhs)
