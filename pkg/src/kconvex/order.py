"""The order ``x >_k y`` on vectors with equal power sums ``s_1..s_{k-1}``.

``x >_k y`` means ``sum f(x_i) >= sum f(y_i)`` for every ``f`` with
``f^(k) >= 0``; it is decided exactly by merging the two vectors into one
weighted node list (+1 on ``x``, -1 on ``y``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Optional, Sequence

from .criteria import decide_exact
from .exactpoly import as_rational
from .spline import InequalityProblem

DOMINATES = "dominates"
DOMINATED = "dominated"
EQUAL = "equal"
INCOMPARABLE = "incomparable"
DIFFERENT_CLASS = "different_class"

MAXIMAL = "maximal"
MINIMAL = "minimal"
BOTH = "both"
NEITHER = "neither"


@dataclass(frozen=True)
class Configuration:
    values: tuple

    def __post_init__(self):
        vals = tuple(sorted((as_rational(v) for v in self.values), reverse=True))
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, *values) -> "Configuration":
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = values[0]
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.values)


def _config(x) -> Configuration:
    return x if isinstance(x, Configuration) else Configuration(tuple(x))


def power_sums(x, k: int) -> tuple:
    """``(s_1, ..., s_{k-1})`` with ``s_j = sum_i x_i^j``."""
    if k < 2:
        raise ValueError("power sums need k >= 2")
    x = _config(x)
    return tuple(sum((v**j for v in x.values), Fraction(0)) for j in range(1, k))


def difference_problem(x, y, k: int) -> InequalityProblem:
    """``sum f(x_i) - sum f(y_i)`` as a canonical problem of order ``k``."""
    x, y = _config(x), _config(y)
    pairs = [(v, 1) for v in x.values] + [(v, -1) for v in y.values]
    return InequalityProblem.from_pairs(pairs, k)


def compare(x, y, k: int) -> str:
    x, y = _config(x), _config(y)
    if x.n != y.n:
        raise ValueError("configurations differ in length")
    if k >= 2 and power_sums(x, k) != power_sums(y, k):
        return DIFFERENT_CLASS
    if x.values == y.values:
        return EQUAL
    prob = difference_problem(x, y, k)
    up = decide_exact(prob).holds
    down = decide_exact(prob.negated()).holds
    if up and down:
        # r_k identically zero forces equal multisets, handled above
        raise AssertionError("two-way dominance between distinct multisets")
    if up:
        return DOMINATES
    if down:
        return DOMINATED
    return INCOMPARABLE


def _cmp(u, v) -> str:
    return "greater" if u > v else "less" if u < v else "equal"


@dataclass(frozen=True)
class Smooth1Report:
    """The three equivalent conditions for ``n = k`` pairs."""

    kth_power: str
    maximum: str
    relation: str

    @property
    def agree(self) -> bool:
        expected = {"greater": DOMINATES, "less": DOMINATED, "equal": EQUAL}
        return (
            self.kth_power == self.maximum
            and expected[self.kth_power] == self.relation
        )


def smooth1_equivalence(x, y, k: int) -> Smooth1Report:
    x, y = _config(x), _config(y)
    if x.n != k or y.n != k:
        raise ValueError("smooth1_equivalence needs n = k")
    if power_sums(x, k) != power_sums(y, k):
        raise ValueError("power sums s_1..s_{k-1} differ")
    pk_x = sum(v**k for v in x.values)
    pk_y = sum(v**k for v in y.values)
    return Smooth1Report(_cmp(pk_x, pk_y), _cmp(x.values[0], y.values[0]), compare(x, y, k))


@dataclass(frozen=True)
class ExtremalPattern:
    block_lengths: tuple
    role: str
    max_indices: Optional[tuple] = None
    min_indices: Optional[tuple] = None

    @property
    def witness_indices(self) -> Optional[tuple]:
        return self.max_indices if self.max_indices is not None else self.min_indices


def _segment_search(values: tuple, k: int, short_parity: int) -> Optional[tuple]:
    """Find ``1 = i_1 <= ... <= i_k = n+1`` splitting ``values`` into ``k - 1``
    constant (possibly empty) segments, where segment ``s`` (1-based) has
    length at most 1 whenever ``s % 2 == short_parity``."""
    n = len(values)
    nseg = k - 1

    @lru_cache(maxsize=None)
    def go(pos: int, seg: int) -> Optional[tuple]:
        if seg == nseg:
            return () if pos == n else None
        limit = 1 if (seg + 1) % 2 == short_parity else n - pos
        for length in range(0, min(limit, n - pos) + 1):
            if length and values[pos] != values[pos + length - 1]:
                break
            rest = go(pos + length, seg + 1)
            if rest is not None:
                return (pos + length + 1,) + rest
        return None

    if nseg < 1:
        return (1,) if n == 0 else None
    found = go(0, 0)
    return None if found is None else (1,) + found


def extremal_classify(x, k: int) -> ExtremalPattern:
    """Classify ``x`` as a maximal and/or minimal element of its class by block pattern."""
    x = _config(x)
    blocks = tuple(len(list(g)) for _, g in groupby(x.values))
    mx = _segment_search(x.values, k, short_parity=1)
    mn = _segment_search(x.values, k, short_parity=0)
    role = BOTH if mx and mn else MAXIMAL if mx else MINIMAL if mn else NEITHER
    return ExtremalPattern(blocks, role, mx, mn)


def is_singleton(x, k: int) -> bool:
    """Whether the class of ``x`` at order ``k`` is the single point ``x``."""
    x = _config(x)
    if x.n < k:
        raise ValueError("is_singleton needs n >= k")
    return extremal_classify(x, k - 1).role != NEITHER


def six_point_config(xyz: Sequence) -> Configuration:
    return Configuration(tuple(xyz) + tuple(-v for v in xyz))


def six_point_check(xyz: Sequence, abc: Sequence, tol: Optional[float] = None, cross_check: bool = True) -> str:
    """Symmetric six-point test at order 4: ``(x,y,z,-z,-y,-x) >_4 (a,b,c,-c,-b,-a)``.

    Exact on rationals; with ``tol`` the inputs are floats, power sums match
    within ``tol`` and the answer is cross-checked on a numeric grid.
    """
    if tol is None:
        xs = [as_rational(v) for v in xyz]
        abcs = [as_rational(v) for v in abc]
    else:
        xs = [float(v) for v in xyz]
        abcs = [float(v) for v in abc]
    if len(xs) != 3 or len(abcs) != 3:
        raise ValueError("need three values on each side")
    if any(v < 0 for v in xs + abcs):
        raise ValueError("six_point_check needs nonnegative entries")

    def same(u, v):
        return u == v if tol is None else abs(u - v) <= tol * max(1.0, abs(u), abs(v))

    for p in (2, 3):
        if not same(sum(v**p for v in xs), sum(v**p for v in abcs)):
            return DIFFERENT_CLASS
    answer = DOMINATES if max(xs) >= max(abcs) else "not_dominates"
    if cross_check:
        if tol is None:
            rel = compare(six_point_config(xs), six_point_config(abcs), 4)
            check = DOMINATES if rel in (DOMINATES, EQUAL) else "not_dominates"
        else:
            from .paths import numeric_decide

            nodes = [(v, 1.0) for v in xs] + [(-v, 1.0) for v in xs]
            nodes += [(v, -1.0) for v in abcs] + [(-v, -1.0) for v in abcs]
            res = numeric_decide(nodes, 4, tol)
            check = DOMINATES if res.status == "holds" else "not_dominates"
        if check != answer:
            raise AssertionError(f"six-point rule says {answer}, exact decision says {check}")
    return answer
