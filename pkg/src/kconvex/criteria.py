"""Exact decision of ``sum_i w_i f(a_i) >= 0`` and the catalog of sufficient criteria.

:func:`decide_exact` is complete: vanishing moments ``sum_i w_i a_i^j`` for
``j < k`` plus nonnegativity of the spline ``r_k``.  Everything else here is a
cheaper test that is only sufficient (counting, Popoviciu windows, two-list
tests) or is exact on a restricted family (``k = 3``, ``n <= k + 2``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .divdiff import (
    IdentityHolds,
    IdentityMismatch,
    SynthFunction,
    first_moment_violation,
    hammer_decompose,
    synth_eval,
)
from .exactpoly import Witness, as_rational
from .spline import (
    InequalityProblem,
    build_rk,
    partial_sums,
    sign_change_report,
    spline_nonneg,
)

HOLDS = "holds"
FAILS = "fails"
MOMENT_VIOLATION = "moment_violation"

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: str
    witness: Optional[Fraction] = None
    witness_value: Optional[Fraction] = None
    moment_index: Optional[int] = None
    moment_value: Optional[Fraction] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass(frozen=True)
class Outcome:
    """Result of one criterion; ``detail`` carries the violated index/value."""

    criterion: str
    status: str
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass(frozen=True)
class MomentsOk:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class MomentViolated:
    j: int
    value: Fraction

    def __bool__(self):
        return False


def check_moments(problem: InequalityProblem):
    bad = first_moment_violation(problem)
    return MomentsOk() if bad is None else MomentViolated(*bad)


def decide_exact(problem: InequalityProblem) -> Verdict:
    m = check_moments(problem)
    if not m:
        return Verdict(MOMENT_VIOLATION, "moment", moment_index=m.j, moment_value=m.value)
    res = spline_nonneg(build_rk(problem, problem.k), problem.domain)
    if isinstance(res, Witness):
        return Verdict(FAILS, "exact-spline", witness=res.x, witness_value=res.value)
    return Verdict(HOLDS, "exact-spline")


def counting_criterion(problem: InequalityProblem) -> Outcome:
    """Sign-change counting: pass if any of the three sequences changes sign rarely enough."""
    k = problem.k
    if problem.n < 2 or problem.weights[0] <= 0 or not check_moments(problem):
        return Outcome("counting", NOT_APPLICABLE)
    rep = sign_change_report(problem)
    fired = []
    if rep.weight_changes <= k:
        fired.append("weights")
    if rep.partial_sum_changes <= k - 1:
        fired.append("partial_sums")
    if rep.r2_value_changes <= k - 2:
        fired.append("r2_values")
    detail = {
        "weight_changes": rep.weight_changes,
        "partial_sum_changes": rep.partial_sum_changes,
        "r2_value_changes": rep.r2_value_changes,
        "fired": fired,
    }
    return Outcome("counting", PASS if fired else INCONCLUSIVE, detail)


def popoviciu_criterion(problem: InequalityProblem, anchors: Sequence = ()) -> Outcome:
    """Sliding-window test: every window inner sum must be nonnegative."""
    if not check_moments(problem):
        return Outcome("popoviciu", NOT_APPLICABLE, {"reason": "moments"})
    if problem.n + len(anchors) < problem.k + 1:
        return Outcome("popoviciu", NOT_APPLICABLE, {"reason": "too few nodes"})
    dec = hammer_decompose(problem, anchors)
    bad = dec.first_violation
    if bad is None:
        return Outcome("popoviciu", PASS, {"coefficients": list(dec.coefficients)})
    return Outcome("popoviciu", FAIL, {"window": bad[0], "value": bad[1]})


class CriterionError(ValueError):
    pass


def k3_criterion(problem: InequalityProblem) -> Outcome:
    """Exact test for ``k = 3``: check the minimum of every quadratic piece
    whose vertex lies inside its interval."""
    if problem.k != 3:
        raise CriterionError("k3_criterion needs k = 3")
    m = check_moments(problem)
    if not m:
        return Outcome("k3", MOMENT_VIOLATION, {"j": m.j, "value": m.value})
    s0 = s1 = s2 = Fraction(0)
    a = problem.args
    for j, (aj, wj) in enumerate(problem.nodes[:-1]):
        s0 += wj
        s1 += wj * aj
        s2 += wj * aj * aj
        if s0 * aj >= s1 >= s0 * a[j + 1] and s0 * s2 < s1 * s1:
            return Outcome("k3", FAIL, {"j": j + 1, "value": s0 * s2 - s1 * s1})
    return Outcome("k3", PASS)


def endpoint_criterion(problem: InequalityProblem) -> Outcome:
    """Sign conditions on the extreme weights, exact when ``n <= k + 2``."""
    n, k = problem.n, problem.k
    if not check_moments(problem) or n > k + 2:
        return Outcome("endpoint", NOT_APPLICABLE)
    w = problem.weights
    if n <= k:
        # a nonzero Vandermonde null vector needs n > k, so only the empty problem gets here
        ok = all(x == 0 for x in w)
    elif n == k + 1:
        ok = w[0] >= 0
    else:
        ok = w[0] >= 0 and (-1) ** k * w[-1] >= 0
    return Outcome("endpoint", PASS if ok else FAIL, {"n": n})


def _descending(xs) -> bool:
    return all(x >= y for x, y in zip(xs, xs[1:]))


def _two_list_inputs(a_list, b_list, weights=None):
    a = [as_rational(x) for x in a_list]
    b = [as_rational(x) for x in b_list]
    if len(a) != len(b):
        raise ValueError("a and b lists differ in length")
    if weights is None:
        w = [Fraction(1)] * len(a)
    else:
        w = [as_rational(x) for x in weights]
        if len(w) != len(a):
            raise ValueError("weights differ in length from a and b")
    return a, b, w


def _interleaved(a, b, i) -> bool:
    return min(a[i], b[i]) >= max(a[i + 1], b[i + 1])


def _product_gap(a, b, w, j) -> Fraction:
    """``sum_{i<=j} w_i[(a_i-a_{j+1})(a_i-b_{j+1}) - (b_i-a_{j+1})(b_i-b_{j+1})]``, 0-based ``j``."""
    p, q = a[j + 1], b[j + 1]
    return sum(
        (w[i] * ((a[i] - p) * (a[i] - q) - (b[i] - p) * (b[i] - q)) for i in range(j + 1)),
        Fraction(0),
    )


def small_hammer(a_list, b_list, weights) -> Outcome:
    """Two-list test for ``sum w f(a) >= sum w f(b)`` over ``f''' >= 0``."""
    a, b, w = _two_list_inputs(a_list, b_list, weights)
    n = len(a)
    if not (_descending(a) and _descending(b)) or not all(_interleaved(a, b, i) for i in range(n - 1)):
        return Outcome("small_hammer", NOT_APPLICABLE, {"reason": "interleaving"})
    return _two_list_conditions("small_hammer", a, b, w)


def _two_list_conditions(name, a, b, w) -> Outcome:
    for power in (1, 2):
        lhs = sum((wi * ai**power for wi, ai in zip(w, a)), Fraction(0))
        rhs = sum((wi * bi**power for wi, bi in zip(w, b)), Fraction(0))
        if lhs != rhs:
            return Outcome(name, FAIL, {"moment": power, "value": lhs - rhs})
    for j in range(len(a) - 1):
        gap = _product_gap(a, b, w, j)
        if gap < 0:
            return Outcome(name, FAIL, {"j": j + 1, "value": gap})
    return Outcome(name, PASS)


def superize(a_list, b_list) -> Outcome:
    """Unit-weight variant tolerating repeated adjacent pairs ``{a_i, b_i} = {a_{i+1}, b_{i+1}}``."""
    a, b, w = _two_list_inputs(a_list, b_list)
    n = len(a)
    if not (_descending(a) and _descending(b)):
        return Outcome("superize", NOT_APPLICABLE, {"reason": "unsorted"})
    for i in range(n - 1):
        if not (_interleaved(a, b, i) or sorted((a[i], b[i])) == sorted((a[i + 1], b[i + 1]))):
            return Outcome("superize", NOT_APPLICABLE, {"reason": "interleaving", "i": i + 1})
    # sum_{i<=j}(a_i-a_j)(a_i-b_j) >= ... has a vanishing i = j term, so it is
    # the product-gap condition shifted by one index
    return _two_list_conditions("superize", a, b, w)


def merged_two_list_problem(a_list, b_list, weights=None, k: int = 3) -> InequalityProblem:
    """``sum w f(a) - sum w f(b)`` as a single node list."""
    a, b, w = _two_list_inputs(a_list, b_list, weights)
    pairs = [(x, wi) for x, wi in zip(a, w)] + [(x, -wi) for x, wi in zip(b, w)]
    return InequalityProblem.from_pairs(pairs, k)


def abel_identity_check(a_list, b_list, weights, f: SynthFunction):
    """Check the double summation-by-parts identity for ``sum w (f(a) - f(b))``.

    Returns :class:`IdentityHolds`, :class:`IdentityMismatch`, or a
    not-applicable :class:`Outcome` when a divided-difference denominator
    ``a_j - b_j`` or ``a_j + b_j - a_{j+1} - b_{j+1}`` vanishes.
    """
    a, b, w = _two_list_inputs(a_list, b_list, weights)
    n = len(a)
    for power in (1, 2):
        if sum(wi * (x**power - y**power) for wi, x, y in zip(w, a, b)) != 0:
            return Outcome("abel", NOT_APPLICABLE, {"reason": "moments", "power": power})
    if any(x == y for x, y in zip(a, b)) or any(
        a[j] + b[j] == a[j + 1] + b[j + 1] for j in range(n - 1)
    ):
        return Outcome("abel", NOT_APPLICABLE, {"reason": "zero denominator"})
    fa = [synth_eval(f, x) for x in a]
    fb = [synth_eval(f, x) for x in b]
    lhs = sum((wi * (x - y) for wi, x, y in zip(w, fa, fb)), Fraction(0))

    slope = [(fa[j] - fb[j]) / (a[j] - b[j]) for j in range(n)]
    curv = [(slope[j] - slope[j + 1]) / (a[j] + b[j] - a[j + 1] - b[j + 1]) for j in range(n - 1)]
    curv.append(Fraction(0))

    # first summation: sum_j U_j (slope_j - slope_{j+1}), U_j = sum_{i<=j} w_i (a_i - b_i)
    u = Fraction(0)
    once = Fraction(0)
    for j in range(n):
        u += w[j] * (a[j] - b[j])
        nxt = slope[j + 1] if j + 1 < n else Fraction(0)
        once += u * (slope[j] - nxt)
    if once != lhs:
        return IdentityMismatch(lhs, once)

    twice = Fraction(0)
    for j in range(n - 1):
        twice += _product_gap(a, b, w, j) * (curv[j] - curv[j + 1])
    return IdentityHolds(lhs) if twice == lhs else IdentityMismatch(lhs, twice)


@dataclass(frozen=True)
class CriteriaReport:
    verdict: Verdict
    outcomes: tuple

    @property
    def consistent(self) -> bool:
        """No sufficient criterion passes against an exact ``fails``."""
        if self.verdict.status != FAILS:
            return True
        return not any(o.passed for o in self.outcomes)

    def outcome(self, name: str) -> Optional[Outcome]:
        return next((o for o in self.outcomes if o.criterion == name), None)


CRITERIA = ("counting", "popoviciu", "k3", "endpoint")


def run_criterion(name: str, problem: InequalityProblem) -> Outcome:
    if name == "counting":
        return counting_criterion(problem)
    if name == "popoviciu":
        return popoviciu_criterion(problem)
    if name == "k3":
        if problem.k != 3:
            return Outcome("k3", NOT_APPLICABLE, {"reason": "k != 3"})
        return k3_criterion(problem)
    if name == "endpoint":
        return endpoint_criterion(problem)
    raise ValueError(f"unknown criterion {name!r}")


def criteria_report(problem: InequalityProblem, names: Sequence = CRITERIA) -> CriteriaReport:
    verdict = decide_exact(problem)
    if verdict.status == MOMENT_VIOLATION:
        return CriteriaReport(verdict, tuple(Outcome(n, NOT_APPLICABLE, {"reason": "moments"}) for n in names))
    report = CriteriaReport(verdict, tuple(run_criterion(n, problem) for n in names))
    if not report.consistent:
        raise AssertionError(f"sufficient criterion passed on a failing problem: {problem}")
    return report


def partial_sum_lower_bound_ok(problem: InequalityProblem) -> bool:
    """With vanishing moments below ``k`` the partial sums change sign ``>= k - 1`` times."""
    from .spline import count_sign_changes

    if not check_moments(problem) or problem.n == 0:
        return True
    return count_sign_changes(partial_sums(problem)) >= problem.k - 1
