"""Exact decisions for ``sum w_i f(a_i) >= 0`` over all ``f`` with ``f^(k) >= 0``."""

from .criteria import Verdict, criteria_report, decide_exact
from .exactpoly import Interval, Poly, rational_parse
from .order import Configuration, compare, extremal_classify, is_singleton
from .spline import InequalityProblem, build_rk

__all__ = [
    "Configuration",
    "InequalityProblem",
    "Interval",
    "Poly",
    "Verdict",
    "build_rk",
    "compare",
    "criteria_report",
    "decide_exact",
    "extremal_classify",
    "is_singleton",
    "rational_parse",
]
