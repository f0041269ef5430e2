"""Seeded instance generators and brute-force oracles."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .criteria import decide_exact
from .divdiff import SynthFunction, apply_functional, prototype
from .exactpoly import Interval, Poly, as_rational, null_space
from .order import Configuration, power_sums
from .spline import InequalityProblem, build_rk, spline_eval

DENOMINATORS = (1, 2, 3, 4)
COEF_RANGE = 9


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    k: int
    argument_range: Interval = Interval(-5, 5)
    seed: int = 0

    def __post_init__(self):
        if not (self.n >= self.k >= 1):
            raise ValueError("need n >= k >= 1")


def random_rational(rng: random.Random, iv: Interval) -> Fraction:
    d = rng.choice(DENOMINATORS)
    lo = -((-iv.lo * d) // 1)  # ceil
    hi = (iv.hi * d) // 1
    return Fraction(rng.randint(int(lo), int(hi)), d)


def moment_matrix(args: Sequence, k: int) -> list:
    return [[a**j for a in args] for j in range(k)]


def sample_problem(spec: InstanceSpec, arguments: Optional[Sequence] = None) -> InequalityProblem:
    """Random problem whose weights annihilate ``1, x, ..., x^(k-1)``."""
    if spec.n <= spec.k:
        raise ValueError("need n > k for a nontrivial moment null space")
    rng = random.Random(spec.seed)
    if arguments is None:
        args: set = set()
        tries = 0
        while len(args) < spec.n:
            args.add(random_rational(rng, spec.argument_range))
            tries += 1
            if tries > 10000:
                raise ValueError("argument range too small for n distinct rationals")
        args = sorted(args, reverse=True)
    else:
        args = sorted((as_rational(a) for a in arguments), reverse=True)
        if len(set(args)) != len(args):
            raise ValueError("arguments must be distinct")
    basis = null_space(moment_matrix(args, spec.k))
    while True:
        coefs = [rng.randint(-COEF_RANGE, COEF_RANGE) for _ in basis]
        w = [sum((c * v[i] for c, v in zip(coefs, basis)), Fraction(0)) for i in range(len(args))]
        if any(w):
            break
    return InequalityProblem.from_pairs(zip(args, w), spec.k)


def random_synth(rng: random.Random, k: int, domain: Interval) -> SynthFunction:
    poly = Poly(rng.randint(-10, 10) for _ in range(k))
    knots = tuple(
        (random_rational(rng, domain), Fraction(rng.randint(0, 10), rng.choice(DENOMINATORS)))
        for _ in range(rng.randint(1, 6))
    )
    return SynthFunction(poly, knots, k)


_PTE = {
    3: [
        ((7, 3, 2), (6, 5, 1)),
        ((5, 4, 0), (6, 2, 1)),
        ((6, 5, 3, 0), (7, 4, 2, 1)),
    ],
    4: [
        ((11, 7, 4, 0), (10, 9, 2, 1)),
        ((17, 16, 8, 4, 0), (18, 14, 10, 2, 1)),
        ((15, 12, 10, 9, 6, 5, 3, 0), (14, 13, 11, 8, 7, 4, 2, 1)),
    ],
}


def pte_pairs(k: int) -> list:
    """Integer pairs with equal power sums ``s_1..s_{k-1}`` (Prouhet-Tarry-Escott)."""
    if k not in _PTE:
        raise ValueError(f"no PTE families stored for k = {k}")
    out = []
    src = list(_PTE[k])
    if k == 3:
        # equal sums through degree 3 imply equal sums through degree 2
        src += [p for p in _PTE[4] if len(p[0]) > 4]
    for x, y in src:
        cx, cy = Configuration(x), Configuration(y)
        if power_sums(cx, k) != power_sums(cy, k):
            raise AssertionError(f"stored pair {x} / {y} is not a degree-{k - 1} PTE pair")
        out.append((cx, cy))
    return out


def affine_image(pair: tuple, scale: Fraction, shift: Fraction) -> tuple:
    """``x -> scale*x + shift`` preserves equal power sums of every degree."""
    return tuple(Configuration(tuple(scale * v + shift for v in c.values)) for c in pair)


def grid_oracle(problem: InequalityProblem, grid_points: int) -> tuple:
    """Brute-force minimum of ``r_k`` over an equally spaced rational grid."""
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    lo, hi = problem.domain.lo, problem.domain.hi
    s = build_rk(problem, problem.k)
    best = None
    for i in range(grid_points):
        x = lo + (hi - lo) * Fraction(i, grid_points - 1)
        v = spline_eval(s, x)
        if best is None or v < best[0]:
            best = (v, x)
    return best


@dataclass(frozen=True)
class Counterexample:
    f: SynthFunction
    value: Fraction


ALL_NONNEG = "all_nonneg"


def functional_oracle(problem: InequalityProblem, trials: int, seed: int):
    """Evaluate the functional on random admissible ``f``; return a negative one if found.

    Trial 0 injects the probes the decision's necessity argument uses:
    ``-sign * x^j`` for an unbalanced moment, and the prototype at the exact
    witness point when the decision fails.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    k = problem.k
    probes = []
    for j in range(k):
        m = problem.moment(j)
        if m != 0:
            mono = Poly([0] * j + [-1 if m > 0 else 1])
            # degree < k, so +-x^j has vanishing k-th derivative
            probes.append(SynthFunction(mono, (), k))
    verdict = decide_exact(problem)
    if verdict.witness is not None:
        probes.append(prototype(verdict.witness, k))
    rng = random.Random(seed)
    for t in range(trials):
        fs = probes if t == 0 else []
        fs = fs + [random_synth(rng, k, problem.domain)]
        for f in fs:
            v = apply_functional(problem, f)
            if v < 0:
                return Counterexample(f, v)
    return ALL_NONNEG


def climb_pair(rng: random.Random, k: int, legs: int = 3) -> tuple:
    """Float pair ``(a, b)`` with ``n = k + 1`` and ``a >_k b`` by construction.

    ``b`` is uniform in ``[-5, 5]``; ``a`` comes from a few partial constant-term
    climbs of ``k``-coordinate sub-tuples, each of which increases the order.
    """
    from .paths import _poly_from_roots, _real_roots, _stratum_event

    b = sorted((rng.uniform(-5, 5) for _ in range(k + 1)), reverse=True)
    q = list(b)
    for _ in range(legs):
        top = rng.random() < 0.5
        fixed, sub = ([q[-1]], q[:-1]) if top else ([q[0]], q[1:])
        coeffs = _poly_from_roots(sub)
        ev = _stratum_event(coeffs, [("collide", fixed[0])])
        if ev is None:
            continue
        coeffs[-1] += ev[0] * rng.uniform(0.2, 0.8)
        q = sorted(fixed + list(_real_roots(coeffs)), reverse=True)
    return q, b


def interleaved_lists(rng: random.Random, n: int, iv: Interval = Interval(-5, 5)) -> tuple:
    """Descending ``a``, ``b`` with ``min(a_i, b_i) >= max(a_{i+1}, b_{i+1})``."""
    vals: set = set()
    while len(vals) < 2 * n:
        vals.add(random_rational(rng, iv))
    vals = sorted(vals, reverse=True)
    a, b = [], []
    for i in range(n):
        hi, lo = vals[2 * i], vals[2 * i + 1]
        if rng.random() < 0.5:
            hi, lo = lo, hi
        a.append(hi)
        b.append(lo)
    return a, b


def balancing_weights(rng: random.Random, a: Sequence, b: Sequence) -> Optional[list]:
    """Random weights with ``sum w (a - b) = sum w (a^2 - b^2) = 0``, or None."""
    rows = [[x - y for x, y in zip(a, b)], [x * x - y * y for x, y in zip(a, b)]]
    basis = null_space(rows)
    if not basis:
        return None
    for _ in range(20):
        coefs = [rng.randint(-COEF_RANGE, COEF_RANGE) for _ in basis]
        w = [sum((c * v[i] for c, v in zip(coefs, basis)), Fraction(0)) for i in range(len(a))]
        if any(w):
            return w
    return None


def unit_weight_pairs(rng: random.Random, count: int) -> list:
    """Unit-weight two-list instances with equal sums and square sums.

    Built from stored equal-power-sum pairs: affine images, unions of two
    pairs, and a common value added to both sides.
    """
    base = [(tuple(x.values), tuple(y.values)) for x, y in pte_pairs(3)]
    out = []
    while len(out) < count:
        x, y = rng.choice(base)
        if rng.random() < 0.3:
            x2, y2 = rng.choice(base)
            x, y = x + x2, y + y2
        scale = Fraction(rng.choice((1, 1, 2, 3)), rng.choice((1, 2)))
        shift = Fraction(rng.randint(-6, 6))
        x = [scale * v + shift for v in x]
        y = [scale * v + shift for v in y]
        if rng.random() < 0.4:
            c = rng.choice(x + y)
            x, y = x + [c], y + [c]
        if rng.random() < 0.5:
            x, y = y, x
        out.append((sorted(x, reverse=True), sorted(y, reverse=True)))
    return out
