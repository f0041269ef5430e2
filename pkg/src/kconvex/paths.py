"""Floating-point companions of the exact order: tolerance decisions, extremal
elements, increasing paths inside a power-sum class, and a Schur-type test.

Path coordinates are algebraic irrationals, so everything here is float64
with explicit tolerances; exact arithmetic stays in :mod:`kconvex.criteria`.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

CONSERVATION_TOL = 1e-8
MARGIN_TOL = 1e-8
NEWTON_TOL = 1e-10
MATCH_TOL = 1e-9
DEFAULT_STEPS = 256
GRID_POINTS = 4096


class PathError(ValueError):
    pass


class NotDominant(PathError):
    """The requested endpoints are not ordered the right way round."""


@dataclass(frozen=True)
class FloatConfig:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted((float(v) for v in self.values), reverse=True)))

    @property
    def n(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _fc(x) -> FloatConfig:
    return x if isinstance(x, FloatConfig) else FloatConfig(tuple(x))


def float_power_sums(values, k: int) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return np.array([np.sum(v**j) for j in range(1, k)])


# ---------------------------------------------------------------- decisions


def rk_values(args: np.ndarray, weights: np.ndarray, k: int, xs: np.ndarray) -> np.ndarray:
    d = args - np.asarray(xs, dtype=float)[..., None]
    if k == 1:
        return (d > 0) @ weights
    np.maximum(d, 0.0, out=d)
    return (d ** (k - 1)) @ weights


def rk_minimum(args, weights, k: int, grid: int = GRID_POINTS, refine: int = 3, candidates: int = 8) -> tuple:
    """Approximate ``min r_k`` over the argument hull: dense grid plus local refinement."""
    args = np.asarray(args, dtype=float)
    weights = np.asarray(weights, dtype=float)
    lo, hi = float(args.min()), float(args.max())
    if hi <= lo:
        return lo, 0.0
    xs = np.union1d(np.linspace(lo, hi, grid), args)
    vals = rk_values(args, weights, k, xs)
    # refine around the lowest few local minima, all at once
    mid = vals[1:-1]
    interior = np.flatnonzero((mid <= vals[:-2]) & (mid <= vals[2:])) + 1
    idx = np.union1d(interior, [int(np.argmin(vals))])
    idx = idx[np.argsort(vals[idx], kind="stable")[:candidates]]
    left = xs[np.maximum(idx - 1, 0)]
    right = xs[np.minimum(idx + 1, len(xs) - 1)]
    best_x, best_v = float(xs[idx[0]]), float(vals[idx[0]])
    frac = np.linspace(0.0, 1.0, 65)
    for _ in range(refine):
        fine = left[:, None] + (right - left)[:, None] * frac
        fv = rk_values(args, weights, k, fine)
        j = np.argmin(fv, axis=1)
        rows = np.arange(len(idx))
        r = int(np.argmin(fv[rows, j]))
        if fv[r, j[r]] < best_v:
            best_x, best_v = float(fine[r, j[r]]), float(fv[r, j[r]])
        step = (right - left) / 64
        centre = fine[rows, j]
        left, right = centre - step, centre + step
    return best_x, best_v


@dataclass(frozen=True)
class NumericDecision:
    status: str
    min_value: float
    argmin: Optional[float] = None
    moment_index: Optional[int] = None
    moment_residual: Optional[float] = None


def numeric_decide(nodes: Sequence, k: int, tol: float = 1e-9, grid: int = GRID_POINTS) -> NumericDecision:
    """Tolerance version of the exact decision for float ``(argument, weight)`` pairs."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    args = np.array([float(a) for a, _ in nodes])
    weights = np.array([float(w) for _, w in nodes])
    for j in range(k):
        powers = args**j
        m = float(np.dot(weights, powers))
        scale = max(1.0, float(np.dot(np.abs(weights), np.abs(powers))))
        if abs(m) > tol * scale:
            return NumericDecision("moment_violation", float("nan"), moment_index=j, moment_residual=m)
    if len(args) == 0:
        return NumericDecision("holds", 0.0)
    x, v = rk_minimum(args, weights, k, grid)
    return NumericDecision("holds" if v >= -tol else "fails", v, x)


def dominance_margin(upper, lower, k: int, grid: int = GRID_POINTS) -> float:
    """``min r_k`` of ``sum f(upper) - sum f(lower)``; nonnegative iff ``upper >_k lower``."""
    up, lo = np.asarray(upper, dtype=float), np.asarray(lower, dtype=float)
    args = np.concatenate([up, lo])
    weights = np.concatenate([np.ones(len(up)), -np.ones(len(lo))])
    if np.array_equal(np.sort(up), np.sort(lo)):
        return 0.0
    return rk_minimum(args, weights, k, grid)[1]


def numeric_dominates(a, b, k: int, tol: float = 1e-9) -> bool:
    a, b = _fc(a).array(), _fc(b).array()
    nodes = [(x, 1.0) for x in a] + [(x, -1.0) for x in b]
    return numeric_decide(nodes, k, tol).status == "holds"


# ---------------------------------------------------------------- results


@dataclass
class PathResult:
    samples: list
    k: int
    conservation_error: float = 0.0
    monotonicity_margin: float = 0.0
    stopped_early: bool = False
    note: str = ""

    @property
    def start(self) -> FloatConfig:
        return self.samples[0][1]

    @property
    def end(self) -> FloatConfig:
        return self.samples[-1][1]

    def to_csv(self) -> str:
        n = self.samples[0][1].n
        lines = ["t," + ",".join(f"x{i + 1}" for i in range(n))]
        for t, c in self.samples:
            lines.append(",".join(f"{v:.12g}" for v in (t,) + c.values))
        return "\n".join(lines) + "\n"


def _finish(configs: list, k: int, note: str = "", stopped_early: bool = False, margin_k: Optional[int] = None) -> PathResult:
    """Attach uniform times, conservation error and consecutive dominance margins."""
    m = len(configs)
    samples = [(i / (m - 1) if m > 1 else 0.0, FloatConfig(c)) for i, c in enumerate(configs)]
    mk = margin_k or k
    ref = float_power_sums(samples[0][1].values, mk)
    cons = 0.0
    margin = 0.0
    for idx, (_, c) in enumerate(samples):
        cons = max(cons, float(np.max(np.abs(float_power_sums(c.values, mk) - ref))) if mk > 1 else 0.0)
        if idx:
            margin = min(margin, dominance_margin(c.values, samples[idx - 1][1].values, mk))
    return PathResult(samples, mk, cons, margin, stopped_early, note)


def _cancel_common(a: list, b: list, tol: float = MATCH_TOL) -> tuple:
    """Remove matching values (within ``tol``) from both lists; return (a', b', common)."""
    a, b = sorted(a, reverse=True), sorted(b, reverse=True)
    common = []
    i = j = 0
    ra, rb = [], []
    while i < len(a) and j < len(b):
        if abs(a[i] - b[j]) <= tol:
            common.append(b[j])
            i += 1
            j += 1
        elif a[i] > b[j]:
            ra.append(a[i])
            i += 1
        else:
            rb.append(b[j])
            j += 1
    ra.extend(a[i:])
    rb.extend(b[j:])
    return ra, rb, common


def _check_class(a: FloatConfig, b: FloatConfig, k: int, tol: float):
    if a.n != b.n:
        raise PathError("configurations differ in length")
    pa, pb = float_power_sums(a.values, k), float_power_sums(b.values, k)
    scale = np.maximum(1.0, np.abs(pa))
    if np.any(np.abs(pa - pb) > tol * scale * 10):
        raise PathError(f"power sums differ: {pa} vs {pb}")


# ---------------------------------------------------------------- k = 3


def triple_at(s1: float, s2: float, v: float) -> tuple:
    """The sorted triple with sum ``s1``, square sum ``s2`` and middle value ``v``."""
    s = s1 - v
    disc = 2 * (s2 - v * v) - s * s
    r = np.sqrt(max(disc, 0.0))
    return ((s + r) / 2, v, (s - r) / 2)


def _triple_middle_range(s1: float, s2: float) -> tuple:
    """Middle values of the maximal (v = w) and minimal (u = v) triples."""
    # 6v^2 - 4 s1 v + s1^2 - s2 = 0
    disc = 16 * s1 * s1 - 24 * (s1 * s1 - s2)
    r = np.sqrt(max(disc, 0.0))
    return (4 * s1 - r) / 12, (4 * s1 + r) / 12


def _triple_events(s1, s2, v0, v_end, targets) -> Optional[float]:
    """Smallest middle value in ``(v0, v_end]`` where the triple meets a target."""
    cands = []
    for b in targets:
        cands.append(b)
        # b as an outer coordinate: the other two have sum s1-b, square sum s2-b^2
        s, q = s1 - b, s2 - b * b
        disc = s * s - 2 * (s * s - q)
        if disc >= -1e-12:
            r = np.sqrt(max(disc, 0.0))
            cands.extend(((s + r) / 2, (s - r) / 2))
    best = None
    span = max(1.0, abs(v_end))
    for v in cands:
        if v0 + 1e-12 * span < v <= v_end + 1e-12 * span:
            v = min(v, v_end)
            tri = triple_at(s1, s2, v)
            if any(abs(c - b) <= 1e-7 * max(1.0, abs(b)) for c in tri for b in targets):
                if best is None or v < best:
                    best = v
    return best


def increasing_path_k3(a, b, steps: int = DEFAULT_STEPS, tol: float = 1e-9) -> PathResult:
    """Path from ``b`` up to ``a`` in the order ``>_3``, moving three coordinates at a time."""
    a, b = _fc(a), _fc(b)
    _check_class(a, b, 3, tol)
    if not numeric_dominates(a, b, 3, tol):
        raise NotDominant("a does not dominate b at order 3")
    cur = list(a.values)
    down = [list(cur)]  # walked from a towards b
    while True:
        moving, rest_b, common = _cancel_common(cur, list(b.values))
        if not moving:
            break
        if len(moving) < 3:
            raise PathError(f"leftover coordinates {moving} vs {rest_b} share power sums but differ")
        if not numeric_dominates(moving, rest_b, 3, tol):
            raise PathError(f"dominance lost on reduced pair {moving} / {rest_b}")
        b1 = rest_b[0]
        m = next((i for i, v in enumerate(moving) if b1 > v), None)
        if m is None or m == 0 or m + 1 >= len(moving):
            raise PathError(f"cannot pick a triple around index {m} in {moving}")
        tri = moving[m - 1 : m + 2]
        others = moving[: m - 1] + moving[m + 2 :]
        s1, s2 = sum(tri), sum(t * t for t in tri)
        v0 = tri[1]
        v_end = max(_triple_middle_range(s1, s2)[1], v0)
        v_hit = _triple_events(s1, s2, v0, v_end, rest_b)
        if v_hit is None:
            raise PathError(f"stalled deformation of triple {tri}")
        for v in np.linspace(v0, v_hit, steps + 1)[1:]:
            down.append(common + others + list(triple_at(s1, s2, v)))
        last = list(triple_at(s1, s2, v_hit))
        for i, c in enumerate(last):
            for t in rest_b:
                if abs(c - t) <= 1e-7 * max(1.0, abs(t)):
                    last[i] = t
        cur = sorted(common + others + last, reverse=True)
        down[-1] = cur
    return _finish(down[::-1], 3)


# ---------------------------------------------------------------- n = k + 1


def _poly_from_roots(roots) -> np.ndarray:
    return np.poly(np.asarray(roots, dtype=float))


def _real_roots(coeffs: np.ndarray) -> np.ndarray:
    r = np.roots(coeffs)
    r = np.sort(r.real)[::-1]
    # polish simple roots with a couple of Newton steps
    d = np.polyder(coeffs)
    for _ in range(2):
        fp = np.polyval(d, r)
        ok = np.abs(fp) > 1e-6
        r = np.where(ok, r - np.polyval(coeffs, r) / np.where(ok, fp, 1.0), r)
    return np.sort(r)[::-1]


def _stratum_event(coeffs: np.ndarray, points: Sequence) -> tuple:
    """First constant-term shift (moving down from 0) where a root hits a point
    or two roots merge; returns (shift, kind, point)."""
    events = []
    for kind, p in points:
        events.append((-np.polyval(coeffs, p), kind, p))
    for c in np.roots(np.polyder(coeffs)):
        if abs(c.imag) < 1e-9:
            events.append((-np.polyval(coeffs, c.real), "boundary", c.real))
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    valid = [e for e in events if e[0] < -1e-13 * scale]
    if not valid:
        return None
    return max(valid, key=lambda e: e[0])


def _stratum_walk(sub: list, shift_end: float, steps: int) -> list:
    """Roots of ``P + shift`` for ``shift`` from 0 to ``shift_end``."""
    coeffs = _poly_from_roots(sub)
    out = []
    for s in np.linspace(0.0, shift_end, steps + 1)[1:]:
        c = coeffs.copy()
        c[-1] += s
        out.append(list(_real_roots(c)))
    return out


def _n_equals_k_leg(q_sub: list, a_sub: list, fixed: list, steps: int) -> list:
    """Move ``q_sub`` to ``a_sub`` inside their n = k stratum by the constant term."""
    cq = _poly_from_roots(q_sub)
    ca = _poly_from_roots(a_sub)
    shift = ca[-1] - cq[-1]
    configs = []
    for roots in _stratum_walk(q_sub, shift, steps):
        configs.append(fixed + roots)
    if configs:
        configs[-1] = fixed + list(a_sub)
    return configs


def increasing_path_nk1(a, b, k: int, steps: int = DEFAULT_STEPS, tol: float = 1e-9, max_legs: int = 400) -> PathResult:
    """Path from ``b`` up to ``a`` when ``n = k + 1``.

    Climb from ``b`` moving ``k`` coordinates at a time (top ``k`` with the
    minimum frozen, or bottom ``k`` with the maximum frozen) until the largest
    coordinate reaches ``a``'s largest or the smallest reaches ``a``'s
    smallest; then cancel that coordinate and finish inside the ``n = k``
    stratum. When ``a`` is the maximal element the alternating climb only
    converges to it, so the walk also stops once it is within ``tol`` of ``a``.
    """
    a, b = _fc(a), _fc(b)
    if a.n != k + 1:
        raise PathError(f"increasing_path_nk1 needs n = k + 1 = {k + 1}, got {a.n}")
    _check_class(a, b, k, tol)
    if not numeric_dominates(a, b, k, tol):
        raise NotDominant(f"a does not dominate b at order {k}")
    target = list(a.values)
    q = list(b.values)
    configs = [list(q)]
    if a.values == b.values:
        return _finish(configs, k)
    phase = 0
    ref = None
    for _ in range(max_legs):
        if max(abs(u - v) for u, v in zip(q, target)) <= tol:
            configs[-1] = list(target)
            return _finish(configs, k, note="converged to a")
        ra, rq, common = _cancel_common(target, q)
        if common:
            configs.extend(_n_equals_k_leg(rq, ra, common, steps))
            return _finish(configs, k)
        if phase == 0:
            fixed, sub = [q[-1]], q[:-1]
            points = [("target", target[0]), ("collide", q[-1])]
        else:
            fixed, sub = [q[0]], q[1:]
            points = [("target", target[-1]), ("collide", q[0])]
        ev = _stratum_event(_poly_from_roots(sub), points)
        if ev is None:
            phase ^= 1
            continue
        shift, kind, point = ev
        ref = ref or abs(shift)
        walk = _stratum_walk(sub, shift, max(8, int(np.ceil(steps * abs(shift) / ref))))
        if kind == "target":
            last = walk[-1]
            i = int(np.argmin([abs(r - point) for r in last]))
            last[i] = point
        for roots in walk:
            configs.append(sorted(fixed + roots, reverse=True))
        q = configs[-1]
        if kind != "target":
            phase ^= 1
    raise PathError(f"no coordinate matched a after {max_legs} legs")


# ---------------------------------------------------------------- extremal elements


def _segment_layouts(n: int, k: int, role: str):
    """Segment lengths for the extremal block pattern, fullest layouts first."""
    nseg = k - 1
    short = 1 if role == "maximal" else 0
    for empties in range(nseg):
        layouts = []
        for lengths in itertools.product(range(n + 1), repeat=nseg):
            if sum(lengths) != n:
                continue
            if sum(1 for L in lengths if L == 0) != empties:
                continue
            if any(L > 1 for s, L in enumerate(lengths, start=1) if s % 2 == short):
                continue
            layouts.append(lengths)
        yield from layouts


def _newton_segments(lengths, init, target, tol=NEWTON_TOL, iters=100):
    L = np.asarray(lengths, dtype=float)
    y = np.asarray(init, dtype=float)
    powers = np.arange(1, len(target) + 1)
    for _ in range(iters):
        F = np.array([np.dot(L, y**p) for p in powers]) - target
        res = float(np.max(np.abs(F)))
        if res < tol:
            return y, res
        J = np.array([p * L * y ** (p - 1) for p in powers])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        t = 1.0
        while t > 1e-6:
            y_new = y + t * step
            F_new = np.array([np.dot(L, y_new**p) for p in powers]) - target
            if np.max(np.abs(F_new)) < res:
                break
            t /= 2
        y = y + t * step
    F = np.array([np.dot(L, y**p) for p in powers]) - target
    return y, float(np.max(np.abs(F)))


def find_extremal_numeric(x, k: int, role: str = "maximal") -> FloatConfig:
    """Solve for the maximal/minimal element of the class of ``x`` at order ``k``."""
    if role not in ("maximal", "minimal"):
        raise ValueError("role is 'maximal' or 'minimal'")
    x = _fc(x)
    if x.n < 2 or k < 3:
        raise ValueError("need n >= 2 and k >= 3")
    vals = x.array()
    if np.all(vals == vals[0]):
        return x
    target = float_power_sums(vals, k)
    tried = []
    for lengths in _segment_layouts(x.n, k, role):
        nz = [L for L in lengths if L]
        bounds = np.cumsum([0] + nz)
        init = [vals[bounds[i] : bounds[i + 1]].mean() for i in range(len(nz))]
        y, res = _newton_segments(nz, init, target)
        tried.append((lengths, res))
        if res < NEWTON_TOL and all(y[i] > y[i + 1] for i in range(len(y) - 1)):
            out = []
            for L, v in zip(nz, y):
                out.extend([float(v)] * L)
            return FloatConfig(out)
    raise PathError(f"no real {role} element found for {x.values}; tried {tried[:6]}")


# ---------------------------------------------------------------- ODE demo


def _ode_rhs(p: np.ndarray) -> np.ndarray:
    x, y, z = p
    return np.array([
        1.0 / (x * (x - y) * (x - z)),
        1.0 / (y * (y - x) * (y - z)),
        1.0 / (z * (z - x) * (z - y)),
    ])


def _project(p: np.ndarray, s2: float, s3: float) -> np.ndarray:
    for _ in range(3):
        g = np.array([np.sum(p**2) - s2, np.sum(p**3) - s3])
        J = np.vstack([2 * p, 3 * p**2])
        p = p - J.T @ np.linalg.solve(J @ J.T, g)
    return p


def _gap(p: np.ndarray) -> float:
    x, y, z = p
    return min(abs(x), abs(y), abs(z), abs(x - y), abs(x - z), abs(y - z))


def ode_demo_path(x0: Sequence, t_span: tuple = (0.0, 0.1), steps: int = DEFAULT_STEPS, min_gap: float = 1e-3) -> PathResult:
    """Integrate ``dx/dt = 1/(x(x-y)(x-z))`` (cyclically) on the symmetric six-point vector.

    RK4 with a projection back onto the ``(sum x^2, sum x^3)`` level set after
    every step; stops early if coordinates come within ``min_gap`` of
    colliding or of zero, or if a step is too long for the current gaps.
    """
    p = np.asarray(x0, dtype=float)
    if p.shape != (3,) or _gap(p) == 0:
        raise PathError(f"x0 needs distinct nonzero coordinates, got {tuple(x0)}")
    s2, s3 = float(np.sum(p**2)), float(np.sum(p**3))
    t0, t1 = t_span
    h = (t1 - t0) / steps
    configs = [_six(p)]
    stopped = False
    for _ in range(steps):
        k1 = _ode_rhs(p)
        k2 = _ode_rhs(p + h / 2 * k1)
        k3 = _ode_rhs(p + h / 2 * k2)
        k4 = _ode_rhs(p + h * k3)
        nxt = _project(p + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), s2, s3)
        # a step longer than half the gap it moves in has lost accuracy (or jumped a collision)
        if (
            not np.all(np.isfinite(nxt))
            or _gap(nxt) < min_gap
            or np.max(np.abs(nxt - p)) > 0.5 * _gap(p)
            or np.any(np.sign(_differences(nxt)) != np.sign(_differences(p)))
        ):
            stopped = True
            break
        p = nxt
        configs.append(_six(p))
    res = _finish(configs, 4, note="ode", stopped_early=stopped)
    return res


def _differences(p: np.ndarray) -> np.ndarray:
    x, y, z = p
    return np.array([x, y, z, x - y, x - z, y - z])


def _six(p: np.ndarray) -> list:
    return list(p) + list(-p)


# ---------------------------------------------------------------- Schur-type test


@dataclass(frozen=True)
class SchurResult:
    passed: bool
    witness: Optional[tuple] = None
    value: Optional[float] = None
    skipped: tuple = field(default=())


def schur3_value(grad: Sequence, x: Sequence) -> float:
    x1, x2, x3 = x
    g1, g2, g3 = grad
    return ((g1 - g2) / (x1 - x2) - (g2 - g3) / (x2 - x3)) * (x1 - x3)


def schur3_check(gradient_provider: Callable, samples: Sequence, tol: float = 1e-12) -> SchurResult:
    """Check the third-order Schur condition at each sample point."""
    skipped = []
    for pt in samples:
        pt = tuple(float(v) for v in pt)
        if len(set(pt)) < 3:
            warnings.warn(f"skipping sample {pt}: coincident coordinates", RuntimeWarning)
            skipped.append(pt)
            continue
        v = schur3_value(gradient_provider(pt), pt)
        if v < -tol:
            return SchurResult(False, pt, v, tuple(skipped))
    return SchurResult(True, skipped=tuple(skipped))
