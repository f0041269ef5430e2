import math
import random
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from kconvex.criteria import decide_exact
from kconvex.order import BOTH, MAXIMAL, MINIMAL, difference_problem, extremal_classify
from kconvex.paths import (
    FloatConfig,
    NotDominant,
    PathError,
    dominance_margin,
    find_extremal_numeric,
    float_power_sums,
    increasing_path_k3,
    increasing_path_nk1,
    numeric_decide,
    numeric_dominates,
    ode_demo_path,
    schur3_check,
)
from kconvex.spline import build_rk, spline_min
from kconvex.testgen import InstanceSpec, climb_pair, sample_problem

T_MAX = 2 - math.sqrt(3) / 3
T_MIN = 2 + math.sqrt(3) / 3


def float_nodes(problem):
    return [(float(a), float(w)) for a, w in problem.nodes]


def test_float_config_sorts():
    c = FloatConfig((1, 3, 2))
    assert c.values == (3.0, 2.0, 1.0) and c.n == 3


def test_numeric_decide_examples(six_node):
    assert numeric_decide(float_nodes(six_node), 3).status == "holds"
    neg = numeric_decide(float_nodes(six_node.negated()), 3)
    assert neg.status == "fails" and abs(neg.min_value + 1.5) < 1e-9
    nodes = float_nodes(six_node)
    nodes[0] = (nodes[0][0], nodes[0][1] + 0.1)
    res = numeric_decide(nodes, 3)
    assert res.status == "moment_violation" and res.moment_index == 0
    with pytest.raises(ValueError):
        numeric_decide(nodes, 3, tol=0)


def test_numeric_decide_agrees_with_exact():
    rng = random.Random(21)
    compared = 0
    for seed in range(200):
        k = rng.randint(1, 5)
        p = sample_problem(InstanceSpec(rng.randint(k + 1, 8), k, seed=seed))
        exact_min = spline_min(build_rk(p, k), p.domain)[1]
        if abs(exact_min) <= 1e-6:
            continue
        compared += 1
        assert numeric_decide(float_nodes(p), k, 1e-9).status == decide_exact(p).status
    assert compared > 100


def test_extremal_numeric_three_two_one():
    mx = find_extremal_numeric((3, 2, 1), 3, "maximal")
    assert np.allclose(mx.values, (6 - 2 * T_MAX, T_MAX, T_MAX), atol=1e-9, rtol=0)
    mn = find_extremal_numeric((3, 2, 1), 3, "minimal")
    assert np.allclose(mn.values, (T_MIN, T_MIN, 6 - 2 * T_MIN), atol=1e-9, rtol=0)
    assert find_extremal_numeric((2, 2, 2), 3, "minimal").values == (2.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        find_extremal_numeric((3, 2, 1), 2)
    with pytest.raises(ValueError):
        find_extremal_numeric((3, 2, 1), 3, "largest")


@pytest.mark.parametrize("k", [3, 4])
def test_extremal_numeric_classifies(k):
    rng = random.Random(k)
    for _ in range(8):
        x = [rng.uniform(-5, 5) for _ in range(rng.randint(k, k + 3))]
        for role, ok in (("maximal", (MAXIMAL, BOTH)), ("minimal", (MINIMAL, BOTH))):
            e = find_extremal_numeric(x, k, role)
            assert np.max(np.abs(float_power_sums(e.values, k) - float_power_sums(x, k))) < 1e-9
            exact = [F(v) for v in e.values]
            assert extremal_classify(exact, k).role in ok
            if role == "maximal":
                assert numeric_dominates(e, x, k)


def check_path(res, a, b, tol=1e-8):
    assert res.conservation_error <= tol
    assert res.monotonicity_margin >= -tol
    assert np.allclose(res.start.values, sorted(b, reverse=True), atol=1e-9, rtol=0)
    assert np.allclose(res.end.values, sorted(a, reverse=True), atol=1e-9, rtol=0)
    ts = [t for t, _ in res.samples]
    assert ts[0] == 0 and ts[-1] == 1 and all(s < t for s, t in zip(ts, ts[1:]))


def test_k3_path_pte_pair():
    res = increasing_path_k3((7, 3, 2), (6, 5, 1))
    check_path(res, (7, 3, 2), (6, 5, 1), tol=1e-9)


def test_k3_path_to_maximal_element():
    top = (6 - 2 * T_MAX, T_MAX, T_MAX)
    res = increasing_path_k3(top, (3, 2, 1))
    assert res.monotonicity_margin >= -1e-9
    check_path(res, top, (3, 2, 1))


def test_k3_path_trivial_and_errors():
    res = increasing_path_k3((3, 2, 1), (3, 2, 1))
    assert len(res.samples) == 1
    with pytest.raises(NotDominant):
        increasing_path_k3((6, 5, 1), (7, 3, 2))
    with pytest.raises(PathError):
        increasing_path_k3((7, 3, 2), (1, 2, 3))


def test_nk1_path_pte_pair():
    a, b = (7, 4, 2, 1), (6, 5, 3, 0)
    assert decide_exact(difference_problem(a, b, 3)).holds
    res = increasing_path_nk1(a, b, 3)
    assert res.monotonicity_margin >= -1e-9
    check_path(res, a, b)


def test_nk1_path_errors():
    assert len(increasing_path_nk1((7, 4, 2, 1), (7, 4, 2, 1), 3).samples) == 1
    with pytest.raises(PathError):
        increasing_path_nk1((7, 4, 2, 1), (6, 5, 3, 1), 3)
    with pytest.raises(PathError):
        increasing_path_nk1((7, 3, 2), (6, 5, 1), 3)
    with pytest.raises(NotDominant):
        increasing_path_nk1((6, 5, 3, 0), (7, 4, 2, 1), 3)


def test_nk1_path_random_climbs():
    rng = random.Random(17)
    for k in (3, 4):
        a, b = climb_pair(rng, k)
        check_path(increasing_path_nk1(a, b, k), a, b)


def test_csv_output():
    res = increasing_path_k3((7, 3, 2), (6, 5, 1), steps=4)
    lines = res.to_csv().splitlines()
    assert lines[0] == "t,x1,x2,x3"
    assert lines[1] == "0,6,5,1" and lines[-1] == "1,7,3,2"


def test_ode_demo():
    res = ode_demo_path((3, 2, 1), (0.0, 0.1))
    assert not res.stopped_early
    assert res.conservation_error <= 1e-8
    assert res.monotonicity_margin >= -1e-8
    s = float_power_sums(res.end.values, 4)
    assert abs(s[1] / 2 - 14) < 1e-8 and abs(s[2]) < 1e-8
    x = np.array(res.end.values[:3])
    assert abs(np.sum(x**3) - 36) < 1e-8


def test_ode_demo_edge_cases():
    with pytest.raises(PathError):
        ode_demo_path((2, 2, 1))
    short = ode_demo_path((3, 2, 1), (0.0, 1e-9), steps=4)
    assert np.allclose(short.start.values, short.end.values, atol=1e-8)
    # running towards a collision stops early with a partial path
    long = ode_demo_path((3, 2, 1), (0.0, 10.0), steps=200)
    assert long.stopped_early and len(long.samples) < 201


def test_dominance_margin_sign():
    assert dominance_margin((7, 3, 2), (6, 5, 1), 3) >= -1e-12
    assert dominance_margin((6, 5, 1), (7, 3, 2), 3) < -1e-3


def cube_grad(x):
    return tuple(3 * v * v for v in x)


def test_schur3():
    pts = [(1, 0, -1), (3, 2, 1), (5, -2, 0.5)]
    assert schur3_check(cube_grad, pts).passed
    res = schur3_check(lambda x: tuple(-g for g in cube_grad(x)), [(1, 0, -1)])
    assert not res.passed and res.witness == (1, 0, -1) and res.value == -12
    assert schur3_check(lambda x: (2.0, 2.0, 2.0), pts).passed
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = schur3_check(cube_grad, [(1, 1, 0), (3, 2, 1)])
    assert res.passed and res.skipped == ((1.0, 1.0, 0.0),) and caught
