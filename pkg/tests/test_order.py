import random
from fractions import Fraction as F

import numpy as np
import pytest

from kconvex.order import (
    BOTH,
    DIFFERENT_CLASS,
    DOMINATED,
    DOMINATES,
    EQUAL,
    INCOMPARABLE,
    MAXIMAL,
    MINIMAL,
    NEITHER,
    Configuration,
    compare,
    extremal_classify,
    is_singleton,
    power_sums,
    six_point_check,
    smooth1_equivalence,
)
from kconvex.testgen import affine_image, pte_pairs


def test_configuration_sorts_descending():
    assert Configuration.of(1, 3, 2).values == (3, 2, 1)
    assert Configuration.of([F(1, 2), 0]).n == 2


def test_power_sums():
    assert power_sums((7, 3, 2), 3) == (12, 62)
    with pytest.raises(ValueError):
        power_sums((1,), 1)


def test_compare_examples():
    assert compare((7, 3, 2), (6, 5, 1), 3) == DOMINATES
    assert compare((6, 5, 1), (7, 3, 2), 3) == DOMINATED
    assert compare((3, 2, 1), (1, 2, 3), 3) == EQUAL
    assert compare((7, 3, 2), (1, 2, 3), 3) == DIFFERENT_CLASS
    assert compare((17, 16, 8, 4, 0), (18, 14, 10, 2, 1), 3) == INCOMPARABLE
    with pytest.raises(ValueError):
        compare((1, 2), (1, 2, 3), 3)


def n_equals_k_pairs():
    out = []
    for k in (3, 4):
        for x, y in pte_pairs(k):
            if x.n != k:
                continue
            out.append((x, y, k))
            for scale, shift in ((F(2), F(-3)), (F(-1), F(0)), (F(1, 3), F(5, 2))):
                xi, yi = affine_image((x, y), scale, shift)
                out.append((xi, yi, k))
    return out


@pytest.mark.parametrize("x,y,k", n_equals_k_pairs())
def test_smooth1_three_way_agreement(x, y, k):
    rep = smooth1_equivalence(x, y, k)
    assert rep.agree, rep
    assert smooth1_equivalence(y, x, k).agree


def test_smooth1_examples():
    rep = smooth1_equivalence((7, 3, 2), (6, 5, 1), 3)
    assert (rep.kth_power, rep.maximum, rep.relation) == ("greater", "greater", DOMINATES)
    rep = smooth1_equivalence((6, 5, 1), (7, 3, 2), 3)
    assert (rep.kth_power, rep.maximum, rep.relation) == ("less", "less", DOMINATED)
    rep = smooth1_equivalence((6, 5, 1), (6, 5, 1), 3)
    assert rep.relation == EQUAL and rep.agree
    with pytest.raises(ValueError):
        smooth1_equivalence((7, 3, 2, 0), (6, 5, 1, 0), 3)


def test_endpoint_sufficiency_for_k_plus_one():
    for k in (3, 4):
        for x, y in pte_pairs(k):
            if x.n != k + 1:
                continue
            for a, b in ((x, y), (y, x)):
                a1, b1 = a.values[0], b.values[0]
                an, bn = a.values[-1], b.values[-1]
                if a1 >= b1 and (-1) ** k * an <= (-1) ** k * bn:
                    assert compare(a, b, k) == DOMINATES


def test_extremal_examples():
    assert extremal_classify((5, 3, 3, 3), 3).role == MAXIMAL
    assert extremal_classify((4, 4, 4, 1), 3).role == MINIMAL
    assert extremal_classify((5, 5, 3, 2), 3).role == NEITHER
    assert extremal_classify((1, 1, 1), 3).role == BOTH
    pat = extremal_classify((5, 3, 3, 3), 3)
    assert pat.block_lengths == (1, 3) and pat.witness_indices == (1, 2, 5)


def test_extremal_patterns_constructed():
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randint(2, 7)
        top, rest = sorted((F(rng.randint(-20, 20), rng.randint(1, 3)) for _ in range(2)), reverse=True)
        assert extremal_classify((top,) + (rest,) * (n - 1), 3).role in (MAXIMAL, BOTH)
        assert extremal_classify((top,) * (n - 1) + (rest,), 3).role in (MINIMAL, BOTH)


def test_generic_vectors_are_not_extremal_at_three():
    rng = random.Random(9)
    for _ in range(30):
        vals = rng.sample(range(-50, 50), rng.randint(4, 7))
        assert extremal_classify(vals, 3).role == NEITHER


def test_higher_order_patterns():
    # k = 4: three segments; maximal lets segment 2 be long, minimal segments 1 and 3
    assert extremal_classify((9, 4, 4, 4, 1), 4).role == MAXIMAL
    assert extremal_classify((9, 9, 4, 1, 1), 4).role == MINIMAL
    assert extremal_classify((9, 7, 4, 2, 1), 4).role == NEITHER


def test_maximal_pattern_is_unique_in_its_class():
    # every x1 >= x2 = x3 = x4 with the power sums of (5, 3, 3, 3): x1 + 3y = 14,
    # x1^2 + 3y^2 = 52, i.e. y in {3, 4}; y = 4 breaks the ordering
    sols = [(14 - 3 * y, y) for y in (3, 4)]
    maximal = [s for s in sols if s[0] >= s[1]]
    assert maximal == [(5, 3)]
    other = Configuration((F(2), F(4), F(4), F(4)))
    assert power_sums(other, 3) == power_sums((5, 3, 3, 3), 3)
    assert extremal_classify(other, 3).role == MINIMAL


def test_is_singleton():
    assert is_singleton((1, 1, 1), 3)
    assert not is_singleton((3, 2, 1), 3)
    # (5/3, 5/3, 2/3) shares s_1 = 4 and s_2 = 6 with (2, 1, 1), so its class
    # at order 3 has at least two points
    assert power_sums((F(5, 3), F(5, 3), F(2, 3)), 3) == power_sums((2, 1, 1), 3)
    assert not is_singleton((2, 1, 1), 3)
    with pytest.raises(ValueError):
        is_singleton((1, 1), 3)


def test_six_point_exact():
    assert six_point_check((3, 2, 1), (3, 2, 1)) == DOMINATES
    assert six_point_check((1, 1, 1), (2, 1, 1)) == DIFFERENT_CLASS
    with pytest.raises(ValueError):
        six_point_check((3, -2, 1), (3, 2, 1))


def _matching_triple(top, s2=14.0, s3=36.0):
    r2, r3 = s2 - top**2, s3 - top**3
    # b + c = p, bc = q with p^2 - 2q = r2, p^3 - 3pq = r3
    for p in np.roots([1.0, 0.0, -3 * r2, 2 * r3]):
        if abs(p.imag) > 1e-12:
            continue
        p = p.real
        q = (p * p - r2) / 2
        disc = p * p - 4 * q
        if disc >= 0:
            b, c = (p + disc**0.5) / 2, (p - disc**0.5) / 2
            if 0 <= c <= b <= top:
                return (top, b, c)
    raise AssertionError("no matching triple")


def test_six_point_numeric():
    abc = _matching_triple(2.8)
    assert abs(abc[1] - 2.397) < 1e-3 and abs(abc[2] - 0.642) < 1e-3
    assert six_point_check((3, 2, 1), abc, tol=1e-9) == DOMINATES
    assert six_point_check(abc, (3, 2, 1), tol=1e-9) == "not_dominates"
