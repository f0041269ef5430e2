import random
from fractions import Fraction as F

import pytest

from kconvex.criteria import (
    FAIL,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    MOMENT_VIOLATION,
    NOT_APPLICABLE,
    PASS,
    CriterionError,
    abel_identity_check,
    check_moments,
    counting_criterion,
    criteria_report,
    decide_exact,
    endpoint_criterion,
    k3_criterion,
    merged_two_list_problem,
    partial_sum_lower_bound_ok,
    popoviciu_criterion,
    small_hammer,
    superize,
)
from kconvex.divdiff import IdentityHolds, SynthFunction, apply_functional, prototype
from kconvex.exactpoly import Poly
from kconvex.spline import InequalityProblem, direct_rk
from kconvex.testgen import InstanceSpec, random_synth, sample_problem

from helpers import make_problem

GOLDEN_A = (11, 8, 8, 7, 3, 1)
GOLDEN_B = (10, 10, 6, 6, 6, 0)


def test_check_moments(six_node):
    assert check_moments(six_node)
    bad = check_moments(six_node.with_k(4))
    assert not bad and (bad.j, bad.value) == (3, 12)
    single = check_moments(make_problem((1,), (1,), 1))
    assert (single.j, single.value) == (0, 1)


def test_decide_six_node(six_node):
    v = decide_exact(six_node)
    assert v.status == HOLDS and v.holds and v.certificate == "exact-spline"


def test_decide_negated_gives_leftmost_witness(six_node):
    v = decide_exact(six_node.negated())
    assert v.status == FAILS
    assert v.witness == F(1, 2) and v.witness_value == F(-1, 4)
    assert direct_rk(six_node.negated(), 3, v.witness) == v.witness_value < 0
    # the prototype at the witness is a concrete counterexample
    assert apply_functional(six_node.negated(), prototype(v.witness, 3)) < 0


def test_decide_monotone_pair():
    assert decide_exact(make_problem((1, 0), (1, -1), 1)).holds
    v = decide_exact(make_problem((1, 0), (-1, 1), 1))
    assert v.status == FAILS and v.witness == 0


def test_decide_moment_violation():
    v = decide_exact(make_problem((2, 1, 0), (1, -2, 1), 3))
    assert v.status == MOMENT_VIOLATION and v.moment_index == 2 and v.moment_value == 2


def test_decide_respects_wider_domain():
    # r_k vanishes outside the hull, so widening the domain changes nothing
    p = make_problem((4, 2, 0), (1, -2, 1), 2, domain=(-10, 10))
    assert decide_exact(p).holds


def test_decide_empty_problem():
    assert decide_exact(InequalityProblem.from_pairs([], 3)).holds


def test_counting_examples(six_node):
    out = counting_criterion(make_problem((3, 2, 1), (1, -2, 1), 2))
    assert out.status == PASS and "partial_sums" in out.detail["fired"]
    out = counting_criterion(six_node)
    assert out.status == INCONCLUSIVE
    assert (out.detail["weight_changes"], out.detail["partial_sum_changes"]) == (5, 4)
    assert counting_criterion(six_node.negated()).status == NOT_APPLICABLE


def test_popoviciu_examples(six_node, karamata):
    out = popoviciu_criterion(six_node)
    assert out.status == FAIL and out.detail == {"window": 2, "value": -1}
    assert popoviciu_criterion(six_node, anchors=(3,)).status == PASS
    assert popoviciu_criterion(karamata).status == PASS


def test_k3_examples(six_node):
    assert k3_criterion(six_node).status == PASS
    assert k3_criterion(six_node.negated()).status == FAIL
    out = k3_criterion(make_problem((2, 1, 0), (1, -2, 1), 3))
    assert out.status == MOMENT_VIOLATION and out.detail["j"] == 2
    with pytest.raises(CriterionError):
        k3_criterion(make_problem((2, 1, 0), (1, -2, 1), 2))


def test_endpoint_examples(six_node, karamata):
    assert endpoint_criterion(make_problem((3, 2, 1), (1, -2, 1), 2)).status == PASS
    assert endpoint_criterion(make_problem((3, 2, 1), (-1, 2, -1), 2)).status == FAIL
    assert endpoint_criterion(six_node).status == NOT_APPLICABLE


def test_small_hammer_examples():
    assert small_hammer((7, 3, 2), (6, 5, 1), (1, 1, 1)).status == PASS
    assert small_hammer((5, 2, 1), (5, 2, 1), (2, -1, 3)).status == PASS
    assert small_hammer(GOLDEN_A, GOLDEN_B, [1] * 6).status == NOT_APPLICABLE
    with pytest.raises(ValueError):
        small_hammer((1, 0), (1,), (1, 1))
    assert decide_exact(merged_two_list_problem((7, 3, 2), (6, 5, 1))).holds


def test_small_hammer_reversed_fails():
    out = small_hammer((6, 5, 1), (7, 3, 2), (1, 1, 1))
    assert out.status == FAIL


def test_superize_golden_example():
    assert superize(GOLDEN_A, GOLDEN_B).status == NOT_APPLICABLE
    a = sorted(GOLDEN_A + (7,), reverse=True)
    b = sorted(GOLDEN_B + (7,), reverse=True)
    assert superize(a, b).status == PASS
    assert decide_exact(merged_two_list_problem(GOLDEN_A, GOLDEN_B)).holds
    assert superize((3, 1), (3, 1)).status == PASS


def test_abel_examples():
    f = SynthFunction(Poly(), ((4, 1),), 3)
    res = abel_identity_check((7, 3, 2), (6, 5, 1), (1, 1, 1), f)
    assert isinstance(res, IdentityHolds) and res.value == 4
    for poly in (Poly([1]), Poly([0, 1]), Poly([0, 0, 1])):
        res = abel_identity_check((7, 3, 2), (6, 5, 1), (1, 1, 1), SynthFunction(poly, (), 3))
        assert res and res.value == 0
    out = abel_identity_check((7, 3, 2), (7, 4, 1), (1, 1, 1), f)
    assert out.status == NOT_APPLICABLE


def test_report_composition(six_node, karamata):
    rep = criteria_report(six_node)
    assert rep.verdict.holds and rep.consistent
    assert rep.outcome("popoviciu").status == FAIL
    assert rep.outcome("counting").status == INCONCLUSIVE
    assert rep.outcome("k3").status == PASS
    rep = criteria_report(karamata)
    applicable = [o for o in rep.outcomes if o.status != NOT_APPLICABLE]
    assert applicable and all(o.status == PASS for o in applicable)
    rep = criteria_report(make_problem((1, 0), (1, 1), 2))
    assert rep.verdict.status == MOMENT_VIOLATION
    assert all(o.status == NOT_APPLICABLE for o in rep.outcomes)


def test_completeness_against_random_functions():
    rng = random.Random(8)
    for seed in range(60):
        k = rng.randint(1, 4)
        p = sample_problem(InstanceSpec(rng.randint(k + 1, 7), k, seed=seed))
        v = decide_exact(p)
        if v.holds:
            for _ in range(20):
                assert apply_functional(p, random_synth(rng, k, p.domain)) >= 0
        else:
            assert apply_functional(p, prototype(v.witness, k)) < 0


def test_canonicalization_preserves_verdict():
    rng = random.Random(2)
    for seed in range(30):
        p = sample_problem(InstanceSpec(6, 3, seed=seed))
        split = []
        for a, w in p.nodes:
            part = F(rng.randint(-3, 3))
            split += [(a, part), (a, w - part)]
        rng.shuffle(split)
        q = InequalityProblem.from_pairs(split, 3)
        assert q == p and decide_exact(q).status == decide_exact(p).status


def test_partial_sum_lower_bound(six_node):
    assert partial_sum_lower_bound_ok(six_node)
    assert partial_sum_lower_bound_ok(make_problem((1,), (1,), 2))


def test_verdict_witness_is_negative_point():
    for seed in range(30):
        p = sample_problem(InstanceSpec(7, 4, seed=seed))
        v = decide_exact(p)
        if v.status == FAILS:
            assert direct_rk(p, 4, v.witness) < 0
            assert v.witness in p.domain
        else:
            assert v.certificate

