"""Numeric layer: measurement, sampling, construction replay, and the
divergence of the curved models on euclidean-only claims."""

import math
from random import Random

import pytest

from oracles import tangent_angle
from ponscheck.geometry import (
    DEFAULT_LIMITS,
    EUCLIDEAN,
    MODELS,
    POINCARE,
    SPHERE,
    GeodesicOutOfDomain,
)
from ponscheck.kernel import ExtendStep, LayoffStep, TheoremStatement
from ponscheck.models import (
    MissingPoint,
    SamplingFailed,
    TOLERANCES,
    angle_at,
    check_rule_soundness,
    eval_fact,
    model_check,
    model_check_conjecture,
    profile,
    realize_construction,
    sample_instance,
    solve_introduced_point,
    tolerance_for,
)
from ponscheck.rules import RULE_IDS
from ponscheck.terms import (
    ABSURD,
    DegenerateAngle,
    PointId,
    ang_eq,
    angle,
    between,
    non_collinear,
    seg_eq,
    seg_lt,
    segment,
)

A, B, C, D, H = (PointId(n) for n in "ABCDH")

ORACLE_TOL = {"euclidean": 1e-9, "poincare": 1e-7, "sphere": 1e-7}


def _statement(points, hypotheses, conclusions, introduced=()):
    return TheoremStatement(
        name="t",
        tags=frozenset({"neutral"}),
        points=points,
        hypotheses=hypotheses,
        conclusions=conclusions,
        introduced=introduced,
    )


def _isosceles_statement():
    return _statement(
        ("A", "B", "C"),
        (
            ("h1", seg_eq(segment(A, B), segment(A, C))),
            ("h2", non_collinear(A, B, C)),
        ),
        (ang_eq(angle(A, B, C), angle(A, C, B)),),
    )


def _converse_statement():
    return _statement(
        ("A", "B", "C"),
        (
            ("h1", ang_eq(angle(A, B, C), angle(A, C, B))),
            ("h2", non_collinear(A, B, C)),
        ),
        (seg_eq(segment(A, B), segment(A, C)),),
    )


# ---------------------------------------------------------------------------
# Tolerances


def test_tolerance_profiles():
    assert TOLERANCES["euclidean"].eq_tol == 1e-9
    assert TOLERANCES["poincare"].eq_tol == 1e-7
    assert TOLERANCES["sphere"].eq_tol == 1e-7
    assert profile(1e-6).lt_margin == pytest.approx(1e-5)
    assert tolerance_for(POINCARE).eq_tol == 1e-7
    assert tolerance_for(POINCARE, eq_tol=1e-4).eq_tol == 1e-4


def test_close_and_less_are_relative():
    tol = profile(1e-9)
    # absolute floor near zero
    assert tol.close(0.0, 5e-10)
    assert not tol.close(0.0, 5e-9)
    # scales with magnitude
    assert tol.close(1e9, 1e9 + 0.5)
    assert tol.less(1.0, 2.0)
    assert not tol.less(2.0, 1.0)
    # dead zone between close and less
    assert not tol.less(1.0, 1.0 + 5e-9)
    assert not tol.close(1.0, 1.0 + 5e-9)


# ---------------------------------------------------------------------------
# Angle measurement


def test_angle_frozen_values_euclidean():
    got = angle_at(EUCLIDEAN, (3.0, 0.0), (0.0, 0.0), (2.0, 3.0))
    assert got == pytest.approx(math.atan2(3.0, 2.0), abs=1e-12)
    assert angle_at(EUCLIDEAN, (1.0, 0.0), (0.0, 0.0), (0.0, 1.0)) == pytest.approx(
        math.pi / 2.0, abs=1e-12
    )


def test_right_angles_in_curved_models():
    # conformal at the disk centre, so the axes meet at a right angle
    got = angle_at(POINCARE, (0.3, 0.0), (0.0, 0.0), (0.0, 0.4))
    assert got == pytest.approx(math.pi / 2.0, abs=1e-12)
    # octant corner on the sphere
    got = angle_at(SPHERE, (1.0, 0.0, 0.0), (0.0, 0.0, 1.0), (0.0, 1.0, 0.0))
    assert got == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_angle_at_degenerate_arm_raises():
    with pytest.raises(DegenerateAngle):
        angle_at(EUCLIDEAN, (0.0, 0.0), (0.0, 0.0), (1.0, 0.0))


@pytest.mark.parametrize("model", MODELS.values(), ids=lambda m: m.name)
def test_angle_at_agrees_with_tangent_oracle(model):
    rng = Random(f"angle-oracle:{model.name}")
    checked = 0
    while checked < 100:
        a = model.random_point(rng, DEFAULT_LIMITS)
        v = model.random_point(rng, DEFAULT_LIMITS)
        b = model.random_point(rng, DEFAULT_LIMITS)
        if min(model.dist(v, a), model.dist(v, b), model.dist(a, b)) < 1e-2:
            continue
        got = angle_at(model, a, v, b)
        want = tangent_angle(model, a, v, b)
        assert got == pytest.approx(want, abs=ORACLE_TOL[model.name])
        checked += 1


# ---------------------------------------------------------------------------
# Fact evaluation


def test_eval_fact_euclidean_examples():
    inst = {A: (0.0, 0.0), B: (4.0, 0.0), C: (2.0, 3.0)}
    ok = lambda f: eval_fact(EUCLIDEAN, inst, f)
    assert ok(seg_eq(segment(A, C), segment(B, C)))
    assert not ok(seg_eq(segment(A, B), segment(A, C)))
    assert ok(seg_lt(segment(A, C), segment(A, B)))
    assert not ok(seg_lt(segment(A, B), segment(A, C)))
    assert ok(non_collinear(A, B, C))
    assert ok(ang_eq(angle(C, A, B), angle(C, B, A)))
    assert not ok(ABSURD)


def test_eval_fact_betweenness():
    inst = {A: (0.0, 0.0), D: (1.0, 0.0), B: (3.0, 0.0)}
    assert eval_fact(EUCLIDEAN, inst, between(D, A, B))
    assert not eval_fact(EUCLIDEAN, inst, between(A, D, B))
    assert not eval_fact(EUCLIDEAN, inst, non_collinear(A, D, B))
    # endpoint coincidence does not count as betweenness
    inst2 = {A: (0.0, 0.0), D: (0.0, 0.0), B: (3.0, 0.0)}
    assert not eval_fact(EUCLIDEAN, inst2, between(D, A, B))


def test_eval_fact_degenerate_angle_is_false():
    inst = {A: (0.0, 0.0), B: (0.0, 0.0), C: (1.0, 0.0), D: (2.0, 1.0)}
    fact = ang_eq(angle(B, A, C), angle(B, D, C))
    assert not eval_fact(EUCLIDEAN, inst, fact)


def test_eval_fact_missing_point():
    with pytest.raises(MissingPoint):
        eval_fact(EUCLIDEAN, {A: (0.0, 0.0)}, seg_eq(segment(A, B), segment(A, B)))


# ---------------------------------------------------------------------------
# Sampling


@pytest.mark.parametrize("model", MODELS.values(), ids=lambda m: m.name)
def test_sampling_is_deterministic(model):
    stmt = _isosceles_statement()
    one = sample_instance(model, stmt, seed="fixed")
    two = sample_instance(model, stmt, seed="fixed")
    assert one == two
    other = sample_instance(model, stmt, seed="different")
    assert other != one


@pytest.mark.parametrize("model", MODELS.values(), ids=lambda m: m.name)
def test_sampled_instances_satisfy_hypotheses(model):
    stmt = _isosceles_statement()
    tol = tolerance_for(model)
    for k in range(25):
        inst = sample_instance(model, stmt, seed=k)
        for _, hyp in stmt.hypotheses:
            assert eval_fact(model, inst, hyp, tol), (model.name, k, hyp)


def test_sampling_contradiction_fails_cleanly():
    stmt = _statement(
        ("A", "B", "C", "D"),
        (
            ("h1", seg_lt(segment(A, B), segment(C, D))),
            ("h2", seg_lt(segment(C, D), segment(A, B))),
        ),
        (seg_eq(segment(A, B), segment(A, B)),),
    )
    with pytest.raises(SamplingFailed):
        sample_instance(EUCLIDEAN, stmt, seed=0)


# ---------------------------------------------------------------------------
# Construction replay


def test_extend_euclidean_doubles_the_segment():
    inst = {A: (0.0, 0.0), B: (1.0, 0.0)}
    step = ExtendStep("e1", "A", "B", ("A", "B"), "D")
    out = realize_construction(EUCLIDEAN, inst, step)
    assert out[D] == pytest.approx((2.0, 0.0), abs=1e-12)
    assert A in out and B in out


def test_extend_poincare_is_hyperbolic_not_euclidean():
    inst = {A: (0.0, 0.0), B: (0.5, 0.0)}
    step = ExtendStep("e1", "A", "B", ("A", "B"), "D")
    out = realize_construction(POINCARE, inst, step)
    # doubling ln 3 lands at tanh(ln 3) = 0.8, not at 1.0
    assert out[D][0] == pytest.approx(0.8, abs=1e-9)
    assert out[D][1] == pytest.approx(0.0, abs=1e-12)


def test_extend_off_the_hemisphere_is_rejected():
    a = (0.0, 0.0, 1.0)
    b = (math.sin(0.8), 0.0, math.cos(0.8))
    step = ExtendStep("e1", "A", "B", ("A", "B"), "D")
    with pytest.raises(GeodesicOutOfDomain):
        realize_construction(SPHERE, {A: a, B: b}, step)


def test_layoff_places_point_at_cited_length():
    inst = {A: (0.0, 0.0), B: (3.0, 0.0), C: (10.0, 0.0)}
    step = LayoffStep("l1", "C", "A", ("A", "B"), "D", refs=())
    out = realize_construction(EUCLIDEAN, inst, step)
    assert out[D] == pytest.approx((7.0, 0.0), abs=1e-12)


def test_solve_introduced_point_finds_the_bisector_foot():
    inst = {A: (0.0, 3.0), B: (-2.0, 0.0), C: (2.0, 0.0)}
    conclusions = (
        between(H, B, C),
        ang_eq(angle(B, A, H), angle(C, A, H)),
    )
    got = solve_introduced_point(
        EUCLIDEAN, inst, H, conclusions, tolerance_for(EUCLIDEAN)
    )
    assert got == pytest.approx((0.0, 0.0), abs=1e-9)


def test_solve_introduced_point_midpoint_fallback():
    inst = {B: (-2.0, 0.0), C: (2.0, 0.0)}
    got = solve_introduced_point(
        EUCLIDEAN, inst, H, (between(H, B, C),), tolerance_for(EUCLIDEAN)
    )
    assert got == pytest.approx((0.0, 0.0), abs=1e-12)


# ---------------------------------------------------------------------------
# Statement-level model checking


@pytest.mark.parametrize("model", MODELS.values(), ids=lambda m: m.name)
def test_isosceles_base_angles_hold_in_every_model(model):
    rep = model_check(model, _isosceles_statement(), trials=200, seed=7)
    assert rep.trials_run == 200
    assert rep.failures == 0
    assert rep.first_counterexample is None


@pytest.mark.parametrize("model", MODELS.values(), ids=lambda m: m.name)
def test_converse_holds_in_every_model(model):
    rep = model_check(model, _converse_statement(), trials=200, seed=7)
    assert rep.trials_run == 200
    assert rep.failures == 0


def test_model_check_zero_trials():
    rep = model_check(EUCLIDEAN, _isosceles_statement(), trials=0)
    assert rep.trials_run == 0 and rep.failures == 0 and rep.skipped == 0
    assert rep.as_dict() == {
        "trials": 0,
        "trials_run": 0,
        "failures": 0,
        "skipped": 0,
    }


def test_model_check_reports_counterexample_points():
    # a false claim: every triangle is isosceles
    stmt = _statement(
        ("A", "B", "C"),
        (("h1", non_collinear(A, B, C)),),
        (seg_eq(segment(A, B), segment(A, C)),),
    )
    rep = model_check(EUCLIDEAN, stmt, trials=50, seed=0)
    assert rep.failures > 0
    ce = rep.first_counterexample
    assert ce is not None
    assert tuple(n for n, _ in ce.points) == ("A", "B", "C")
    assert "seg" in ce.fact


# ---------------------------------------------------------------------------
# The angle-sum conjecture splits the models


def test_angle_sum_passes_only_in_the_flat_model():
    flat = model_check_conjecture(EUCLIDEAN, "angle_sum_pi", ("A", "B", "C"), trials=100)
    assert flat.trials_run == 100 and flat.failures == 0

    thin = model_check_conjecture(POINCARE, "angle_sum_pi", ("A", "B", "C"), trials=100)
    assert thin.failures > 0
    assert thin.first_counterexample is not None
    assert thin.first_counterexample.trial < 100

    fat = model_check_conjecture(SPHERE, "angle_sum_pi", ("A", "B", "C"), trials=100)
    assert fat.failures > 0
    assert fat.first_counterexample is not None


@pytest.mark.parametrize(
    "model,sign", [(POINCARE, -1.0), (SPHERE, 1.0)], ids=["poincare", "sphere"]
)
def test_angle_sum_direction(model, sign):
    stmt = _statement(
        ("A", "B", "C"),
        (("h1", non_collinear(A, B, C)),),
        (non_collinear(A, B, C),),
    )
    for k in range(20):
        inst = sample_instance(model, stmt, seed=k)
        total = (
            angle_at(model, inst[B], inst[A], inst[C])
            + angle_at(model, inst[A], inst[B], inst[C])
            + angle_at(model, inst[A], inst[C], inst[B])
        )
        assert sign * (total - math.pi) > 1e-6, (k, total)


def test_unknown_conjecture_name():
    from ponscheck.models import UnknownConjecture

    with pytest.raises(UnknownConjecture):
        model_check_conjecture(EUCLIDEAN, "riemann_hypothesis", ("A", "B", "C"))


# ---------------------------------------------------------------------------
# Rule soundness spot checks (the full sweep lives in the acceptance tests)


def test_sas_rule_sound_in_flat_model():
    rep = check_rule_soundness(EUCLIDEAN, "SAS_ORD", trials=50, seed=3)
    assert rep.trials_run == 50 and rep.failures == 0


def test_whole_part_sound_on_sphere():
    rep = check_rule_soundness(SPHERE, "WHOLE_PART_ANG", trials=30, seed=3)
    assert rep.trials_run == 30 and rep.failures == 0


def test_contradiction_rules_are_vacuous():
    rep = check_rule_soundness(POINCARE, "ABSURD_LT_EQ_SEG", trials=50, seed=3)
    assert rep.trials_run == 0 and rep.failures == 0


def test_rule_soundness_rejects_unknown_rule():
    with pytest.raises(KeyError):
        check_rule_soundness(EUCLIDEAN, "NOT_A_RULE", trials=1)


def test_every_rule_has_a_sampler():
    from ponscheck.models import missing_rule_samplers

    assert missing_rule_samplers() == ()
    assert len(RULE_IDS) == 18
