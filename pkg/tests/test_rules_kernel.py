"""Rule schemas and the proof-checking kernel."""

import pytest

from ponscheck.kernel import (
    CaseBranch,
    CasesStep,
    ExtendStep,
    LayoffStep,
    LemmaStep,
    Proof,
    Ref,
    RuleStep,
    TheoremStatement,
    check_proof,
)
from ponscheck.rules import RULE_IDS, RULES
from ponscheck.terms import (
    ABSURD,
    PointId,
    ang_eq,
    angle,
    between,
    non_collinear,
    seg_eq,
    seg_lt,
    segment,
)

P = PointId
LBL = lambda s: Ref("label", s)
REFL = Ref("refl")

EXPECTED_RULES = (
    "ABSURD_LT_EQ_ANG",
    "ABSURD_LT_EQ_SEG",
    "ANG_REFL",
    "ANG_SYM",
    "ANG_TRANS",
    "ARM_SUBST",
    "ASA_ORD",
    "LT_SUBST_ANG",
    "LT_SUBST_SEG",
    "NC_TRANSFER",
    "SAS_ORD",
    "SEG_REFL",
    "SEG_SUM",
    "SEG_SYM",
    "SEG_TRANS",
    "SUPP_CONG",
    "WHOLE_PART_ANG",
    "WHOLE_PART_SEG",
)


def test_rule_inventory_is_closed():
    assert RULE_IDS == EXPECTED_RULES


def test_rule_arity_enforced():
    with pytest.raises(ValueError):
        RULES["SAS_ORD"].bind([P("A"), P("B")])


def _pons_statement() -> TheoremStatement:
    return TheoremStatement(
        name="pons",
        tags=frozenset({"NEUTRAL"}),
        points=("A", "B", "C"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("A"), P("C")))),
            ("h2", non_collinear(P("A"), P("B"), P("C"))),
        ),
        conclusions=(ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),),
    )


def _pons_proof() -> Proof:
    # mirror application of the ordered SAS rule to (A,B,C) vs (A,C,B)
    step = RuleStep(
        label="s1",
        fact=ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),
        rule_id="SAS_ORD",
        points=("A", "B", "C", "A", "C", "B"),
        refs=(LBL("h1"), LBL("h1"), REFL),
        line=1,
    )
    return Proof(steps=(step,), qed_refs=(LBL("s1"),), qed_line=2)


def test_mirror_sas_closes_pons():
    report = check_proof(_pons_statement(), _pons_proof())
    assert report.status == "ok"
    assert "SAS_ORD" in report.rule_uses
    assert all(sr.ok for sr in report.steps)


def test_unknown_premise_label_fails():
    bad = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),
                rule_id="SAS_ORD",
                points=("A", "B", "C", "A", "C", "B"),
                refs=(LBL("nope"), LBL("h1"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(_pons_statement(), bad)
    assert report.status == "failed"
    assert "nope" in (report.error or "")


def test_premise_mismatch_fails():
    bad = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),
                rule_id="SAS_ORD",
                points=("A", "B", "C", "A", "C", "B"),
                refs=(LBL("h2"), LBL("h1"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(_pons_statement(), bad)
    assert report.status == "failed"


def test_refl_only_fills_reflexive_premises():
    # refl placeholder cannot stand in for a real segment equality
    bad = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),
                rule_id="SAS_ORD",
                points=("A", "B", "C", "A", "C", "B"),
                refs=(REFL, LBL("h1"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    # SegEq(seg(A,B), seg(A,C)) is not reflexive, so refl must be rejected
    report = check_proof(_pons_statement(), bad)
    assert report.status == "failed"


def test_conclusion_must_match_schema():
    bad = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=seg_eq(segment(P("A"), P("B")), segment(P("A"), P("C"))),
                rule_id="SAS_ORD",
                points=("A", "B", "C", "A", "C", "B"),
                refs=(LBL("h1"), LBL("h1"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(_pons_statement(), bad)
    assert report.status == "failed"


def test_degenerate_instantiation_fails():
    bad = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),
                rule_id="SAS_ORD",
                points=("A", "A", "C", "A", "C", "A"),
                refs=(LBL("h1"), LBL("h1"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(_pons_statement(), bad)
    assert report.status == "failed"


def test_qed_must_cover_conclusions():
    proof = Proof(steps=_pons_proof().steps, qed_refs=(LBL("h1"),))
    report = check_proof(_pons_statement(), proof)
    assert report.status == "failed"


def test_side_condition_assumed_permissive_failed_strict():
    # same proof but the statement gives no noncollinearity hypothesis
    stmt = TheoremStatement(
        name="pons_degenerate",
        tags=frozenset(),
        points=("A", "B", "C"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("A"), P("C")))),
        ),
        conclusions=(ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),),
    )
    lax = check_proof(stmt, _pons_proof())
    assert lax.status == "ok"
    assert lax.assumed  # the triangle nondegeneracy was taken on faith
    strict = check_proof(stmt, _pons_proof(), strict=True)
    assert strict.status == "failed"


def test_side_condition_fails_when_provably_collinear():
    stmt = TheoremStatement(
        name="collinear_sas",
        tags=frozenset(),
        points=("A", "B", "C"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("A"), P("C")))),
            ("h2", between(P("B"), P("A"), P("C"))),
        ),
        conclusions=(ang_eq(angle(P("A"), P("B"), P("C")), angle(P("A"), P("C"), P("B"))),),
    )
    # B between A and C puts all three on a stored line: SAS side
    # condition is refuted even in permissive mode
    report = check_proof(stmt, _pons_proof())
    assert report.status == "failed"


def test_nc_transfer_probe_derives_side_condition():
    # D on line AB; noncollinear(A,B,C) known; SAS over (A,D,C) needs
    # noncollinear(A,D,C), derivable by transferring along the line
    stmt = TheoremStatement(
        name="transfer",
        tags=frozenset(),
        points=("A", "B", "C", "D"),
        hypotheses=(
            ("h1", non_collinear(P("A"), P("B"), P("C"))),
            ("h2", between(P("D"), P("A"), P("B"))),
            ("h3", seg_eq(segment(P("A"), P("D")), segment(P("A"), P("C")))),
        ),
        conclusions=(ang_eq(angle(P("A"), P("D"), P("C")), angle(P("A"), P("C"), P("D"))),),
    )
    proof = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ang_eq(angle(P("A"), P("D"), P("C")), angle(P("A"), P("C"), P("D"))),
                rule_id="SAS_ORD",
                points=("A", "D", "C", "A", "C", "D"),
                refs=(LBL("h3"), LBL("h3"), REFL),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(stmt, proof, strict=True)
    assert report.status == "ok"
    assert "NC_TRANSFER" in report.rule_uses
    assert any(rec.outcome == "derived" for rec in report.side_conditions)
    assert not report.assumed


def _statement_with_lt() -> TheoremStatement:
    return TheoremStatement(
        name="lay",
        tags=frozenset(),
        points=("A", "B", "C", "D"),
        hypotheses=(
            ("h1", seg_lt(segment(P("C"), P("D")), segment(P("A"), P("B")))),
        ),
        conclusions=(),
        introduced=("E",),
    )


def test_layoff_requires_bound():
    no_bound = Proof(
        steps=(
            LayoffStep(
                label="l1",
                start="A",
                toward="B",
                seg=("C", "D"),
                fresh="E",
                refs=(),
                line=1,
            ),
        ),
        qed_refs=(),
    )
    report = check_proof(_statement_with_lt(), no_bound)
    assert report.status == "failed"


def test_layoff_with_bound_places_point():
    proof = Proof(
        steps=(
            LayoffStep(
                label="l1",
                start="A",
                toward="B",
                seg=("C", "D"),
                fresh="E",
                refs=(LBL("h1"),),
                line=1,
            ),
        ),
        qed_refs=(),
    )
    report = check_proof(_statement_with_lt(), proof)
    assert report.status == "ok"


def test_extend_records_both_facts():
    stmt = TheoremStatement(
        name="ext",
        tags=frozenset(),
        points=("A", "B"),
        hypotheses=(),
        conclusions=(),
        introduced=("D",),
    )
    ext = ExtendStep(label="e1", a="A", b="B", seg=("A", "B"), fresh="D", line=1)
    # both recorded facts are citable: B between A,D and seg B,D == seg A,B
    s2 = RuleStep(
        label="s2",
        fact=seg_lt(segment(P("A"), P("B")), segment(P("A"), P("D"))),
        rule_id="WHOLE_PART_SEG",
        points=("A", "B", "D"),
        refs=(LBL("e1"),),
        line=2,
    )
    report = check_proof(stmt, Proof(steps=(ext, s2), qed_refs=()))
    assert report.status == "ok"


def test_absurd_outside_case_analysis_fails():
    stmt = TheoremStatement(
        name="oops",
        tags=frozenset(),
        points=("A", "B", "C", "D"),
        hypotheses=(
            ("h1", seg_lt(segment(P("A"), P("B")), segment(P("C"), P("D")))),
            ("h2", seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D")))),
        ),
        conclusions=(),
    )
    proof = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=ABSURD,
                rule_id="ABSURD_LT_EQ_SEG",
                points=("A", "B", "C", "D"),
                refs=(LBL("h1"), LBL("h2")),
                line=1,
            ),
        ),
        qed_refs=(),
    )
    report = check_proof(stmt, proof)
    assert report.status == "failed"


def test_cases_branch_assumptions_and_closure():
    # compare AB with CD where equality is the hypothesis: lt and gt
    # branches refute themselves, eq branch reaches the goal
    stmt = TheoremStatement(
        name="tri",
        tags=frozenset(),
        points=("A", "B", "C", "D"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D")))),
        ),
        conclusions=(seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D"))),),
    )
    mk_absurd = lambda which: RuleStep(
        label=f"{which}1",
        fact=ABSURD,
        rule_id="ABSURD_LT_EQ_SEG",
        points=("A", "B", "C", "D") if which == "l" else ("C", "D", "A", "B"),
        refs=(
            LBL("c1.lt") if which == "l" else LBL("c1.gt"),
            LBL("h1") if which == "l" else Ref("sym", "h1"),
        ),
        line=3,
    )
    cases = CasesStep(
        label="c1",
        left=("A", "B"),
        right=("C", "D"),
        branches=(
            CaseBranch(
                kind="lt",
                steps=(mk_absurd("l"),),
                close_kind="absurd",
                close_refs=(LBL("l1"),),
                line=2,
            ),
            CaseBranch(
                kind="eq", steps=(), close_kind="goal", close_refs=(LBL("c1.eq"),), line=4
            ),
            CaseBranch(
                kind="gt",
                steps=(mk_absurd("g"),),
                close_kind="absurd",
                close_refs=(LBL("g1"),),
                line=5,
            ),
        ),
        line=1,
    )
    proof = Proof(steps=(cases,), qed_refs=(LBL("c1"),))
    report = check_proof(stmt, proof)
    assert report.status == "ok"
    assert "ABSURD_LT_EQ_SEG" in report.rule_uses


def test_cases_open_branch_fails():
    stmt = TheoremStatement(
        name="tri_open",
        tags=frozenset(),
        points=("A", "B", "C", "D"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D")))),
        ),
        conclusions=(seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D"))),),
    )
    cases = CasesStep(
        label="c1",
        left=("A", "B"),
        right=("C", "D"),
        branches=(
            CaseBranch(kind="lt", steps=(), close_kind="goal", close_refs=(LBL("h1"),), line=2),
            CaseBranch(kind="eq", steps=(), close_kind="goal", close_refs=(LBL("c1.eq"),), line=3),
            CaseBranch(kind="gt", steps=(), close_kind="absurd", close_refs=(LBL("h1"),), line=4),
        ),
        line=1,
    )
    # gt branch cites a non-absurd fact to close an absurd branch
    report = check_proof(stmt, Proof(steps=(cases,), qed_refs=(LBL("c1"),)))
    assert report.status == "failed"


def test_lemma_step_instantiates_conclusions():
    helper = TheoremStatement(
        name="foot",
        tags=frozenset(),
        points=("A", "B", "C"),
        hypotheses=(("h1", non_collinear(P("A"), P("B"), P("C"))),),
        conclusions=(
            between(P("H"), P("B"), P("C")),
            ang_eq(angle(P("B"), P("A"), P("H")), angle(P("C"), P("A"), P("H"))),
        ),
        introduced=("H",),
    )
    stmt = TheoremStatement(
        name="use_foot",
        tags=frozenset(),
        points=("X", "Y", "Z"),
        hypotheses=(("h1", non_collinear(P("X"), P("Y"), P("Z"))),),
        conclusions=(between(P("M"), P("Y"), P("Z")),),
        introduced=("M",),
    )
    proof = Proof(
        steps=(
            LemmaStep(label="l1", lemma="foot", args=("X", "Y", "Z"), fresh=("M",), line=1),
        ),
        qed_refs=(LBL("l1"),),
    )
    report = check_proof(stmt, proof, registry={"foot": helper})
    assert report.status == "ok"
    assert report.lemma_uses == ("foot",)


def test_lemma_hypotheses_must_be_satisfied():
    helper = TheoremStatement(
        name="foot",
        tags=frozenset(),
        points=("A", "B", "C"),
        hypotheses=(("h1", non_collinear(P("A"), P("B"), P("C"))),),
        conclusions=(between(P("H"), P("B"), P("C")),),
        introduced=("H",),
    )
    stmt = TheoremStatement(
        name="no_hyp",
        tags=frozenset(),
        points=("X", "Y", "Z"),
        hypotheses=(),  # nothing establishes noncollinearity
        conclusions=(between(P("M"), P("Y"), P("Z")),),
        introduced=("M",),
    )
    proof = Proof(
        steps=(
            LemmaStep(label="l1", lemma="foot", args=("X", "Y", "Z"), fresh=("M",), line=1),
        ),
        qed_refs=(LBL("l1"),),
    )
    report = check_proof(stmt, proof, registry={"foot": helper})
    assert report.status == "failed"


def test_unknown_lemma_fails():
    stmt = TheoremStatement(
        name="ghost",
        tags=frozenset(),
        points=("X", "Y", "Z"),
        hypotheses=(),
        conclusions=(),
        introduced=("M",),
    )
    proof = Proof(
        steps=(
            LemmaStep(label="l1", lemma="missing", args=("X", "Y", "Z"), fresh=("M",), line=1),
        ),
        qed_refs=(),
    )
    report = check_proof(stmt, proof, registry={})
    assert report.status == "failed"


def test_sym_ref_flips_equality():
    stmt = TheoremStatement(
        name="symuse",
        tags=frozenset(),
        points=("A", "B", "C", "D", "E", "F"),
        hypotheses=(
            ("h1", seg_eq(segment(P("A"), P("B")), segment(P("C"), P("D")))),
            ("h2", seg_eq(segment(P("C"), P("D")), segment(P("E"), P("F")))),
        ),
        conclusions=(seg_eq(segment(P("A"), P("B")), segment(P("E"), P("F"))),),
    )
    proof = Proof(
        steps=(
            RuleStep(
                label="s1",
                fact=seg_eq(segment(P("A"), P("B")), segment(P("E"), P("F"))),
                rule_id="SEG_TRANS",
                points=("A", "B", "C", "D", "E", "F"),
                refs=(Ref("sym", "h1"), LBL("h2")),
                line=1,
            ),
        ),
        qed_refs=(LBL("s1"),),
    )
    report = check_proof(stmt, proof)
    assert report.status == "ok"
