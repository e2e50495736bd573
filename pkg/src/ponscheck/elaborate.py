"""Turn parsed scripts into kernel statements and proofs.

The elaborator is purely static: it resolves names (labels, points,
rules, lemmas), enforces visibility (a label defined inside one case
branch is invisible in the others and after the split), and builds the
kernel's immutable step objects.  All semantic checking is left to the
kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Set, Tuple

from . import script as S
from .kernel import (
    CaseBranch,
    CasesStep,
    ExtendStep,
    LayoffStep,
    LemmaStep,
    Proof,
    Ref,
    RuleStep,
    Step,
    TheoremStatement,
)
from .rules import RULES
from .terms import (
    ABSURD,
    Fact,
    PointId,
    ang_eq,
    ang_lt,
    angle,
    between,
    non_collinear,
    seg_eq,
    seg_lt,
    segment,
)


class ElaborationError(Exception):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class UnresolvedLabel(ElaborationError):
    pass


class UnknownRule(ElaborationError):
    pass


class UnknownLemma(ElaborationError):
    pass


class UnknownPoint(ElaborationError):
    pass


@dataclass(frozen=True)
class ElaboratedBlock:
    """One script block, ready for checking and dependency analysis.

    `statement` is None for bare `declare` blocks; `proof` is None for
    statements given without one (both act as stubs in the graph).
    """

    name: str
    tags: Tuple[str, ...]
    uses: Tuple[str, ...]
    statement: Optional[TheoremStatement]
    proof: Optional[Proof]
    line: int = 0


def _convert_fact(fa: S.FactAst, known_points: Set[str], line: int) -> Fact:
    def pt(name: str) -> PointId:
        if name not in known_points:
            raise UnknownPoint(f"unknown point {name}", line)
        return PointId(name)

    p = fa.points
    try:
        if fa.kind == "seg_eq":
            return seg_eq(segment(pt(p[0]), pt(p[1])), segment(pt(p[2]), pt(p[3])))
        if fa.kind == "seg_lt":
            return seg_lt(segment(pt(p[0]), pt(p[1])), segment(pt(p[2]), pt(p[3])))
        if fa.kind == "ang_eq":
            return ang_eq(angle(pt(p[0]), pt(p[1]), pt(p[2])), angle(pt(p[3]), pt(p[4]), pt(p[5])))
        if fa.kind == "ang_lt":
            return ang_lt(angle(pt(p[0]), pt(p[1]), pt(p[2])), angle(pt(p[3]), pt(p[4]), pt(p[5])))
        if fa.kind == "between":
            # written "between X Y Z": Y is the point in the middle
            return between(pt(p[1]), pt(p[0]), pt(p[2]))
        if fa.kind == "noncollinear":
            return non_collinear(pt(p[0]), pt(p[1]), pt(p[2]))
        if fa.kind == "absurd":
            return ABSURD
    except ValueError as exc:
        raise ElaborationError(f"degenerate fact: {exc}", line) from exc
    raise ElaborationError(f"unknown fact kind {fa.kind!r}", line)


def make_statement(block: S.TheoremAst) -> TheoremStatement:
    given = set(block.points)
    full = given | set(block.introduces)
    hypotheses = tuple(
        (a.label, _convert_fact(a.fact, given, a.line)) for a in block.assumes
    )
    conclusions = tuple(_convert_fact(f, full, block.line) for f in block.shows)
    try:
        return TheoremStatement(
            name=block.name,
            tags=frozenset(block.tags),
            points=tuple(block.points),
            hypotheses=hypotheses,
            conclusions=conclusions,
            introduced=tuple(block.introduces),
            uses=tuple(block.uses),
        )
    except ValueError as exc:
        raise ElaborationError(str(exc), block.line) from exc


def collect_statements(ast: S.ScriptAst) -> Dict[str, TheoremStatement]:
    """First pass: statements of every theorem block, keyed by name.
    Used as the lemma registry before any proof is checked."""
    out: Dict[str, TheoremStatement] = {}
    for item in ast.items:
        if isinstance(item, S.TheoremAst):
            if item.name in out:
                raise ElaborationError(f"duplicate theorem name {item.name}", item.line)
            out[item.name] = make_statement(item)
    return out


class _Scope:
    """Visible labels and points at a position in the proof.  Branch
    scopes copy the parent so branch-local names never leak out."""

    def __init__(self, labels: Set[str], points: Set[str]) -> None:
        self.labels = labels
        self.points = points

    def child(self) -> "_Scope":
        return _Scope(set(self.labels), set(self.points))


def _check_refs(refs: Tuple[Ref, ...], scope: _Scope, line: int) -> Tuple[Ref, ...]:
    for ref in refs:
        if ref.kind in ("label", "sym") and ref.label not in scope.labels:
            raise UnresolvedLabel(f"unresolved label {ref.label}", line)
    return refs


def _seg_points(seg: S.SegTermAst, scope: _Scope, line: int) -> Tuple[str, str]:
    for n in (seg.a, seg.b):
        if n not in scope.points:
            raise UnknownPoint(f"unknown point {n}", line)
    return (seg.a, seg.b)


def _convert_steps(
    steps: Tuple[S.StepAst, ...],
    scope: _Scope,
    registry: Optional[Mapping[str, TheoremStatement]],
) -> Tuple[Step, ...]:
    out: List[Step] = []
    for st in steps:
        if isinstance(st, S.RuleStepAst):
            if st.rule not in RULES:
                raise UnknownRule(f"unknown rule {st.rule}", st.line)
            for n in st.inst.points:
                if n not in scope.points:
                    raise UnknownPoint(f"unknown point {n}", st.line)
            fact = _convert_fact(st.fact, scope.points, st.line)
            _check_refs(st.refs, scope, st.line)
            out.append(RuleStep(st.label, fact, st.rule, st.inst.points, st.refs, line=st.line))
            scope.labels.add(st.label)
        elif isinstance(st, S.ExtendStepAst):
            for n in (st.a, st.b):
                if n not in scope.points:
                    raise UnknownPoint(f"unknown point {n}", st.line)
            seg = _seg_points(st.seg, scope, st.line)
            out.append(ExtendStep(st.label, st.a, st.b, seg, st.fresh, line=st.line))
            scope.points.add(st.fresh)
            scope.labels.add(st.label)
        elif isinstance(st, S.LayoffStepAst):
            for n in (st.start, st.toward):
                if n not in scope.points:
                    raise UnknownPoint(f"unknown point {n}", st.line)
            seg = _seg_points(st.seg, scope, st.line)
            _check_refs(st.refs, scope, st.line)
            out.append(
                LayoffStep(st.label, st.start, st.toward, seg, st.fresh, st.refs, line=st.line)
            )
            scope.points.add(st.fresh)
            scope.labels.add(st.label)
        elif isinstance(st, S.LemmaStepAst):
            if registry is not None and st.lemma not in registry:
                raise UnknownLemma(f"unknown lemma {st.lemma}", st.line)
            for n in st.args:
                if n not in scope.points:
                    raise UnknownPoint(f"unknown point {n}", st.line)
            out.append(LemmaStep(st.label, st.lemma, st.args, st.fresh, line=st.line))
            scope.points.update(st.fresh)
            scope.labels.add(st.label)
        elif isinstance(st, S.CasesStepAst):
            left = _seg_points(st.left, scope, st.line)
            right = _seg_points(st.right, scope, st.line)
            branches = []
            for br in st.branches:
                bscope = scope.child()
                bscope.labels.add(f"{st.label}.{br.kind}")
                bsteps = _convert_steps(br.steps, bscope, registry)
                _check_refs(br.close_refs, bscope, br.line)
                branches.append(
                    CaseBranch(br.kind, bsteps, br.close_kind, br.close_refs, line=br.line)
                )
            out.append(CasesStep(st.label, left, right, tuple(branches), line=st.line))
            scope.labels.add(st.label)
        else:
            raise ElaborationError(f"unknown step kind {type(st).__name__}", 0)
    return tuple(out)


def make_proof(block: S.TheoremAst, registry: Optional[Mapping[str, TheoremStatement]] = None) -> Optional[Proof]:
    if block.steps is None:
        return None
    scope = _Scope(
        {a.label for a in block.assumes},
        set(block.points),
    )
    steps = _convert_steps(block.steps, scope, registry)
    _check_refs(block.qed_refs, scope, block.line)
    qed_line = block.steps[-1].line if block.steps else block.line
    return Proof(steps, block.qed_refs, qed_line=qed_line)


def elaborate_script(
    ast: S.ScriptAst,
    registry: Optional[Mapping[str, TheoremStatement]] = None,
) -> List[ElaboratedBlock]:
    """Second pass: full statement + proof for every block.  `registry`
    (from collect_statements over all input files) resolves lemma names;
    omit it to defer lemma resolution to the kernel."""
    blocks: List[ElaboratedBlock] = []
    for item in ast.items:
        if isinstance(item, S.DeclareAst):
            blocks.append(
                ElaboratedBlock(item.name, item.tags, item.uses, None, None, line=item.line)
            )
            continue
        statement = make_statement(item)
        proof = make_proof(item, registry)
        blocks.append(
            ElaboratedBlock(item.name, item.tags, item.uses, statement, proof, line=item.line)
        )
    return blocks
