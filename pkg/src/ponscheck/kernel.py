"""The deduction engine.

A proof is checked by forward chaining: hypotheses seed a fact set, each
step justifies new canonical facts via a rule application, a construction,
a trichotomy case split, or a lemma application, and qed verifies that the
cited labels establish every conclusion.

Label semantics: a step label stands for the full tuple of facts its
justification produced (a rule application can yield up to three), so a
later citation matches if the needed premise is among them.  The inline
reference `refl` discharges reflexive equalities, and `sym L` is accepted
as an alias of `L` because equalities are stored canonically; both still
register the corresponding equivalence rule as used.

Absurdity is quarantined: the ABSURD_* rules refuse to fire unless at
least one case assumption is open, so a reductio cannot leak out of its
branch except through the case-split bookkeeping itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .rules import RULES, RuleSchema
from .terms import (
    ABSURD,
    Absurd,
    AngEq,
    AngLt,
    Between,
    Fact,
    LineTable,
    NonCollinear,
    ORIGIN_CONSTRUCTED,
    ORIGIN_HYPOTHESIS,
    ORIGIN_LEMMA,
    PointId,
    SegEq,
    SegLt,
    angle,
    ang_eq,
    ang_lt,
    between,
    canon_fact,
    fact_point_names,
    non_collinear,
    seg_eq,
    seg_lt,
    segment,
)


class KernelError(Exception):
    """Base class for justification failures."""


class UnknownPremise(KernelError):
    pass


class PremiseMismatch(KernelError):
    pass


class SideConditionFailed(KernelError):
    pass


class DegenerateInstantiation(KernelError):
    pass


class ConclusionMismatch(KernelError):
    """The stated fact is not among the rule's conclusions here."""


class LayoffWithoutBound(KernelError):
    pass


class HypothesisNotSatisfied(KernelError):
    pass


class AbsurdOutsideCase(KernelError):
    pass


# ---------------------------------------------------------------------------
# Statements and elaborated steps


@dataclass(frozen=True)
class TheoremStatement:
    """What a theorem claims: hypotheses over given points, conclusions that
    may also mention existentially introduced points."""

    name: str
    tags: FrozenSet[str]
    points: Tuple[str, ...]
    hypotheses: Tuple[Tuple[str, Fact], ...]
    conclusions: Tuple[Fact, ...]
    introduced: Tuple[str, ...] = ()
    uses: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        given = set(self.points)
        scope = given | set(self.introduced)
        for label, fact in self.hypotheses:
            for n in fact_point_names(fact):
                if n not in given:
                    raise ValueError(
                        f"{self.name}: hypothesis {label} mentions undeclared point {n}"
                    )
        for fact in self.conclusions:
            for n in fact_point_names(fact):
                if n not in scope:
                    raise ValueError(f"{self.name}: conclusion mentions unknown point {n}")


@dataclass(frozen=True)
class Ref:
    """A premise citation: a label, inline `refl`, or `sym label`."""

    kind: str  # "label" | "refl" | "sym"
    label: str = ""

    def __repr__(self) -> str:
        if self.kind == "refl":
            return "refl"
        if self.kind == "sym":
            return f"sym {self.label}"
        return self.label


@dataclass(frozen=True)
class RuleStep:
    label: str
    fact: Fact
    rule_id: str
    points: Tuple[str, ...]
    refs: Tuple[Ref, ...]
    line: int = 0


@dataclass(frozen=True)
class ExtendStep:
    """Prolong segment a..b beyond b by a copy of `seg`, naming the new end."""

    label: str
    a: str
    b: str
    seg: Tuple[str, str]
    fresh: str
    line: int = 0


@dataclass(frozen=True)
class LayoffStep:
    """Place a point on segment start..toward at distance `seg` from start;
    needs a cited SegLt bound to guarantee it lands strictly inside."""

    label: str
    start: str
    toward: str
    seg: Tuple[str, str]
    fresh: str
    refs: Tuple[Ref, ...]
    line: int = 0


@dataclass(frozen=True)
class LemmaStep:
    label: str
    lemma: str
    args: Tuple[str, ...]
    fresh: Tuple[str, ...]
    line: int = 0


@dataclass(frozen=True)
class CaseBranch:
    kind: str  # "lt" | "eq" | "gt"
    steps: Tuple["Step", ...]
    close_kind: str  # "goal" | "absurd"
    close_refs: Tuple[Ref, ...]
    line: int = 0


@dataclass(frozen=True)
class CasesStep:
    """Trichotomy on two segment terms; branch assumptions get the labels
    <label>.lt / <label>.eq / <label>.gt."""

    label: str
    left: Tuple[str, str]
    right: Tuple[str, str]
    branches: Tuple[CaseBranch, ...]
    line: int = 0


Step = Union[RuleStep, ExtendStep, LayoffStep, LemmaStep, CasesStep]


@dataclass(frozen=True)
class Proof:
    steps: Tuple[Step, ...]
    qed_refs: Tuple[Ref, ...]
    qed_line: int = 0


# ---------------------------------------------------------------------------
# Reports


@dataclass
class StepResult:
    label: str
    ok: bool
    detail: str = ""
    line: int = 0


@dataclass
class SideConditionRecord:
    step: str
    triple: Tuple[str, str, str]
    outcome: str  # "derived" | "assumed" | "failed"


@dataclass
class CheckReport:
    name: str
    status: str  # "ok" | "failed"
    steps: List[StepResult] = field(default_factory=list)
    rule_uses: Tuple[str, ...] = ()
    lemma_uses: Tuple[str, ...] = ()
    side_conditions: List[SideConditionRecord] = field(default_factory=list)
    assumed: List[Tuple[str, str, str]] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def uses(self) -> Tuple[str, ...]:
        """Dependency edges this proof contributes: rules, then lemmas."""
        return self.rule_uses + self.lemma_uses


# ---------------------------------------------------------------------------
# Proof state


class ProofState:
    """Mutable checking context for one branch of one proof."""

    def __init__(self) -> None:
        self.known: Set[Fact] = set()
        self.facts: Dict[str, Tuple[Fact, ...]] = {}
        self.points: Dict[str, PointId] = {}
        self.lines = LineTable()
        self.assumptions: List[Tuple[str, Fact]] = []

    def branch(self) -> "ProofState":
        child = ProofState()
        child.known = set(self.known)
        child.facts = dict(self.facts)
        child.points = dict(self.points)
        child.lines = self.lines
        child.assumptions = list(self.assumptions)
        return child

    def point(self, name: str) -> PointId:
        try:
            return self.points[name]
        except KeyError:
            raise KernelError(f"point {name} is not in scope") from None

    def bind_point(self, name: str, origin: str) -> PointId:
        if name in self.points:
            raise KernelError(f"point name {name} already in scope")
        p = PointId(name, origin)
        self.points[name] = p
        return p

    def add_label(self, label: str, facts: Sequence[Fact]) -> None:
        if label in self.facts:
            raise KernelError(f"label {label} already defined")
        fs = tuple(canon_fact(f) for f in facts)
        self.facts[label] = fs
        for f in fs:
            self.known.add(f)
            if isinstance(f, Between):
                self.lines = self.lines.record_between(f)


def initial_state(statement: TheoremStatement) -> ProofState:
    state = ProofState()
    for name in statement.points:
        state.bind_point(name, ORIGIN_HYPOTHESIS)
    for label, fact in statement.hypotheses:
        state.add_label(label, (fact,))
    return state


# ---------------------------------------------------------------------------
# Side conditions


def check_side_condition(
    state: ProofState, triple: Tuple[PointId, PointId, PointId], strict: bool = False
) -> Tuple[str, Optional[NonCollinear]]:
    """Decide a NonCollinear obligation.

    Returns (outcome, transferred) where outcome is "derived", "assumed" or
    "failed", and transferred is the NonCollinear fact obtained by a
    one-step NC_TRANSFER probe (None if the fact was already known).
    """
    p1, p2, p3 = triple
    if state.lines.provably_collinear(p1, p2, p3):
        return ("failed", None)
    try:
        want = non_collinear(p1, p2, p3)
    except ValueError:
        return ("failed", None)
    if want in state.known:
        return ("derived", None)
    if _transfer_probe(state, want):
        return ("derived", want)
    return ("failed", None) if strict else ("assumed", None)


def _transfer_probe(state: ProofState, want: NonCollinear) -> bool:
    """One NC_TRANSFER step: some known NonCollinear(x,y,z) shares its z with
    the target, and the target's other two points lie with {x,y} on one
    recorded line."""
    target = set(want.names())
    for fact in state.known:
        if not isinstance(fact, NonCollinear):
            continue
        source = set(fact.names())
        for z in source & target:
            pq = target - {z}
            xy = source - {z}
            if len(pq) != 2:
                continue
            if state.lines.common_line(pq | xy) is not None:
                return True
    return False


# ---------------------------------------------------------------------------
# Checking

_EQUIV_FOR_REFL = {SegEq: "SEG_REFL", AngEq: "ANG_REFL"}
_EQUIV_FOR_SYM = {SegEq: "SEG_SYM", AngEq: "ANG_SYM"}


class _Ctx:
    def __init__(
        self,
        statement: TheoremStatement,
        registry: Optional[Mapping[str, TheoremStatement]],
        strict: bool,
    ) -> None:
        self.statement = statement
        self.registry = registry or {}
        self.strict = strict
        self.results: List[StepResult] = []
        self.rule_uses: Dict[str, None] = {}
        self.lemma_uses: List[str] = []
        self.side_conditions: List[SideConditionRecord] = []
        self.assumed: List[Tuple[str, str, str]] = []

    def use_rule(self, rule_id: str) -> None:
        self.rule_uses[rule_id] = None


class _ProofFailed(Exception):
    def __init__(self, where: str, line: int, message: str) -> None:
        super().__init__(message)
        self.where = where
        self.line = line


def _justifies(state: ProofState, ref: Ref, want: Fact, ctx: _Ctx) -> bool:
    """Whether one citation yields `want`; raises UnknownPremise for a bad
    label, returns False on a mere mismatch."""
    want = canon_fact(want)
    if ref.kind == "refl":
        rule = _EQUIV_FOR_REFL.get(type(want))
        if rule is not None and want.left == want.right:  # type: ignore[union-attr]
            ctx.use_rule(rule)
            return True
        return False
    if ref.label not in state.facts:
        raise UnknownPremise(f"no step or hypothesis labeled {ref.label}")
    if want not in state.facts[ref.label]:
        return False
    if ref.kind == "sym":
        rule = _EQUIV_FOR_SYM.get(type(want))
        if rule is None:
            return False  # sym only makes sense for congruences
        ctx.use_rule(rule)
    return True


def _match_ref(state: ProofState, ref: Ref, want: Fact, ctx: _Ctx) -> None:
    if not _justifies(state, ref, want, ctx):
        if ref.kind == "refl":
            raise PremiseMismatch(f"refl does not justify {want!r}")
        have = ", ".join(repr(f) for f in state.facts[ref.label])
        raise PremiseMismatch(f"premise {want!r} expected; {ref!r} provides: {have}")


def _check_covered(
    state: ProofState, refs: Tuple[Ref, ...], wanted: Sequence[Fact], ctx: _Ctx, what: str
) -> None:
    for fact in wanted:
        if not any(_justifies(state, r, fact, ctx) for r in refs):
            raise PremiseMismatch(f"{what}: cited labels do not establish {fact!r}")


def _discharge_side_conditions(
    state: ProofState, step_label: str, triples, ctx: _Ctx
) -> None:
    for triple in triples:
        outcome, transferred = check_side_condition(state, triple, ctx.strict)
        names = tuple(sorted(p.name for p in triple))
        ctx.side_conditions.append(SideConditionRecord(step_label, names, outcome))
        if outcome == "failed":
            raise SideConditionFailed(
                f"cannot justify noncollinear({','.join(names)})"
                + (" (strict mode)" if ctx.strict else "")
            )
        if outcome == "assumed" and names not in ctx.assumed:
            ctx.assumed.append(names)
        if transferred is not None:
            ctx.use_rule("NC_TRANSFER")
            state.known.add(transferred)


def apply_rule(
    state: ProofState,
    rule_id: str,
    points: Sequence[PointId],
    refs: Tuple[Ref, ...],
    ctx: _Ctx,
    step_label: str,
) -> Tuple[Fact, ...]:
    schema = RULES.get(rule_id)
    if schema is None:
        raise KernelError(f"unknown rule {rule_id}")
    try:
        binding = schema.bind(points)
        premises = schema.instantiate_premises(binding)
        conclusions = schema.instantiate_conclusions(binding)
    except ValueError as exc:
        raise DegenerateInstantiation(str(exc)) from None

    if len(refs) != len(premises):
        # Premise-free rules still need a `from` clause; a lone refl is it.
        if not (not premises and len(refs) == 1 and refs[0].kind == "refl"):
            raise PremiseMismatch(
                f"{rule_id} takes {len(premises)} premise(s), {len(refs)} cited"
            )
        refs = ()
    for ref, want in zip(refs, premises):
        _match_ref(state, ref, want, ctx)

    if schema.collinear_side:
        names = [binding[v].name for v in schema.collinear_side]
        if state.lines.common_line(names) is None:
            raise SideConditionFailed(
                f"points {{{','.join(sorted(set(names)))}}} are not on one recorded line"
            )
    _discharge_side_conditions(
        state, step_label, schema.instantiate_side_conditions(binding), ctx
    )

    if any(isinstance(c, Absurd) for c in conclusions) and not state.assumptions:
        raise AbsurdOutsideCase("absurdity derived outside any case assumption")
    ctx.use_rule(rule_id)
    return conclusions


def apply_construction(
    state: ProofState, step: Union[ExtendStep, LayoffStep], ctx: _Ctx
) -> Tuple[PointId, Tuple[Fact, ...]]:
    try:
        s = segment(state.point(step.seg[0]), state.point(step.seg[1]))
        if isinstance(step, ExtendStep):
            a, b = state.point(step.a), state.point(step.b)
            if a.name == b.name:
                raise DegenerateInstantiation("extend needs two distinct points")
            d = state.bind_point(step.fresh, ORIGIN_CONSTRUCTED)
            return d, (between(b, a, d), seg_eq(segment(b, d), s))
        start, toward = state.point(step.start), state.point(step.toward)
        bound = seg_lt(s, segment(start, toward))
    except ValueError as exc:
        raise DegenerateInstantiation(str(exc)) from None
    if not any(_justifies(state, r, bound, ctx) for r in step.refs):
        raise LayoffWithoutBound(f"layoff needs {bound!r} among its citations")
    d = state.bind_point(step.fresh, ORIGIN_CONSTRUCTED)
    return d, (between(d, start, toward), seg_eq(segment(start, d), s))


def subst_fact(fact: Fact, mapping: Mapping[str, PointId]) -> Fact:
    """Rebuild a fact with points renamed through `mapping` (and therefore
    re-canonicalized).  Raises the constructors' errors on collapses."""

    def pt(p: PointId) -> PointId:
        return mapping[p.name]

    if isinstance(fact, (SegEq, SegLt)):
        make = seg_eq if isinstance(fact, SegEq) else seg_lt
        return make(
            segment(pt(fact.left.a), pt(fact.left.b)),
            segment(pt(fact.right.a), pt(fact.right.b)),
        )
    if isinstance(fact, (AngEq, AngLt)):
        make = ang_eq if isinstance(fact, AngEq) else ang_lt
        lt, rt = fact.left, fact.right
        return make(
            angle(pt(lt.arm1), pt(lt.vertex), pt(lt.arm2)),
            angle(pt(rt.arm1), pt(rt.vertex), pt(rt.arm2)),
        )
    if isinstance(fact, Between):
        return between(pt(fact.mid), pt(fact.a), pt(fact.b))
    if isinstance(fact, NonCollinear):
        return non_collinear(pt(fact.a), pt(fact.b), pt(fact.c))
    if isinstance(fact, Absurd):
        return ABSURD
    raise TypeError(f"not a fact: {fact!r}")


def apply_lemma(
    state: ProofState, step: LemmaStep, ctx: _Ctx
) -> Tuple[Tuple[PointId, ...], Tuple[Fact, ...]]:
    lemma = ctx.registry.get(step.lemma)
    if lemma is None:
        raise KernelError(f"unknown lemma {step.lemma}")
    if len(step.args) != len(lemma.points):
        raise DegenerateInstantiation(
            f"lemma {lemma.name} takes {len(lemma.points)} point(s), got {len(step.args)}"
        )
    mapping = {
        formal: state.point(actual) for formal, actual in zip(lemma.points, step.args)
    }
    for _, hyp in lemma.hypotheses:
        try:
            mapped = subst_fact(hyp, mapping)
        except ValueError:
            raise HypothesisNotSatisfied(
                f"lemma {lemma.name}: hypothesis {hyp!r} degenerates under this map"
            ) from None
        if mapped not in state.known:
            raise HypothesisNotSatisfied(f"lemma {lemma.name} needs {mapped!r}")
    if len(step.fresh) != len(lemma.introduced):
        raise DegenerateInstantiation(
            f"lemma {lemma.name} introduces {len(lemma.introduced)} point(s), "
            f"{len(step.fresh)} name(s) given"
        )
    fresh_points = []
    for formal, name in zip(lemma.introduced, step.fresh):
        p = state.bind_point(name, ORIGIN_LEMMA)
        mapping[formal] = p
        fresh_points.append(p)
    try:
        conclusions = tuple(subst_fact(c, mapping) for c in lemma.conclusions)
    except ValueError as exc:
        raise DegenerateInstantiation(str(exc)) from None
    ctx.lemma_uses.append(lemma.name)
    return tuple(fresh_points), conclusions


def open_trichotomy(
    state: ProofState, label: str, left, right
) -> Tuple[Tuple[str, ProofState], ...]:
    """Three child states assuming s<t, s=t, t<s under dotted labels."""
    cases = (
        ("lt", seg_lt(left, right)),
        ("eq", seg_eq(left, right)),
        ("gt", seg_lt(right, left)),
    )
    out = []
    for kind, assumption in cases:
        child = state.branch()
        alabel = f"{label}.{kind}"
        child.assumptions.append((alabel, assumption))
        child.add_label(alabel, (assumption,))
        out.append((kind, child))
    return tuple(out)


def _run_step(state: ProofState, step: Step, ctx: _Ctx) -> None:
    if isinstance(step, RuleStep):
        points = tuple(state.point(n) for n in step.points)
        conclusions = apply_rule(state, step.rule_id, points, step.refs, ctx, step.label)
        stated = canon_fact(step.fact)
        if stated not in conclusions:
            raise ConclusionMismatch(
                f"{stated!r} is not a conclusion of {step.rule_id} at this "
                f"instantiation (it yields: {', '.join(repr(c) for c in conclusions)})"
            )
        state.add_label(step.label, conclusions)
    elif isinstance(step, (ExtendStep, LayoffStep)):
        _, facts = apply_construction(state, step, ctx)
        state.add_label(step.label, facts)
    elif isinstance(step, LemmaStep):
        _, facts = apply_lemma(state, step, ctx)
        state.add_label(step.label, facts)
    elif isinstance(step, CasesStep):
        try:
            left = segment(state.point(step.left[0]), state.point(step.left[1]))
            right = segment(state.point(step.right[0]), state.point(step.right[1]))
        except ValueError as exc:
            raise DegenerateInstantiation(str(exc)) from None
        for branch, (kind, child) in zip(step.branches, open_trichotomy(state, step.label, left, right)):
            if branch.kind != kind:
                raise KernelError(f"case branches out of order: expected {kind}")
            _run_steps(child, branch.steps, ctx)
            wanted: Sequence[Fact]
            if branch.close_kind == "absurd":
                wanted = (ABSURD,)
            else:
                wanted = ctx.statement.conclusions
            try:
                _check_covered(
                    child, branch.close_refs, wanted, ctx, f"close {branch.close_kind}"
                )
            except KernelError as exc:
                where = f"{step.label} case {kind} close"
                ctx.results.append(StepResult(where, False, str(exc), branch.line))
                raise _ProofFailed(where, branch.line, str(exc)) from None
        # All three cases closed, so the goal stands unconditionally.
        state.add_label(step.label, ctx.statement.conclusions)
    else:
        raise KernelError(f"unknown step type: {step!r}")


def _run_steps(state: ProofState, steps: Sequence[Step], ctx: _Ctx) -> None:
    for step in steps:
        try:
            _run_step(state, step, ctx)
        except _ProofFailed:
            raise
        except KernelError as exc:
            detail = f"{type(exc).__name__}: {exc}"
            ctx.results.append(StepResult(step.label, False, detail, step.line))
            raise _ProofFailed(step.label, step.line, detail) from exc
        ctx.results.append(StepResult(step.label, True, "", step.line))


def check_proof(
    statement: TheoremStatement,
    proof: Proof,
    registry: Optional[Mapping[str, TheoremStatement]] = None,
    strict: bool = False,
) -> CheckReport:
    """Check one elaborated proof against its statement.

    Status is ok iff every step is justified, every trichotomy branch
    closes, and the qed citations establish every conclusion.
    """
    ctx = _Ctx(statement, registry, strict)
    report = CheckReport(name=statement.name, status="failed")
    try:
        state = initial_state(statement)
    except (ValueError, KernelError) as exc:
        report.error = f"bad statement: {exc}"
        return report
    try:
        _run_steps(state, proof.steps, ctx)
        try:
            _check_covered(state, proof.qed_refs, statement.conclusions, ctx, "qed")
        except KernelError as exc:
            raise _ProofFailed("qed", proof.qed_line, str(exc)) from exc
        report.status = "ok"
    except _ProofFailed as failure:
        report.error = f"{failure.where} (line {failure.line}): {failure}"
    report.steps = ctx.results
    report.rule_uses = tuple(ctx.rule_uses)
    report.lemma_uses = tuple(dict.fromkeys(ctx.lemma_uses))
    report.side_conditions = ctx.side_conditions
    report.assumed = ctx.assumed
    return report
