"""The proof-script text format.

Line oriented: one statement per line, whitespace-insensitive within a
line, comments from ``#`` to end of line.  A file is a sequence of
``theorem`` blocks (statement, optionally followed by a proof) and
``declare`` blocks (statement-free dependency stubs).

The parser is plain recursive descent over a token stream and reports
errors with line, column, and the expected-token set.  It never raises
anything but ParseError on malformed input, whatever the bytes were.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .kernel import Ref

KEYWORDS = frozenset(
    """theorem declare tags points introduces assume show uses proof qed
    from by as extend layoff toward cases vs case close goal absurd lemma
    seg ang between noncollinear refl sym lt eq gt""".split()
)

TAG_NAMES = ("neutral", "euclidean")

_MAX_CASE_DEPTH = 64


class ParseError(SyntaxError):
    """Parse failure with position and the expected-token set attached."""

    def __init__(self, message: str, line: int, col: int, expected: Tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        where = f"line {line}, col {col}: {message}"
        if self.expected:
            where += " (expected: " + ", ".join(self.expected) + ")"
        super().__init__(where)
        self.lineno = line
        self.offset = col


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class SegTermAst:
    a: str
    b: str


@dataclass(frozen=True)
class FactAst:
    """A fact as written; `points` keeps source order.  For kind
    "between" the middle point is the one lying between the outer two."""

    kind: str  # seg_eq | seg_lt | ang_eq | ang_lt | between | noncollinear | absurd
    points: Tuple[str, ...] = ()


@dataclass(frozen=True)
class InstAst:
    """A rule instantiation; `triples` records whether it was written as
    two point triples (congruence criteria) or one flat list."""

    points: Tuple[str, ...]
    triples: bool = False


@dataclass(frozen=True)
class AssumeAst:
    label: str
    fact: FactAst
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RuleStepAst:
    label: str
    fact: FactAst
    rule: str
    inst: InstAst
    refs: Tuple[Ref, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExtendStepAst:
    label: str
    a: str
    b: str
    seg: SegTermAst
    fresh: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LayoffStepAst:
    label: str
    start: str
    toward: str
    seg: SegTermAst
    fresh: str
    refs: Tuple[Ref, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LemmaStepAst:
    label: str
    lemma: str
    args: Tuple[str, ...]
    fresh: Tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CaseBranchAst:
    kind: str  # lt | eq | gt
    steps: Tuple["StepAst", ...]
    close_kind: str  # goal | absurd
    close_refs: Tuple[Ref, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CasesStepAst:
    label: str
    left: SegTermAst
    right: SegTermAst
    branches: Tuple[CaseBranchAst, ...]
    line: int = field(default=0, compare=False)


StepAst = Union[RuleStepAst, ExtendStepAst, LayoffStepAst, LemmaStepAst, CasesStepAst]


@dataclass(frozen=True)
class TheoremAst:
    name: str
    tags: Tuple[str, ...]
    points: Tuple[str, ...]
    introduces: Tuple[str, ...]
    assumes: Tuple[AssumeAst, ...]
    shows: Tuple[FactAst, ...]
    uses: Tuple[str, ...]
    steps: Optional[Tuple[StepAst, ...]]  # None when the block has no proof
    qed_refs: Tuple[Ref, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DeclareAst:
    name: str
    tags: Tuple[str, ...]
    uses: Tuple[str, ...]
    line: int = field(default=0, compare=False)


BlockAst = Union[TheoremAst, DeclareAst]


@dataclass(frozen=True)
class ScriptAst:
    items: Tuple[BlockAst, ...]


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(r"==|[:,\[\]()<]|[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*|\S")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident" | "punct" | "nl" | "eof" | "junk"
    value: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        produced = False
        for m in _TOKEN_RE.finditer(line):
            v = m.group(0)
            col = m.start() + 1
            if v == "==" or v in ":,[]()<":
                toks.append(_Tok("punct", v, lineno, col))
            elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*", v):
                toks.append(_Tok("ident", v, lineno, col))
            else:
                toks.append(_Tok("junk", v, lineno, col))
            produced = True
        if produced:
            toks.append(_Tok("nl", "", lineno, len(raw) + 1))
    toks.append(_Tok("eof", "", len(text.splitlines()) + 1, 1))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.pos = 0
        self.depth = 0

    # -- token plumbing

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, expected: Tuple[str, ...] = ()) -> "ParseError":
        tok = self.peek()
        got = tok.value if tok.kind not in ("nl", "eof") else f"<{tok.kind}>"
        return ParseError(f"{message}, got {got!r}", tok.line, tok.col, expected)

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    def expect_word(self, word: str) -> _Tok:
        if not self.at_word(word):
            raise self.fail(f"expected {word!r}", (word,))
        return self.advance()

    def expect_punct(self, p: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != p:
            raise self.fail(f"expected {p!r}", (p,))
        return self.advance()

    def expect_nl(self) -> None:
        tok = self.peek()
        if tok.kind == "eof":
            return
        if tok.kind != "nl":
            raise self.fail("expected end of line", ("newline",))
        self.advance()

    def ident(self, what: str, allow_dots: bool = False, allow_keyword: bool = False) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}", (what,))
        if not allow_dots and "." in tok.value:
            raise ParseError(f"{what} may not contain '.'", tok.line, tok.col, (what,))
        if not allow_keyword and tok.value in KEYWORDS:
            raise ParseError(
                f"reserved word {tok.value!r} cannot be used as {what}",
                tok.line,
                tok.col,
                (what,),
            )
        self.advance()
        return tok.value

    def point(self) -> str:
        return self.ident("point name")

    # -- grammar

    def parse_script(self) -> ScriptAst:
        items: List[BlockAst] = []
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "nl":
                self.advance()
                continue
            if self.at_word("theorem"):
                items.append(self.parse_theorem())
            elif self.at_word("declare"):
                items.append(self.parse_declare())
            else:
                raise self.fail("expected a block", ("theorem", "declare"))
        return ScriptAst(tuple(items))

    def parse_tags(self) -> Tuple[str, ...]:
        self.expect_word("tags")
        self.expect_punct(":")
        tags = [self.tag_name()]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            tags.append(self.tag_name())
        self.expect_nl()
        return tuple(tags)

    def tag_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.value not in TAG_NAMES:
            raise self.fail("expected a tag", TAG_NAMES)
        self.advance()
        return tok.value

    def parse_name_list(self) -> Tuple[str, ...]:
        names = [self.ident("name", allow_keyword=False)]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            names.append(self.ident("name"))
        self.expect_nl()
        return tuple(names)

    def parse_declare(self) -> DeclareAst:
        start = self.expect_word("declare")
        name = self.ident("theorem name")
        self.expect_nl()
        tags = self.parse_tags()
        uses: Tuple[str, ...] = ()
        if self.at_word("uses"):
            self.advance()
            uses = self.parse_name_list()
        return DeclareAst(name, tags, uses, line=start.line)

    def parse_theorem(self) -> TheoremAst:
        start = self.expect_word("theorem")
        name = self.ident("theorem name")
        self.expect_nl()
        tags = self.parse_tags()

        self.expect_word("points")
        points: List[str] = []
        while self.peek().kind == "ident":
            p = self.point()
            if p in points:
                tok = self.toks[self.pos - 1]
                raise ParseError(f"duplicate point {p}", tok.line, tok.col)
            points.append(p)
        if not points:
            raise self.fail("expected at least one point", ("point name",))
        self.expect_nl()

        introduces: List[str] = []
        if self.at_word("introduces"):
            self.advance()
            while self.peek().kind == "ident":
                p = self.point()
                if p in points or p in introduces:
                    tok = self.toks[self.pos - 1]
                    raise ParseError(f"duplicate point {p}", tok.line, tok.col)
                introduces.append(p)
            if not introduces:
                raise self.fail("expected a point name", ("point name",))
            self.expect_nl()

        labels: set = set()
        assumes: List[AssumeAst] = []
        while self.at_word("assume"):
            tok = self.advance()
            label = self.ident("hypothesis label")
            if label in labels:
                raise ParseError(f"duplicate label {label}", tok.line, tok.col)
            labels.add(label)
            self.expect_punct(":")
            fact = self.parse_fact(allow_absurd=False)
            self.expect_nl()
            assumes.append(AssumeAst(label, fact, line=tok.line))

        shows: List[FactAst] = []
        while self.at_word("show"):
            self.advance()
            shows.append(self.parse_fact(allow_absurd=True))
            self.expect_nl()
        if not shows:
            raise self.fail("expected 'show'", ("show",))

        uses: Tuple[str, ...] = ()
        if self.at_word("uses"):
            self.advance()
            uses = self.parse_name_list()

        steps: Optional[Tuple[StepAst, ...]] = None
        qed_refs: Tuple[Ref, ...] = ()
        if self.at_word("proof"):
            self.advance()
            self.expect_nl()
            body = self.parse_steps(labels, stop_words=("qed",))
            if not body:
                raise self.fail("expected at least one proof step", ("step",))
            self.expect_word("qed")
            self.expect_word("from")
            qed_refs = self.parse_refs()
            self.expect_nl()
            steps = tuple(body)
        return TheoremAst(
            name,
            tags,
            tuple(points),
            tuple(introduces),
            tuple(assumes),
            tuple(shows),
            uses,
            steps,
            qed_refs,
            line=start.line,
        )

    def parse_steps(self, labels: set, stop_words: Tuple[str, ...]) -> List[StepAst]:
        steps: List[StepAst] = []
        while True:
            tok = self.peek()
            if tok.kind == "nl":
                self.advance()
                continue
            if tok.kind == "eof" or (tok.kind == "ident" and tok.value in stop_words):
                return steps
            steps.append(self.parse_step(labels))

    def parse_step(self, labels: set) -> StepAst:
        tok = self.peek()
        label = self.ident("step label")
        if label in labels:
            raise ParseError(f"duplicate label {label}", tok.line, tok.col)
        labels.add(label)
        self.expect_punct(":")
        if self.at_word("extend"):
            self.advance()
            a, b = self.point(), self.point()
            self.expect_word("by")
            seg = self.parse_segterm()
            self.expect_word("as")
            fresh = self.point()
            self.expect_nl()
            return ExtendStepAst(label, a, b, seg, fresh, line=tok.line)
        if self.at_word("layoff"):
            self.advance()
            start = self.point()
            self.expect_word("toward")
            toward = self.point()
            self.expect_word("by")
            seg = self.parse_segterm()
            self.expect_word("as")
            fresh = self.point()
            self.expect_word("from")
            refs = self.parse_refs()
            self.expect_nl()
            return LayoffStepAst(label, start, toward, seg, fresh, refs, line=tok.line)
        if self.at_word("cases"):
            self.advance()
            left = self.parse_segterm()
            self.expect_word("vs")
            right = self.parse_segterm()
            self.expect_nl()
            branches = self.parse_case_branches(labels)
            return CasesStepAst(label, left, right, branches, line=tok.line)
        if self.at_word("lemma"):
            self.advance()
            lemma = self.ident("lemma name")
            self.expect_punct("(")
            args = [self.point()]
            while self.peek().kind == "punct" and self.peek().value == ",":
                self.advance()
                args.append(self.point())
            self.expect_punct(")")
            fresh: List[str] = []
            if self.at_word("as"):
                self.advance()
                fresh.append(self.point())
                while self.peek().kind == "punct" and self.peek().value == ",":
                    self.advance()
                    fresh.append(self.point())
            self.expect_nl()
            return LemmaStepAst(label, lemma, tuple(args), tuple(fresh), line=tok.line)
        fact = self.parse_fact(allow_absurd=True)
        self.expect_word("by")
        rule = self.ident("rule name", allow_keyword=True)
        inst = self.parse_inst()
        self.expect_word("from")
        refs = self.parse_refs()
        self.expect_nl()
        return RuleStepAst(label, fact, rule, inst, refs, line=tok.line)

    def parse_case_branches(self, labels: set) -> Tuple[CaseBranchAst, ...]:
        self.depth += 1
        if self.depth > _MAX_CASE_DEPTH:
            tok = self.peek()
            raise ParseError("case nesting too deep", tok.line, tok.col)
        try:
            branches = []
            for kind in ("lt", "eq", "gt"):
                while self.peek().kind == "nl":
                    self.advance()
                tok = self.peek()
                self.expect_word("case")
                if not self.at_word(kind):
                    raise self.fail(f"expected case {kind!r}", (kind,))
                self.advance()
                self.expect_nl()
                steps = self.parse_steps(labels, stop_words=("close",))
                self.expect_word("close")
                if self.at_word("goal"):
                    close_kind = "goal"
                elif self.at_word("absurd"):
                    close_kind = "absurd"
                else:
                    raise self.fail("expected close kind", ("goal", "absurd"))
                self.advance()
                self.expect_word("from")
                close_refs = self.parse_refs()
                self.expect_nl()
                branches.append(
                    CaseBranchAst(kind, tuple(steps), close_kind, close_refs, line=tok.line)
                )
            return tuple(branches)
        finally:
            self.depth -= 1

    def parse_segterm(self) -> SegTermAst:
        self.expect_word("seg")
        return SegTermAst(self.point(), self.point())

    def parse_fact(self, allow_absurd: bool) -> FactAst:
        if self.at_word("seg"):
            self.advance()
            a, b = self.point(), self.point()
            op = self.parse_cmp()
            self.expect_word("seg")
            c, d = self.point(), self.point()
            return FactAst("seg_eq" if op == "==" else "seg_lt", (a, b, c, d))
        if self.at_word("ang"):
            self.advance()
            a, v, b = self.point(), self.point(), self.point()
            op = self.parse_cmp()
            self.expect_word("ang")
            c, w, d = self.point(), self.point(), self.point()
            return FactAst("ang_eq" if op == "==" else "ang_lt", (a, v, b, c, w, d))
        if self.at_word("between"):
            # "between A D B" reads: D lies strictly between A and B.
            self.advance()
            return FactAst("between", (self.point(), self.point(), self.point()))
        if self.at_word("noncollinear"):
            self.advance()
            return FactAst("noncollinear", (self.point(), self.point(), self.point()))
        if allow_absurd and self.at_word("absurd"):
            self.advance()
            return FactAst("absurd", ())
        expected = ("seg", "ang", "between", "noncollinear")
        if allow_absurd:
            expected += ("absurd",)
        raise self.fail("expected a fact", expected)

    def parse_cmp(self) -> str:
        tok = self.peek()
        if tok.kind == "punct" and tok.value in ("==", "<"):
            self.advance()
            return tok.value
        raise self.fail("expected a comparison", ("==", "<"))

    def parse_inst(self) -> InstAst:
        self.expect_punct("[")
        if self.peek().kind == "punct" and self.peek().value == "(":
            first = self.parse_triple()
            self.expect_punct(",")
            second = self.parse_triple()
            self.expect_punct("]")
            return InstAst(first + second, triples=True)
        pts = [self.point()]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            pts.append(self.point())
        self.expect_punct("]")
        return InstAst(tuple(pts), triples=False)

    def parse_triple(self) -> Tuple[str, str, str]:
        self.expect_punct("(")
        a = self.point()
        self.expect_punct(",")
        b = self.point()
        self.expect_punct(",")
        c = self.point()
        self.expect_punct(")")
        return (a, b, c)

    def parse_refs(self) -> Tuple[Ref, ...]:
        refs = [self.parse_ref()]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            refs.append(self.parse_ref())
        return tuple(refs)

    def parse_ref(self) -> Ref:
        if self.at_word("refl"):
            self.advance()
            return Ref("refl")
        if self.at_word("sym"):
            self.advance()
            return Ref("sym", self.ident("label", allow_dots=True))
        return Ref("label", self.ident("label", allow_dots=True))


def parse(text: str) -> ScriptAst:
    """Parse proof-script text; raises ParseError with position info."""
    return _Parser(text).parse_script()


@dataclass(frozen=True)
class ConjectureAst:
    """A named numeric claim over bare points, from a .conj file.  The
    evaluation itself lives with the model-checking code."""

    name: str
    points: Tuple[str, ...]
    line: int = field(default=0, compare=False)


def parse_conjecture(text: str) -> ConjectureAst:
    p = _Parser(text)
    while p.peek().kind == "nl":
        p.advance()
    start = p.expect_word("conjecture")
    name = p.ident("conjecture name")
    p.expect_nl()
    while p.peek().kind == "nl":
        p.advance()
    p.expect_word("points")
    points: List[str] = []
    while p.peek().kind == "ident":
        pt = p.point()
        if pt in points:
            tok = p.toks[p.pos - 1]
            raise ParseError(f"duplicate point {pt}", tok.line, tok.col)
        points.append(pt)
    if not points:
        raise p.fail("expected at least one point", ("point name",))
    p.expect_nl()
    while p.peek().kind == "nl":
        p.advance()
    if p.peek().kind != "eof":
        raise p.fail("expected end of file", ("end of file",))
    return ConjectureAst(name, tuple(points), line=start.line)


# ---------------------------------------------------------------------------
# Printer


def _fmt_fact(fact: FactAst) -> str:
    p = fact.points
    if fact.kind == "seg_eq":
        return f"seg {p[0]} {p[1]} == seg {p[2]} {p[3]}"
    if fact.kind == "seg_lt":
        return f"seg {p[0]} {p[1]} < seg {p[2]} {p[3]}"
    if fact.kind == "ang_eq":
        return f"ang {p[0]} {p[1]} {p[2]} == ang {p[3]} {p[4]} {p[5]}"
    if fact.kind == "ang_lt":
        return f"ang {p[0]} {p[1]} {p[2]} < ang {p[3]} {p[4]} {p[5]}"
    if fact.kind == "between":
        return f"between {p[0]} {p[1]} {p[2]}"
    if fact.kind == "noncollinear":
        return f"noncollinear {p[0]} {p[1]} {p[2]}"
    if fact.kind == "absurd":
        return "absurd"
    raise ValueError(f"unknown fact kind {fact.kind!r}")


def _fmt_refs(refs: Tuple[Ref, ...]) -> str:
    return ", ".join(repr(r) for r in refs)


def _fmt_inst(inst: InstAst) -> str:
    if inst.triples:
        p = inst.points
        return f"[({p[0]},{p[1]},{p[2]}),({p[3]},{p[4]},{p[5]})]"
    return "[" + ",".join(inst.points) + "]"


def _fmt_step(step: StepAst, indent: str, out: List[str]) -> None:
    if isinstance(step, RuleStepAst):
        out.append(
            f"{indent}{step.label}: {_fmt_fact(step.fact)} by {step.rule}"
            f"{_fmt_inst(step.inst)} from {_fmt_refs(step.refs)}"
        )
    elif isinstance(step, ExtendStepAst):
        out.append(
            f"{indent}{step.label}: extend {step.a} {step.b} by "
            f"seg {step.seg.a} {step.seg.b} as {step.fresh}"
        )
    elif isinstance(step, LayoffStepAst):
        out.append(
            f"{indent}{step.label}: layoff {step.start} toward {step.toward} by "
            f"seg {step.seg.a} {step.seg.b} as {step.fresh} from {_fmt_refs(step.refs)}"
        )
    elif isinstance(step, LemmaStepAst):
        text = f"{indent}{step.label}: lemma {step.lemma}({','.join(step.args)})"
        if step.fresh:
            text += " as " + ", ".join(step.fresh)
        out.append(text)
    elif isinstance(step, CasesStepAst):
        out.append(
            f"{indent}{step.label}: cases seg {step.left.a} {step.left.b} "
            f"vs seg {step.right.a} {step.right.b}"
        )
        for branch in step.branches:
            out.append(f"{indent}case {branch.kind}")
            for inner in branch.steps:
                _fmt_step(inner, indent + "  ", out)
            out.append(
                f"{indent}  close {branch.close_kind} from {_fmt_refs(branch.close_refs)}"
            )
    else:
        raise ValueError(f"unknown step {step!r}")


def format_script(ast: ScriptAst) -> str:
    """Canonical text for a script; parse(format_script(x)) == x."""
    out: List[str] = []
    for item in ast.items:
        if out:
            out.append("")
        if isinstance(item, DeclareAst):
            out.append(f"declare {item.name}")
            out.append(f"  tags: {', '.join(item.tags)}")
            if item.uses:
                out.append(f"  uses {', '.join(item.uses)}")
            continue
        out.append(f"theorem {item.name}")
        out.append(f"  tags: {', '.join(item.tags)}")
        out.append(f"  points {' '.join(item.points)}")
        if item.introduces:
            out.append(f"  introduces {' '.join(item.introduces)}")
        for a in item.assumes:
            out.append(f"  assume {a.label}: {_fmt_fact(a.fact)}")
        for s in item.shows:
            out.append(f"  show {_fmt_fact(s)}")
        if item.uses:
            out.append(f"  uses {', '.join(item.uses)}")
        if item.steps is not None:
            out.append("  proof")
            for step in item.steps:
                _fmt_step(step, "    ", out)
            out.append(f"  qed from {_fmt_refs(item.qed_refs)}")
    return "\n".join(out) + ("\n" if out else "")
