"""The query language: parsing and translation into evaluation plans.

A query is an optional ``assume:`` block followed by exactly one directive::

    assume:
        set <label> = 0|1            # Boolean evidence
        set_prob <label> = <number>  # probabilistic evidence
        <formula>                    # antecedent of an implication
    check:      <Boolean or threshold formula>
    compute:    Prob[<formula>] | MaxTotalRisk[<o>] | MinTotalRisk[<o>]
    computeall: MRS[<formula>] | MostRiskyA[<o>] | MostRiskyF[<o>]
                | OptimalConf[<o>]

Formulas use ``not``/``and``/``or``/``impl`` (tightest to loosest, ``impl``
right-associative), atoms naming disruption elements or properties, the
constants ``1``/``0``, ``MRS[...]`` and ``Prob[...] <cmp> <number>``.
Assumption entries are one per line; ``#`` starts a comment.

Translation resolves every label against a concrete model, decides which
layer answers the query, and folds the assumptions in: ``set`` becomes
evidence (first entry innermost), antecedents become the left side of an
implication, ``set_prob`` becomes attribution evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import Diagnostic, ParseError, QueryError
from .logic import (CEvidence, FormulaL1, FormulaL2, FormulaL3,
                    LAnd, LAtom, LConst, LEvidence, LMrs, LNot, MostRisky,
                    OptimalConf, PAnd, PEvidence, PNot, PThreshold, TotalRisk,
                    l1_nested_mrs, l_impl, l_or, p_impl, p_or)
from .model import ATTACK, FAULT, Dog
from .textfmt import Token, tokenize

QUERY_KEYWORDS = frozenset((
    "assume", "check", "compute", "computeall", "set", "set_prob",
    "not", "and", "or", "impl",
    "MRS", "Prob", "MostRiskyA", "MostRiskyF", "MaxTotalRisk", "MinTotalRisk",
    "OptimalConf",
))

# ---------------------------------------------------------------------------
# Surface syntax

Surface = Union["SConst", "SAtom", "SNot", "SAnd", "SOr", "SImpl", "SMrs",
                "SProb", "SRank"]


@dataclass(frozen=True)
class SConst:
    value: bool


@dataclass(frozen=True)
class SAtom:
    label: str


@dataclass(frozen=True)
class SNot:
    inner: Surface


@dataclass(frozen=True)
class SAnd:
    left: Surface
    right: Surface


@dataclass(frozen=True)
class SOr:
    left: Surface
    right: Surface


@dataclass(frozen=True)
class SImpl:
    left: Surface
    right: Surface


@dataclass(frozen=True)
class SMrs:
    inner: Surface


@dataclass(frozen=True)
class SProb:
    """``Prob[inner]``, optionally compared against a bound."""

    inner: Surface
    op: str | None = None
    bound: float | None = None


@dataclass(frozen=True)
class SRank:
    """One of the object-ranking operators."""

    kind: str  # most-risky-attack|most-risky-fault|total-max|total-min|optimal
    object: str


@dataclass(frozen=True)
class SetBool:
    label: str
    value: bool


@dataclass(frozen=True)
class SetProb:
    label: str
    value: float


@dataclass(frozen=True)
class Antecedent:
    formula: Surface


Assumption = Union[SetBool, SetProb, Antecedent]


@dataclass(frozen=True)
class Query:
    mode: str  # check|compute|computeall
    assumptions: tuple[Assumption, ...]
    body: Surface
    spans: dict[str, tuple[int, int]] = field(default_factory=dict,
                                              compare=False)

    def span_of(self, label: str) -> tuple[int | None, int | None]:
        return self.spans.get(label, (None, None))


# ---------------------------------------------------------------------------
# Parsing


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = tokenize(text, keep_newlines=True)
        self.pos = 0
        self.spans: dict[str, tuple[int, int]] = {}

    def peek(self, offset: int = 0) -> Token:
        pos = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message,
                          [Diagnostic("error", message, tok.line, tok.column)])

    def skip_newlines(self) -> None:
        while self.peek().kind == "newline":
            self.advance()

    def at_directive(self) -> str | None:
        tok = self.peek()
        if tok.kind == "ident" and tok.value in ("check", "compute",
                                                 "computeall", "assume"):
            nxt = self.peek(1)
            if nxt.kind == "punct" and nxt.value == ":":
                return tok.value
        return None

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise self.fail(f"expected {value!r}, "
                            f"found {tok.value or 'end of input'!r}")
        return self.advance()

    def label(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}, "
                            f"found {tok.value or 'end of input'!r}")
        if tok.value in QUERY_KEYWORDS:
            raise self.fail(f"{tok.value!r} is a reserved word and "
                            f"cannot name {what}")
        self.advance()
        self.spans.setdefault(tok.value, (tok.line, tok.column))
        return tok.value

    # -- query structure ---------------------------------------------------

    def parse(self) -> Query:
        self.skip_newlines()
        assumptions: list[Assumption] = []
        if self.at_directive() == "assume":
            self.advance()
            self.advance()  # the colon
            while True:
                self.skip_newlines()
                directive = self.at_directive()
                if directive is not None and directive != "assume":
                    break
                if self.peek().kind == "eof":
                    raise self.fail("the assume block is not followed by a "
                                    "check, compute or computeall directive")
                assumptions.append(self.parse_assumption())
        directive = self.at_directive()
        if directive is None or directive == "assume":
            raise self.fail("expected a check, compute or computeall directive")
        self.advance()
        self.advance()  # the colon
        body_tokens = [tok for tok in self.tokens[self.pos:]
                       if tok.kind != "newline"]
        body = _ExprParser(body_tokens, self.spans).parse_full("the query body")
        return Query(directive, tuple(assumptions), body, self.spans)

    def parse_assumption(self) -> Assumption:
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "set":
            self.advance()
            label = self.label("an evidence target")
            self.expect_punct("=")
            value_tok = self.peek()
            if value_tok.kind != "number" or value_tok.value not in ("0", "1"):
                raise self.fail("set takes the value 0 or 1")
            self.advance()
            self.end_of_line()
            return SetBool(label, value_tok.value == "1")
        if tok.kind == "ident" and tok.value == "set_prob":
            self.advance()
            label = self.label("an evidence target")
            self.expect_punct("=")
            value_tok = self.peek()
            if value_tok.kind != "number":
                raise self.fail("set_prob takes a probability")
            value = float(value_tok.value)
            if not 0.0 <= value <= 1.0:
                raise self.fail(f"probability {value_tok.value} outside [0, 1]",
                                value_tok)
            self.advance()
            self.end_of_line()
            return SetProb(label, value)
        line: list[Token] = []
        while self.peek().kind not in ("newline", "eof"):
            line.append(self.advance())
        formula = _ExprParser(line, self.spans).parse_full("an assumption")
        return Antecedent(formula)

    def end_of_line(self) -> None:
        tok = self.peek()
        if tok.kind not in ("newline", "eof"):
            raise self.fail("one assumption per line")


class _ExprParser:
    """Precedence-climbing parser over a newline-free token slice."""

    def __init__(self, tokens: list[Token], spans: dict):
        if not tokens or tokens[-1].kind != "eof":
            last = tokens[-1] if tokens else Token("eof", "", 1, 1)
            tokens = tokens + [Token("eof", "", last.line,
                                     last.column + len(last.value))]
        self.tokens = tokens
        self.pos = 0
        self.spans = spans

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message,
                          [Diagnostic("error", message, tok.line, tok.column)])

    def parse_full(self, what: str) -> Surface:
        if self.peek().kind == "eof":
            raise self.fail(f"{what} is empty")
        expr = self.parse_impl()
        if self.peek().kind != "eof":
            raise self.fail(f"unexpected {self.peek().value!r} after {what}")
        return expr

    def parse_impl(self) -> Surface:
        left = self.parse_or()
        if self.at_word("impl"):
            self.advance()
            return SImpl(left, self.parse_impl())
        return left

    def parse_or(self) -> Surface:
        left = self.parse_and()
        while self.at_word("or"):
            self.advance()
            left = SOr(left, self.parse_and())
        return left

    def parse_and(self) -> Surface:
        left = self.parse_unary()
        while self.at_word("and"):
            self.advance()
            left = SAnd(left, self.parse_unary())
        return left

    def parse_unary(self) -> Surface:
        if self.at_word("not"):
            self.advance()
            return SNot(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Surface:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "(":
            self.advance()
            inner = self.parse_impl()
            self.expect_punct(")")
            return inner
        if tok.kind == "number":
            if tok.value in ("0", "1"):
                self.advance()
                return SConst(tok.value == "1")
            raise self.fail(f"{tok.value} is not a formula; only the "
                            f"constants 0 and 1 are")
        if tok.kind != "ident":
            raise self.fail(f"expected a formula, "
                            f"found {tok.value or 'end of input'!r}")
        word = tok.value
        if word == "MRS":
            self.advance()
            inner = self.bracketed()
            return SMrs(inner)
        if word == "Prob":
            self.advance()
            inner = self.bracketed()
            cmp_tok = self.peek()
            if cmp_tok.kind == "cmp" or (cmp_tok.kind == "punct"
                                         and cmp_tok.value == "="):
                op = cmp_tok.value
                self.advance()
                bound_tok = self.peek()
                if bound_tok.kind != "number":
                    raise self.fail("expected a probability bound")
                self.advance()
                return SProb(inner, op, float(bound_tok.value))
            return SProb(inner)
        rank_kinds = {"MostRiskyA": "most-risky-attack",
                      "MostRiskyF": "most-risky-fault",
                      "MaxTotalRisk": "total-max",
                      "MinTotalRisk": "total-min",
                      "OptimalConf": "optimal"}
        if word in rank_kinds:
            self.advance()
            self.expect_punct("[")
            obj = self.label_token("an object")
            self.expect_punct("]")
            return SRank(rank_kinds[word], obj)
        if word in QUERY_KEYWORDS:
            raise self.fail(f"{word!r} cannot start a formula")
        self.advance()
        self.spans.setdefault(word, (tok.line, tok.column))
        return SAtom(word)

    def bracketed(self) -> Surface:
        self.expect_punct("[")
        inner = self.parse_impl()
        self.expect_punct("]")
        return inner

    def label_token(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.value in QUERY_KEYWORDS:
            raise self.fail(f"expected {what}")
        self.advance()
        self.spans.setdefault(tok.value, (tok.line, tok.column))
        return tok.value

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise self.fail(f"expected {value!r}, "
                            f"found {tok.value or 'end of input'!r}")
        return self.advance()

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word


def parse_query(text: str) -> Query:
    """Parse query text; raises ParseError with a positioned diagnostic."""
    return _QueryParser(text).parse()


def parse_assumptions(text: str) -> tuple[Assumption, ...]:
    """Parse bare assumption lines (the REPL's ``:assume`` argument)."""
    parser = _QueryParser(text)
    out: list[Assumption] = []
    parser.skip_newlines()
    while parser.peek().kind != "eof":
        out.append(parser.parse_assumption())
        parser.skip_newlines()
    if not out:
        raise ParseError("expected an assumption",
                         [Diagnostic("error", "expected an assumption", 1, 1)])
    return tuple(out)


# ---------------------------------------------------------------------------
# Translation


@dataclass(frozen=True)
class Plan:
    """What a query evaluates: the answering layer, the result shape, the
    lowered formula, and attribution evidence to apply up front."""

    mode: str
    layer: int
    kind: str  # check-l1|check-l2|scenarios|probability|most-risky|total-risk|optimal-conf
    l1: FormulaL1 | None = None
    l2: FormulaL2 | None = None
    l3: FormulaL3 | None = None
    prob_evidence: tuple[tuple[str, float], ...] = ()


def _query_error(message: str, query: Query, label: str | None = None
                 ) -> QueryError:
    line, column = query.span_of(label) if label else (None, None)
    return QueryError(message,
                      [Diagnostic("error", message, line, column, label)])


class _Lowerer:
    def __init__(self, query: Query, dog: Dog):
        self.query = query
        self.dog = dog

    def check_atom(self, label: str) -> None:
        if not (self.dog.is_element(label) or self.dog.is_property(label)):
            raise _query_error(f"unknown label {label}", self.query, label)

    def l1(self, node: Surface) -> FormulaL1:
        if isinstance(node, SConst):
            return LConst(node.value)
        if isinstance(node, SAtom):
            self.check_atom(node.label)
            return LAtom(node.label)
        if isinstance(node, SNot):
            return LNot(self.l1(node.inner))
        if isinstance(node, SAnd):
            return LAnd(self.l1(node.left), self.l1(node.right))
        if isinstance(node, SOr):
            return l_or(self.l1(node.left), self.l1(node.right))
        if isinstance(node, SImpl):
            return l_impl(self.l1(node.left), self.l1(node.right))
        if isinstance(node, SMrs):
            return LMrs(self.l1(node.inner))
        if isinstance(node, SProb):
            raise _query_error(
                "Prob[...] cannot appear inside a Boolean formula; "
                "compare it against a bound at the top level", self.query)
        if isinstance(node, SRank):
            raise _query_error(
                "ranking operators stand alone as a query body", self.query)
        raise TypeError(f"not a surface formula: {node!r}")

    def l2(self, node: Surface) -> FormulaL2:
        if isinstance(node, SProb):
            if node.op is None:
                raise _query_error(
                    "Prob[...] needs a threshold comparison here "
                    "(or use compute: for its value)", self.query)
            inner = self.l1(node.inner)
            if l1_nested_mrs(inner):
                raise _query_error("MRS cannot appear inside another MRS",
                                   self.query)
            return PThreshold(inner, node.op, node.bound)
        if isinstance(node, SNot):
            return PNot(self.l2(node.inner))
        if isinstance(node, SAnd):
            return PAnd(self.l2(node.left), self.l2(node.right))
        if isinstance(node, SOr):
            return p_or(self.l2(node.left), self.l2(node.right))
        if isinstance(node, SImpl):
            return p_impl(self.l2(node.left), self.l2(node.right))
        if isinstance(node, (SAtom, SConst, SMrs)):
            raise _query_error(
                "threshold formulas combine Prob[...] comparisons only; "
                "mixing in world-level atoms crosses layers", self.query)
        if isinstance(node, SRank):
            raise _query_error(
                "ranking operators stand alone as a query body", self.query)
        raise TypeError(f"not a surface formula: {node!r}")


def _contains_prob(node: Surface) -> bool:
    if isinstance(node, SProb):
        return True
    if isinstance(node, SNot):
        return _contains_prob(node.inner)
    if isinstance(node, (SAnd, SOr, SImpl)):
        return _contains_prob(node.left) or _contains_prob(node.right)
    if isinstance(node, SMrs):
        return _contains_prob(node.inner)
    return False


def translate(query: Query, dog: Dog) -> Plan:
    """Resolve a parsed query against a model into an evaluation plan."""
    lower = _Lowerer(query, dog)
    body = query.body

    set_bools = [a for a in query.assumptions if isinstance(a, SetBool)]
    set_probs = [a for a in query.assumptions if isinstance(a, SetProb)]
    antecedents = [a for a in query.assumptions if isinstance(a, Antecedent)]
    for a in set_bools + set_probs:
        lower.check_atom(a.label)

    def wrap_bool(phi: FormulaL1) -> FormulaL1:
        for a in set_bools:
            phi = LEvidence(phi, a.label, a.value)
        return phi

    def require(kind: str, ok: bool, message: str) -> None:
        if not ok:
            raise _query_error(message, query)

    def no_antecedents(where: str) -> None:
        if antecedents:
            raise _query_error(
                f"plain-formula assumptions form the antecedent of a "
                f"layer-1 check and do not apply to {where}", query)

    def no_set_probs(where: str) -> None:
        if set_probs:
            raise _query_error(f"set_prob does not apply to {where}", query)

    def prob_evidence() -> tuple[tuple[str, float], ...]:
        for a in set_probs:
            side = dog.side_of(a.label)
            if side is None:
                raise _query_error(
                    f"set_prob targets basic events or modules, "
                    f"{a.label} is neither", query, a.label)
        return tuple((a.label, a.value) for a in set_probs)

    if isinstance(body, SRank):
        mode_of_kind = {"most-risky-attack": "computeall",
                        "most-risky-fault": "computeall",
                        "optimal": "computeall",
                        "total-max": "compute",
                        "total-min": "compute"}
        expected = mode_of_kind[body.kind]
        require(body.kind, query.mode == expected,
                f"{body.kind.replace('-', ' ')} answers a {expected} query, "
                f"not {query.mode}")
        if body.object not in dog.objects:
            raise _query_error(f"unknown object {body.object}", query,
                               body.object)
        no_antecedents("ranking queries")
        if body.kind == "most-risky-attack":
            xi: FormulaL3 = MostRisky(body.object, ATTACK)
            kind = "most-risky"
        elif body.kind == "most-risky-fault":
            xi = MostRisky(body.object, FAULT)
            kind = "most-risky"
        elif body.kind == "optimal":
            xi = OptimalConf(body.object)
            kind = "optimal-conf"
        else:
            xi = TotalRisk(body.object, "max" if body.kind == "total-max"
                           else "min")
            kind = "total-risk"
        for a in set_bools:
            if not dog.is_property(a.label):
                raise _query_error(
                    f"ranking queries take property evidence only, "
                    f"{a.label} is not a property", query, a.label)
            xi = CEvidence(xi, a.label, a.value)
        return Plan(query.mode, 3, kind, l3=xi,
                    prob_evidence=prob_evidence())

    if query.mode == "computeall":
        if not isinstance(body, SMrs):
            raise _query_error(
                "computeall answers MRS[...], MostRiskyA/F[...] or "
                "OptimalConf[...] queries", query)
        inner = lower.l1(body.inner)
        if l1_nested_mrs(LMrs(inner)):
            raise _query_error("MRS bodies must be MRS-free", query)
        no_antecedents("scenario enumeration")
        no_set_probs("scenario enumeration")
        return Plan(query.mode, 1, "scenarios", l1=LMrs(wrap_bool(inner)))

    if query.mode == "compute":
        if isinstance(body, SProb) and body.op is None:
            phi = lower.l1(body.inner)
            if l1_nested_mrs(phi):
                raise _query_error("MRS cannot appear inside another MRS",
                                   query)
            no_antecedents("probability computation")
            return Plan(query.mode, 2, "probability", l1=wrap_bool(phi),
                        prob_evidence=prob_evidence())
        raise _query_error(
            "compute answers Prob[...], MaxTotalRisk[...] or "
            "MinTotalRisk[...] queries", query)

    if query.mode == "check":
        if _contains_prob(body):
            psi = lower.l2(body)
            for a in set_bools:
                psi = _wrap_thresholds(psi, a.label, a.value)
            no_antecedents("threshold checks")
            for a in set_probs:
                psi = PEvidence(psi, a.label, a.value)
            return Plan(query.mode, 2, "check-l2", l2=psi)
        phi = lower.l1(body)
        if l1_nested_mrs(phi):
            raise _query_error("MRS cannot appear inside another MRS", query)
        no_set_probs("world-level checks")
        if antecedents:
            ante = lower.l1(antecedents[0].formula)
            for a in antecedents[1:]:
                ante = LAnd(ante, lower.l1(a.formula))
            phi = l_impl(ante, phi)
        return Plan(query.mode, 1, "check-l1", l1=wrap_bool(phi))

    raise _query_error(f"unknown query mode {query.mode}", query)


def _wrap_thresholds(psi: FormulaL2, label: str, value: bool) -> FormulaL2:
    """Push Boolean evidence into every probability argument."""
    if isinstance(psi, PThreshold):
        return PThreshold(LEvidence(psi.inner, label, value), psi.op,
                          psi.bound)
    if isinstance(psi, PNot):
        return PNot(_wrap_thresholds(psi.inner, label, value))
    if isinstance(psi, PAnd):
        return PAnd(_wrap_thresholds(psi.left, label, value),
                    _wrap_thresholds(psi.right, label, value))
    if isinstance(psi, PEvidence):
        return PEvidence(_wrap_thresholds(psi.inner, label, value),
                         psi.target, psi.value)
    raise TypeError(f"not a layer-2 formula: {psi!r}")
