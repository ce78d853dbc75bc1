"""The model text format: parsing, printing, and a 1:1 JSON mirror.

Grammar (UTF-8, ``#`` comments to end of line)::

    model     := "dog" STRING "{" objects attack fault "}"
    objects   := "objects" "{" object* "}"
    object    := "object" LABEL STRING? "{"
                     ("props" ":" labels ";")?  ("parts" ":" labels ";")?
                 "}"
    attack    := "attack" "{" "root" LABEL ";" item* "}"
    fault     := "fault"  "{" "root" LABEL ";" item* "}"
    item      := "gate" LABEL STRING? "=" ("AND" | "OR") "(" labels ")"
                     clause* ";"
               | "leaf" LABEL STRING? clause* ";"
    clause    := "prob" ":" NUMBER            # leaves only
               | "participants" ":" labels
               | "impact" ":" NUMBER
               | "cond" ":" condexpr
    condexpr  := condand ("|" condand)*
    condand   := condneg ("&" condneg)*
    condneg   := "!" condneg | "(" condexpr ")" | "true" | "false" | LABEL
    labels    := LABEL ("," LABEL)*

A label starts with a letter or underscore and continues with letters,
digits, underscores or dots.  The keywords above are reserved.  The object
graph root is the unique object that is nobody's part.  Display strings
default to the label.  Every label lives in one global namespace.
"""

from __future__ import annotations

import json
import re

from .conditions import (CAnd, CFalse, CNot, COr, CProp, CTrue, Cond, FALSE,
                         TRUE, cond_to_text)
from .errors import Diagnostic, ParseError
from .model import (Attribution, Dog, DisruptionTree, GateKind, KnowledgeBase,
                    ObjectGraph, ObjectNode, TreeNode, effective_participants)

KEYWORDS = frozenset((
    "dog", "objects", "object", "props", "parts", "attack", "fault", "root",
    "gate", "leaf", "AND", "OR", "prob", "participants", "impact", "cond",
    "true", "false",
))

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<string>"[^"\n]*")
  | (?P<cmp><=|>=|<|>)
  | (?P<punct>[{}()\[\]=,;:!&|])
""", re.VERBOSE)


class Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind: str, value: str, line: int, column: int):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.column})"


def tokenize(text: str, keep_newlines: bool = False) -> list[Token]:
    """Split ``text`` into tokens, raising a positioned error on garbage."""
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             [Diagnostic("error",
                                         f"unexpected character {text[pos]!r}",
                                         line, col)])
        kind = match.lastgroup
        value = match.group()
        if kind == "nl":
            if keep_newlines:
                tokens.append(Token("newline", value, line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = match.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _ModelParser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

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

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise self.fail(f"expected {value!r}, found {tok.value or 'end of input'!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.value != word:
            raise self.fail(f"expected {word!r}, found {tok.value or 'end of input'!r}")
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    def label(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}, found {tok.value or 'end of input'!r}")
        if tok.value in KEYWORDS:
            raise self.fail(f"{tok.value!r} is a reserved word and cannot name {what}")
        return self.advance()

    def string(self) -> str | None:
        tok = self.peek()
        if tok.kind == "string":
            self.advance()
            return tok.value[1:-1]
        return None

    def number(self, what: str) -> float:
        tok = self.peek()
        if tok.kind != "number":
            raise self.fail(f"expected a number for {what}")
        self.advance()
        return float(tok.value)

    def labels(self, what: str) -> list[Token]:
        out = [self.label(what)]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            out.append(self.label(what))
        return out

    # -- grammar -----------------------------------------------------------

    def parse(self) -> tuple[Dog, Attribution]:
        self.expect_keyword("dog")
        name = self.string()
        if name is None:
            raise self.fail("expected the model name as a quoted string")
        self.expect_punct("{")
        objects = None
        trees: dict[str, tuple[str, list[TreeNode]]] = {}
        kb_impact: dict[str, float] = {}
        kb_part: dict[str, frozenset[str]] = {}
        kb_cond: dict[str, Cond] = {}
        probs: dict[str, float] = {}
        declared: dict[str, Token] = {}
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            if self.at_keyword("objects"):
                if objects is not None:
                    raise self.fail("duplicate objects section")
                objects = self.parse_objects(declared)
            elif self.at_keyword("attack") or self.at_keyword("fault"):
                side = self.advance().value
                if side in trees:
                    raise self.fail(f"duplicate {side} section")
                trees[side] = self.parse_tree(side, declared, kb_impact,
                                              kb_part, kb_cond, probs)
            else:
                raise self.fail("expected an objects, attack or fault section")
        self.expect_punct("}")
        if self.peek().kind != "eof":
            raise self.fail("trailing input after the model")
        if objects is None:
            raise self.fail("missing objects section")
        for side in ("attack", "fault"):
            if side not in trees:
                raise self.fail(f"missing {side} section")
        at_root, at_nodes = trees["attack"]
        ft_root, ft_nodes = trees["fault"]
        dog = Dog(name=name,
                  attack=DisruptionTree("attack", at_root, tuple(at_nodes)),
                  fault=DisruptionTree("fault", ft_root, tuple(ft_nodes)),
                  objects=objects,
                  kb=KnowledgeBase(kb_impact, kb_part, kb_cond))
        return dog, Attribution(probs)

    def parse_objects(self, declared: dict[str, Token]) -> ObjectGraph:
        self.expect_keyword("objects")
        self.expect_punct("{")
        nodes: list[ObjectNode] = []
        part_refs: list[Token] = []
        while self.at_keyword("object"):
            self.advance()
            name_tok = self.label("an object")
            self.declare(declared, name_tok, "object")
            display = self.string() or name_tok.value
            self.expect_punct("{")
            props: list[str] = []
            parts: list[str] = []
            if self.at_keyword("props"):
                self.advance()
                self.expect_punct(":")
                for tok in self.labels("a property"):
                    self.declare(declared, tok, "property")
                    props.append(tok.value)
                self.expect_punct(";")
            if self.at_keyword("parts"):
                self.advance()
                self.expect_punct(":")
                for tok in self.labels("a part"):
                    part_refs.append(tok)
                    parts.append(tok.value)
                self.expect_punct(";")
            self.expect_punct("}")
            nodes.append(ObjectNode(name_tok.value, display,
                                    tuple(props), tuple(parts)))
        self.expect_punct("}")
        if not nodes:
            raise self.fail("the objects section declares no objects")
        labels = {n.label for n in nodes}
        for tok in part_refs:
            if tok.value not in labels:
                raise self.fail(f"part {tok.value} is not a declared object", tok)
        owned = {p for n in nodes for p in n.parts}
        roots = [n.label for n in nodes if n.label not in owned]
        if len(roots) != 1:
            raise self.fail(
                "the object graph needs exactly one whole that is nobody's "
                f"part, found {len(roots)}")
        return ObjectGraph(roots[0], tuple(nodes))

    def parse_tree(self, side: str, declared: dict[str, Token],
                   kb_impact: dict[str, float],
                   kb_part: dict[str, frozenset[str]],
                   kb_cond: dict[str, Cond],
                   probs: dict[str, float]) -> tuple[str, list[TreeNode]]:
        self.expect_punct("{")
        self.expect_keyword("root")
        root_tok = self.label("the root element")
        self.expect_punct(";")
        nodes: list[TreeNode] = []
        child_refs: list[Token] = []
        while self.at_keyword("gate") or self.at_keyword("leaf"):
            is_gate = self.advance().value == "gate"
            name_tok = self.label("a disruption element")
            self.declare(declared, name_tok, f"{side} element")
            display = self.string() or name_tok.value
            children: tuple[str, ...] = ()
            kind = GateKind.LEAF
            if is_gate:
                self.expect_punct("=")
                op_tok = self.peek()
                if self.at_keyword("AND"):
                    kind = GateKind.AND
                elif self.at_keyword("OR"):
                    kind = GateKind.OR
                else:
                    raise self.fail("expected AND or OR", op_tok)
                self.advance()
                self.expect_punct("(")
                refs = self.labels("a child element")
                child_refs.extend(refs)
                children = tuple(t.value for t in refs)
                self.expect_punct(")")
            self.parse_clauses(name_tok.value, is_gate, kb_impact, kb_part,
                               kb_cond, probs)
            self.expect_punct(";")
            nodes.append(TreeNode(name_tok.value, kind, children, display))
        self.expect_punct("}")
        labels = {n.label for n in nodes}
        if root_tok.value not in labels:
            raise self.fail(f"root {root_tok.value} is not declared in the "
                            f"{side} section", root_tok)
        for tok in child_refs:
            if tok.value not in labels:
                raise self.fail(f"child {tok.value} is not declared in the "
                                f"{side} section", tok)
        return root_tok.value, nodes

    def parse_clauses(self, label: str, is_gate: bool,
                      kb_impact: dict[str, float],
                      kb_part: dict[str, frozenset[str]],
                      kb_cond: dict[str, Cond],
                      probs: dict[str, float]) -> None:
        seen: set[str] = set()
        while True:
            tok = self.peek()
            if tok.kind != "ident" or tok.value not in ("prob", "participants",
                                                        "impact", "cond"):
                return
            if tok.value in seen:
                raise self.fail(f"duplicate {tok.value} clause")
            seen.add(tok.value)
            self.advance()
            self.expect_punct(":")
            if tok.value == "prob":
                if is_gate:
                    raise self.fail("prob clauses belong on leaves only", tok)
                probs[label] = self.number("prob")
            elif tok.value == "impact":
                kb_impact[label] = self.number("impact")
            elif tok.value == "participants":
                kb_part[label] = frozenset(
                    t.value for t in self.labels("a participant"))
            else:
                kb_cond[label] = self.parse_cond()

    def parse_cond(self) -> Cond:
        left = self.parse_cond_and()
        while self.peek().kind == "punct" and self.peek().value == "|":
            self.advance()
            left = COr(left, self.parse_cond_and())
        return left

    def parse_cond_and(self) -> Cond:
        left = self.parse_cond_neg()
        while self.peek().kind == "punct" and self.peek().value == "&":
            self.advance()
            left = CAnd(left, self.parse_cond_neg())
        return left

    def parse_cond_neg(self) -> Cond:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "!":
            self.advance()
            return CNot(self.parse_cond_neg())
        if tok.kind == "punct" and tok.value == "(":
            self.advance()
            inner = self.parse_cond()
            self.expect_punct(")")
            return inner
        if tok.kind == "ident" and tok.value == "true":
            self.advance()
            return TRUE
        if tok.kind == "ident" and tok.value == "false":
            self.advance()
            return FALSE
        prop = self.label("a property in a condition")
        return CProp(prop.value)

    def declare(self, declared: dict[str, Token], tok: Token, kind: str) -> None:
        if tok.value in declared:
            prev = declared[tok.value]
            raise self.fail(
                f"{tok.value} already declared at {prev.line}:{prev.column}",
                tok)
        declared[tok.value] = tok


def parse_model(text: str) -> tuple[Dog, Attribution]:
    """Parse model text into a graph and its probability attribution.

    Raises ParseError with a positioned diagnostic on the first syntactic
    problem; semantic problems are left to ``validate``.
    """
    return _ModelParser(text).parse()


# ---------------------------------------------------------------------------
# Printing


def _quote(s: str) -> str:
    return '"' + s + '"'


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _clauses(dog: Dog, attribution: Attribution | None, label: str,
             is_leaf: bool) -> str:
    parts = []
    if is_leaf and attribution is not None and label in attribution.prob:
        parts.append(f"prob: {_fmt_float(attribution.prob[label])}")
    if label in dog.kb.participants:
        parts.append("participants: "
                     + ", ".join(sorted(dog.kb.participants[label])))
    if label in dog.kb.impact:
        parts.append(f"impact: {_fmt_float(dog.kb.impact[label])}")
    if label in dog.kb.cond:
        parts.append(f"cond: {cond_to_text(dog.kb.cond[label])}")
    return (" " + " ".join(parts)) if parts else ""


def print_model(dog: Dog, attribution: Attribution | None = None) -> str:
    """Render a model in canonical text form; parsing it back rebuilds the
    same structures."""
    out = [f'dog {_quote(dog.name)} {{']
    out.append("  objects {")
    for node in dog.objects.nodes:
        head = f"    object {node.label}"
        if node.display != node.label:
            head += f" {_quote(node.display)}"
        body = []
        if node.props:
            body.append(f"props: {', '.join(node.props)};")
        if node.parts:
            body.append(f"parts: {', '.join(node.parts)};")
        if body:
            out.append(head + " { " + " ".join(body) + " }")
        else:
            out.append(head + " { }")
    out.append("  }")
    for side in ("attack", "fault"):
        tree = dog.tree(side)
        out.append(f"  {side} {{")
        out.append(f"    root {tree.root};")
        for node in tree.nodes:
            head = node.label
            if node.display != node.label:
                head += f" {_quote(node.display)}"
            if node.gate is GateKind.LEAF:
                line = f"    leaf {head}"
            else:
                line = (f"    gate {head} = {node.gate.value}"
                        f"({', '.join(node.children)})")
            line += _clauses(dog, attribution, node.label,
                             node.gate is GateKind.LEAF)
            out.append(line + ";")
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON mirror


def model_to_json(dog: Dog, attribution: Attribution | None = None) -> dict:
    """A 1:1 JSON image of the model, plus derived per-element data that
    clients routinely need (effective participants)."""

    def tree_json(side: str) -> dict:
        tree = dog.tree(side)
        nodes = []
        for node in tree.nodes:
            label = node.label
            nodes.append({
                "label": label,
                "display": node.display,
                "gate": node.gate.value,
                "children": list(node.children),
                "participants": sorted(dog.kb.participants[label])
                if label in dog.kb.participants else [],
                "effective_participants":
                    sorted(effective_participants(dog, label)),
                "impact": dog.kb.impact.get(label),
                "cond": cond_to_text(dog.kb.cond[label])
                if label in dog.kb.cond else None,
                "prob": attribution.prob.get(label)
                if attribution is not None and node.gate is GateKind.LEAF
                else None,
            })
        return {"root": tree.root, "nodes": nodes}

    return {
        "name": dog.name,
        "objects": {
            "root": dog.objects.root,
            "nodes": [{
                "label": n.label,
                "display": n.display,
                "props": list(n.props),
                "parts": list(n.parts),
            } for n in dog.objects.nodes],
        },
        "attack": tree_json("attack"),
        "fault": tree_json("fault"),
    }


def parse_cond_text(text: str) -> Cond:
    """Parse one condition expression in the model syntax."""
    parser = _ModelParser(text)
    cond = parser.parse_cond()
    if parser.peek().kind != "eof":
        raise parser.fail("trailing input after the condition")
    return cond


def model_from_json(data: dict) -> tuple[Dog, Attribution]:
    """Rebuild a model from its JSON image (inverse of ``model_to_json``)."""
    objects = ObjectGraph(
        data["objects"]["root"],
        tuple(ObjectNode(n["label"], n.get("display") or n["label"],
                         tuple(n.get("props", ())), tuple(n.get("parts", ())))
              for n in data["objects"]["nodes"]))
    impact: dict[str, float] = {}
    participants: dict[str, frozenset[str]] = {}
    cond: dict[str, Cond] = {}
    probs: dict[str, float] = {}
    trees: dict[str, DisruptionTree] = {}
    for side in ("attack", "fault"):
        nodes = []
        for n in data[side]["nodes"]:
            label = n["label"]
            nodes.append(TreeNode(label, GateKind(n["gate"]),
                                  tuple(n.get("children", ())),
                                  n.get("display") or label))
            if n.get("impact") is not None:
                impact[label] = float(n["impact"])
            if n.get("participants"):
                participants[label] = frozenset(n["participants"])
            if n.get("cond") is not None:
                cond[label] = parse_cond_text(n["cond"])
            if n.get("prob") is not None:
                probs[label] = float(n["prob"])
        trees[side] = DisruptionTree(side, data[side]["root"], tuple(nodes))
    dog = Dog(data["name"], trees["attack"], trees["fault"], objects,
              KnowledgeBase(impact, participants, cond))
    return dog, Attribution(probs)


def model_json_text(dog: Dog, attribution: Attribution | None = None) -> str:
    return json.dumps(model_to_json(dog, attribution), indent=2,
                      sort_keys=True)
