"""Line-based DSL frontend for theories.

Grammar (one declaration per line, '#' starts a comment):

    theory <name>
    sort <S>
    fun <f> : S1 ... Sk -> S
    rel <R> : S1 ... Sk
    axiom (x1:S1, ...) <formula> |- <formula>

Formulas: ``top``, ``bot``, ``t1 = t2``, ``R(t, ...)``, ``and[...]``,
``or[...]``, ``exists x:S. f``; first-order mode adds ``not f``,
``implies[f, g]`` and ``forall x:S. f``. Identifiers may be quoted with
double quotes to escape punctuation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SortError, TheorySyntaxError, UnknownSymbol
from .syntax import (
    And,
    App,
    Bot,
    Eq,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Rel,
    Sequent,
    Signature,
    Theory,
    Top,
    Var,
    check_sequent,
    detect_fragment,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<seq>\|-)
  | (?P<arrow>->)
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],:.=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "theory", "sort", "fun", "rel", "axiom",
    "top", "bot", "and", "or", "not", "implies", "exists", "forall",
}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident" | "quoted" | "punct" | "seq" | "arrow"
    text: str
    line: int
    column: int

    def ident_value(self) -> str:
        if self.kind == "quoted":
            body = self.text[1:-1]
            return body.replace('\\"', '"').replace("\\\\", "\\")
        return self.text


def _tokenize_line(text: str, line_no: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TheorySyntaxError(f"unexpected character {text[pos]!r}", line_no, pos + 1)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line_no, pos + 1))
        pos = m.end()
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok], line_no: int):
        self.toks = toks
        self.i = 0
        self.line_no = line_no

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, expected: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise TheorySyntaxError(
                f"unexpected end of line{'' if expected is None else f', expected {expected}'}",
                self.line_no,
            )
        self.i += 1
        return tok

    def expect_punct(self, text: str) -> _Tok:
        tok = self.next(repr(text))
        if tok.text != text:
            raise TheorySyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def expect_name(self, what: str, allow_keyword: bool = False) -> tuple[str, _Tok]:
        tok = self.next(what)
        if tok.kind == "quoted":
            return tok.ident_value(), tok
        if tok.kind == "ident" and (allow_keyword or tok.text not in _KEYWORDS):
            return tok.text, tok
        raise TheorySyntaxError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)

    def done(self) -> bool:
        return self.i >= len(self.toks)


class _TheoryBuilder:
    def __init__(self):
        self.name: str | None = None
        self.sorts: list[str] = []
        self.functions: list[tuple[str, tuple[str, ...], str]] = []
        self.relations: list[tuple[str, tuple[str, ...]]] = []
        self.axioms: list[Sequent] = []

    def signature(self) -> Signature:
        return Signature(tuple(self.sorts), tuple(self.functions), tuple(self.relations))


def parse_theory(text: str) -> Theory:
    builder = _TheoryBuilder()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        toks = _tokenize_line(raw_line, line_no)
        if not toks:
            continue
        cur = _Cursor(toks, line_no)
        head = cur.next("a declaration keyword")
        if head.kind != "ident" or head.text not in ("theory", "sort", "fun", "rel", "axiom"):
            raise TheorySyntaxError(
                f"expected a declaration keyword, found {head.text!r}", head.line, head.column
            )
        if head.text == "theory":
            if builder.name is not None:
                raise TheorySyntaxError("duplicate theory header", head.line, head.column)
            builder.name, _ = cur.expect_name("theory name")
        elif builder.name is None:
            raise TheorySyntaxError("file must start with a theory header", head.line, head.column)
        elif head.text == "sort":
            name, tok = cur.expect_name("sort name")
            if name in builder.sorts:
                raise TheorySyntaxError(f"duplicate sort {name!r}", tok.line, tok.column)
            builder.sorts.append(name)
        elif head.text == "fun":
            name, tok = cur.expect_name("function name")
            if any(name == f[0] for f in builder.functions):
                raise TheorySyntaxError(f"duplicate function {name!r}", tok.line, tok.column)
            cur.expect_punct(":")
            args = []
            while cur.peek() is not None and cur.peek().kind != "arrow":
                args.append(_expect_sort(cur, builder))
            tok = cur.next("'->'")
            if tok.kind != "arrow":
                raise TheorySyntaxError(f"expected '->', found {tok.text!r}", tok.line, tok.column)
            result = _expect_sort(cur, builder)
            builder.functions.append((name, tuple(args), result))
        elif head.text == "rel":
            name, tok = cur.expect_name("relation name")
            if any(name == r[0] for r in builder.relations):
                raise TheorySyntaxError(f"duplicate relation {name!r}", tok.line, tok.column)
            cur.expect_punct(":")
            args = []
            while cur.peek() is not None:
                args.append(_expect_sort(cur, builder))
            builder.relations.append((name, tuple(args)))
        else:  # axiom
            seq = _parse_axiom(cur, builder)
            builder.axioms.append(seq)
        if not cur.done():
            tok = cur.peek()
            raise TheorySyntaxError(f"trailing input {tok.text!r}", tok.line, tok.column)
    if builder.name is None:
        raise TheorySyntaxError("empty input: missing theory header", 1, 1)
    sig = builder.signature()
    axioms = tuple(builder.axioms)
    return Theory(builder.name, sig, axioms, detect_fragment(axioms))


def _expect_sort(cur: _Cursor, builder: _TheoryBuilder) -> str:
    name, tok = cur.expect_name("a sort name")
    if name not in builder.sorts:
        raise SortError(f"undeclared sort {name!r}", tok.line, tok.column)
    return name


def _parse_axiom(cur: _Cursor, builder: _TheoryBuilder) -> Sequent:
    cur.expect_punct("(")
    context: list[tuple[str, str]] = []
    tok = cur.peek()
    if tok is not None and tok.text != ")":
        while True:
            var, vtok = cur.expect_name("a context variable")
            if any(var == v for v, _ in context):
                raise TheorySyntaxError(f"duplicate context variable {var!r}", vtok.line, vtok.column)
            cur.expect_punct(":")
            sort = _expect_sort(cur, builder)
            context.append((var, sort))
            tok = cur.next("',' or ')'")
            if tok.text == ")":
                break
            if tok.text != ",":
                raise TheorySyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.line, tok.column)
    else:
        cur.expect_punct(")")

    sig = builder.signature()
    parser = _FormulaParser(cur, sig, dict(context))
    premise = parser.formula()
    tok = cur.next("'|-'")
    if tok.kind != "seq":
        raise TheorySyntaxError(f"expected '|-', found {tok.text!r}", tok.line, tok.column)
    conclusion = parser.formula()
    seq = Sequent(tuple(context), premise, conclusion)
    try:
        check_sequent(sig, seq)
    except (SortError, UnknownSymbol) as exc:
        if exc.line is None:
            raise type(exc)(str(exc), cur.line_no) from exc
        raise
    return seq


class _FormulaParser:
    def __init__(self, cur: _Cursor, sig: Signature, ctx: dict[str, str]):
        self.cur = cur
        self.sig = sig
        self.relations = sig.relation_map()
        self.functions = sig.function_map()
        self.scope = dict(ctx)

    def formula(self):
        tok = self.cur.peek()
        if tok is None:
            raise TheorySyntaxError("expected a formula", self.cur.line_no)
        if tok.kind == "ident" and tok.text in _KEYWORDS:
            self.cur.next()
            if tok.text == "top":
                return Top()
            if tok.text == "bot":
                return Bot()
            if tok.text == "and":
                return And(self._formula_list())
            if tok.text == "or":
                return Or(self._formula_list())
            if tok.text == "implies":
                parts = self._formula_list()
                if len(parts) != 2:
                    raise TheorySyntaxError(
                        "implies[...] takes exactly two formulas", tok.line, tok.column
                    )
                return Implies(parts[0], parts[1])
            if tok.text == "not":
                return Not(self.formula())
            if tok.text in ("exists", "forall"):
                var, _ = self.cur.expect_name("a bound variable")
                self.cur.expect_punct(":")
                sort, stok = self.cur.expect_name("a sort name")
                if sort not in self.sig.sorts:
                    raise SortError(f"undeclared sort {sort!r}", stok.line, stok.column)
                self.cur.expect_punct(".")
                saved = self.scope.get(var)
                self.scope[var] = sort
                body = self.formula()
                if saved is None:
                    del self.scope[var]
                else:
                    self.scope[var] = saved
                return (Exists if tok.text == "exists" else Forall)(var, sort, body)
            raise TheorySyntaxError(f"unexpected keyword {tok.text!r}", tok.line, tok.column)
        # relation atom or equality between terms
        if tok.kind in ("ident", "quoted"):
            name = tok.ident_value()
            if name in self.relations:
                self.cur.next()
                args = self._term_list() if (self.cur.peek() and self.cur.peek().text == "(") else ()
                return Rel(name, tuple(args))
        left = self.term()
        self.cur.expect_punct("=")
        right = self.term()
        return Eq(left, right)

    def _formula_list(self):
        self.cur.expect_punct("[")
        parts = []
        tok = self.cur.peek()
        if tok is not None and tok.text == "]":
            self.cur.next()
            return tuple(parts)
        while True:
            parts.append(self.formula())
            tok = self.cur.next("',' or ']'")
            if tok.text == "]":
                return tuple(parts)
            if tok.text != ",":
                raise TheorySyntaxError(f"expected ',' or ']', found {tok.text!r}", tok.line, tok.column)

    def _term_list(self):
        self.cur.expect_punct("(")
        args = []
        tok = self.cur.peek()
        if tok is not None and tok.text == ")":
            self.cur.next()
            return args
        while True:
            args.append(self.term())
            tok = self.cur.next("',' or ')'")
            if tok.text == ")":
                return args
            if tok.text != ",":
                raise TheorySyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.line, tok.column)

    def term(self):
        tok = self.cur.next("a term")
        if tok.kind not in ("ident", "quoted") or (tok.kind == "ident" and tok.text in _KEYWORDS):
            raise TheorySyntaxError(f"expected a term, found {tok.text!r}", tok.line, tok.column)
        name = tok.ident_value()
        nxt = self.cur.peek()
        if nxt is not None and nxt.text == "(":
            if name not in self.functions:
                raise UnknownSymbol(f"unknown function symbol {name!r}", tok.line, tok.column)
            args = self._term_list()
            return App(name, tuple(args))
        if name in self.scope:
            return Var(name)
        if name in self.functions and not self.functions[name][0]:
            return App(name, ())
        raise UnknownSymbol(f"unknown variable or constant {name!r}", tok.line, tok.column)
