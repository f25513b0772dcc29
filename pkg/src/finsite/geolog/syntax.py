"""Multi-sorted geometric-logic syntax: signatures, formulas, sequents, theories.

Disjunctions are finite lists; the extended nodes (negation, implication,
universal quantification) are admitted only as first-order input for the
coherent re-axiomatization pass. The pretty printer emits the line-based
DSL accepted by the parser.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from ..errors import SortError, UnknownSymbol

# fragment tags
CARTESIAN_UNKNOWN = "cartesian-unknown"
REGULAR = "regular"
COHERENT = "coherent"
GEOMETRIC = "geometric"
FIRST_ORDER = "first-order"


# -- terms ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...] = ()


Term = Union[Var, App]


# -- formulas ------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Implies:
    premise: "Formula"
    conclusion: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: str
    body: "Formula"


Formula = Union[Top, Bot, Eq, Rel, And, Or, Exists, Not, Implies, Forall]

EXTENDED_NODES = (Not, Implies, Forall)


@dataclass(frozen=True)
class Sequent:
    context: tuple[tuple[str, str], ...]  # (variable, sort) pairs
    premise: Formula
    conclusion: Formula
    label: str = field(default="", compare=False)


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    functions: tuple[tuple[str, tuple[str, ...], str], ...] = ()
    relations: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise SortError("duplicate sort names")
        fnames = [f[0] for f in self.functions]
        rnames = [r[0] for r in self.relations]
        if len(set(fnames)) != len(fnames) or len(set(rnames)) != len(rnames):
            raise SortError("duplicate function or relation names")
        declared = set(self.sorts)
        for name, args, result in self.functions:
            for s in (*args, result):
                if s not in declared:
                    raise SortError(f"function {name!r} mentions undeclared sort {s!r}")
        for name, args in self.relations:
            for s in args:
                if s not in declared:
                    raise SortError(f"relation {name!r} mentions undeclared sort {s!r}")

    def function_map(self) -> dict[str, tuple[tuple[str, ...], str]]:
        return {name: (args, result) for name, args, result in self.functions}

    def relation_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.relations)


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: tuple[Sequent, ...]
    fragment: str = GEOMETRIC


# -- well-sortedness --------------------------------------------------------------

def term_sort(sig: Signature, ctx: Mapping[str, str], term: Term) -> str:
    if isinstance(term, Var):
        if term.name not in ctx:
            raise UnknownSymbol(f"variable {term.name!r} is not in scope")
        return ctx[term.name]
    funcs = sig.function_map()
    if term.func not in funcs:
        raise UnknownSymbol(f"unknown function symbol {term.func!r}")
    arg_sorts, result = funcs[term.func]
    if len(arg_sorts) != len(term.args):
        raise SortError(f"function {term.func!r} expects {len(arg_sorts)} arguments")
    for got, want in zip(term.args, arg_sorts):
        actual = term_sort(sig, ctx, got)
        if actual != want:
            raise SortError(f"argument of {term.func!r} has sort {actual!r}, expected {want!r}")
    return result


def check_formula(sig: Signature, ctx: Mapping[str, str], formula: Formula, geometric_only: bool = False) -> None:
    """Raise SortError/UnknownSymbol unless the formula is well-sorted in ctx."""
    if isinstance(formula, (Top, Bot)):
        return
    if isinstance(formula, Eq):
        if term_sort(sig, ctx, formula.left) != term_sort(sig, ctx, formula.right):
            raise SortError("equality between terms of different sorts")
        return
    if isinstance(formula, Rel):
        rels = sig.relation_map()
        if formula.name not in rels:
            raise UnknownSymbol(f"unknown relation symbol {formula.name!r}")
        arg_sorts = rels[formula.name]
        if len(arg_sorts) != len(formula.args):
            raise SortError(f"relation {formula.name!r} expects {len(arg_sorts)} arguments")
        for got, want in zip(formula.args, arg_sorts):
            actual = term_sort(sig, ctx, got)
            if actual != want:
                raise SortError(f"argument of {formula.name!r} has sort {actual!r}, expected {want!r}")
        return
    if isinstance(formula, (And, Or)):
        for part in formula.parts:
            check_formula(sig, ctx, part, geometric_only)
        return
    if isinstance(formula, Exists):
        if formula.sort not in sig.sorts:
            raise SortError(f"undeclared sort {formula.sort!r} in quantifier")
        inner = dict(ctx)
        inner[formula.var] = formula.sort
        check_formula(sig, inner, formula.body, geometric_only)
        return
    if isinstance(formula, EXTENDED_NODES):
        if geometric_only:
            raise SortError("extended (first-order) node in a geometric-only position")
        if isinstance(formula, Not):
            check_formula(sig, ctx, formula.body, geometric_only)
        elif isinstance(formula, Implies):
            check_formula(sig, ctx, formula.premise, geometric_only)
            check_formula(sig, ctx, formula.conclusion, geometric_only)
        else:
            if formula.sort not in sig.sorts:
                raise SortError(f"undeclared sort {formula.sort!r} in quantifier")
            inner = dict(ctx)
            inner[formula.var] = formula.sort
            check_formula(sig, inner, formula.body, geometric_only)
        return
    raise TypeError(f"not a formula: {formula!r}")


def check_sequent(sig: Signature, seq: Sequent) -> None:
    ctx: dict[str, str] = {}
    for var, sort in seq.context:
        if var in ctx:
            raise SortError(f"duplicate context variable {var!r}")
        if sort not in sig.sorts:
            raise SortError(f"undeclared sort {sort!r} in context")
        ctx[var] = sort
    check_formula(sig, ctx, seq.premise)
    check_formula(sig, ctx, seq.conclusion)


def has_extended_nodes(formula: Formula) -> bool:
    if isinstance(formula, EXTENDED_NODES):
        return True
    if isinstance(formula, (And, Or)):
        return any(has_extended_nodes(p) for p in formula.parts)
    if isinstance(formula, Exists):
        return has_extended_nodes(formula.body)
    return False


def detect_fragment(axioms: Iterable[Sequent]) -> str:
    for seq in axioms:
        if has_extended_nodes(seq.premise) or has_extended_nodes(seq.conclusion):
            return FIRST_ORDER
    return GEOMETRIC


def is_geometric(theory: Theory) -> bool:
    return theory.fragment != FIRST_ORDER


def make_theory(name: str, sig: Signature, axioms: Iterable[Sequent], fragment: str | None = None) -> Theory:
    axioms = tuple(axioms)
    for seq in axioms:
        check_sequent(sig, seq)
    if fragment is None:
        fragment = detect_fragment(axioms)
    return Theory(name, sig, axioms, fragment)


def free_variables(formula: Formula) -> tuple[str, ...]:
    """Free variables in order of first appearance (left-to-right traversal)."""
    seen: list[str] = []

    def walk(f: Formula, bound: frozenset[str]):
        if isinstance(f, (Top, Bot)):
            return
        if isinstance(f, Eq):
            for t in (f.left, f.right):
                _collect_term(t, bound)
        elif isinstance(f, Rel):
            for t in f.args:
                _collect_term(t, bound)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p, bound)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body, bound | {f.var})
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, Implies):
            walk(f.premise, bound)
            walk(f.conclusion, bound)

    def _collect_term(term: Term, bound: frozenset[str]):
        if isinstance(term, Var):
            if term.name not in bound and term.name not in seen:
                seen.append(term.name)
        else:
            for a in term.args:
                _collect_term(a, bound)

    walk(formula, frozenset())
    return tuple(seen)


# -- pretty printer ----------------------------------------------------------------

_PLAIN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {
    "theory", "sort", "fun", "rel", "axiom",
    "top", "bot", "and", "or", "not", "implies", "exists", "forall",
}


def quote_ident(name: str) -> str:
    if _PLAIN.match(name) and name not in _KEYWORDS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def print_term(term: Term) -> str:
    if isinstance(term, Var):
        return quote_ident(term.name)
    if not term.args:
        return quote_ident(term.func) + "()"
    return quote_ident(term.func) + "(" + ", ".join(print_term(a) for a in term.args) + ")"


def print_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, Rel):
        return quote_ident(f.name) + "(" + ", ".join(print_term(a) for a in f.args) + ")"
    if isinstance(f, And):
        return "and[" + ", ".join(print_formula(p) for p in f.parts) + "]"
    if isinstance(f, Or):
        return "or[" + ", ".join(print_formula(p) for p in f.parts) + "]"
    if isinstance(f, Exists):
        return f"exists {quote_ident(f.var)}:{quote_ident(f.sort)}. {print_formula(f.body)}"
    if isinstance(f, Not):
        return f"not {print_formula(f.body)}"
    if isinstance(f, Implies):
        return f"implies[{print_formula(f.premise)}, {print_formula(f.conclusion)}]"
    if isinstance(f, Forall):
        return f"forall {quote_ident(f.var)}:{quote_ident(f.sort)}. {print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def print_theory(theory: Theory) -> str:
    lines = [f"theory {quote_ident(theory.name)}"]
    for s in theory.signature.sorts:
        lines.append(f"sort {quote_ident(s)}")
    for name, args, result in theory.signature.functions:
        arg_str = " ".join(quote_ident(a) for a in args)
        arg_str = arg_str + " " if arg_str else ""
        lines.append(f"fun {quote_ident(name)} : {arg_str}-> {quote_ident(result)}")
    for name, args in theory.signature.relations:
        arg_str = " ".join(quote_ident(a) for a in args)
        lines.append(f"rel {quote_ident(name)} :" + (f" {arg_str}" if arg_str else ""))
    for seq in theory.axioms:
        ctx = ", ".join(f"{quote_ident(v)}:{quote_ident(s)}" for v, s in seq.context)
        line = f"axiom ({ctx}) {print_formula(seq.premise)} |- {print_formula(seq.conclusion)}"
        if seq.label:
            line += f"  # {seq.label}"
        lines.append(line)
    return "\n".join(lines) + "\n"
