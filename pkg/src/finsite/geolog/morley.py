"""Coherent re-axiomatization of finitary first-order theories.

Every subformula of the input axioms gets a pair of classifier relations
(one for the subformula, one for its negation) over the sorts of its free
variables; coherent axioms force the pair to be complementary and tie each
classifier to the classifiers of its immediate subformulas. Set-based
models of the output restrict bijectively to classical models of the input.
"""
from __future__ import annotations

import hashlib
from typing import Mapping

from ..errors import NotFirstOrder
from .syntax import (
    And,
    App,
    Bot,
    COHERENT,
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
    free_variables,
)


def _rename_bound(seq: Sequent, counter: list[int]) -> Sequent:
    """Rename bound variables apart so no shadowing survives."""

    def fresh() -> str:
        counter[0] += 1
        return f"_b{counter[0] - 1}"

    def rename_term(term, env: Mapping[str, str]):
        if isinstance(term, Var):
            return Var(env.get(term.name, term.name))
        return App(term.func, tuple(rename_term(a, env) for a in term.args))

    def rename(f, env: Mapping[str, str]):
        if isinstance(f, (Top, Bot)):
            return f
        if isinstance(f, Eq):
            return Eq(rename_term(f.left, env), rename_term(f.right, env))
        if isinstance(f, Rel):
            return Rel(f.name, tuple(rename_term(a, env) for a in f.args))
        if isinstance(f, And):
            return And(tuple(rename(p, env) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(rename(p, env) for p in f.parts))
        if isinstance(f, Not):
            return Not(rename(f.body, env))
        if isinstance(f, Implies):
            return Implies(rename(f.premise, env), rename(f.conclusion, env))
        if isinstance(f, (Exists, Forall)):
            new = fresh()
            inner = dict(env)
            inner[f.var] = new
            return type(f)(new, f.sort, rename(f.body, inner))
        raise TypeError(f"not a formula: {f!r}")

    return Sequent(seq.context, rename(seq.premise, {}), rename(seq.conclusion, {}), seq.label)


def _serialize(f, placeholder: Mapping[str, str]) -> str:
    """Canonical serialization with positional variable placeholders."""

    def term(t) -> str:
        if isinstance(t, Var):
            return placeholder[t.name]
        return f"({t.func} {' '.join(term(a) for a in t.args)})"

    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Eq):
        return f"(= {term(f.left)} {term(f.right)})"
    if isinstance(f, Rel):
        return f"(rel {f.name} {' '.join(term(a) for a in f.args)})"
    if isinstance(f, And):
        return f"(and {' '.join(_serialize(p, placeholder) for p in f.parts)})"
    if isinstance(f, Or):
        return f"(or {' '.join(_serialize(p, placeholder) for p in f.parts)})"
    if isinstance(f, Not):
        return f"(not {_serialize(f.body, placeholder)})"
    if isinstance(f, Implies):
        return f"(implies {_serialize(f.premise, placeholder)} {_serialize(f.conclusion, placeholder)})"
    if isinstance(f, (Exists, Forall)):
        tag = "exists" if isinstance(f, Exists) else "forall"
        inner = dict(placeholder)
        depth = sum(1 for v in placeholder.values() if v.startswith("b"))
        inner[f.var] = f"b{depth}"
        return f"({tag} {f.sort} {_serialize(f.body, inner)})"
    raise TypeError(f"not a formula: {f!r}")


class _Morleyizer:
    def __init__(self, theory: Theory):
        self.theory = theory
        self.classifiers: dict[str, tuple[str, str, tuple[str, ...]]] = {}  # serial -> (C, D, arg sorts)
        self.new_axioms: list[Sequent] = []
        self.seen_names: dict[str, str] = {}

    def classify(self, f, sort_ctx: Mapping[str, str]) -> tuple[str, str, tuple[str, ...]]:
        """Classifier names and free variables of f (in canonical order)."""
        frees = free_variables(f)
        placeholder = {v: f"v{i}" for i, v in enumerate(frees)}
        serial = _serialize(f, placeholder)
        if serial in self.classifiers:
            c_name, d_name, _ = self.classifiers[serial]
            return c_name, d_name, frees
        digest = hashlib.sha256(serial.encode()).hexdigest()[:10]
        c_name, d_name = f"C_{digest}", f"D_{digest}"
        if self.seen_names.get(c_name, serial) != serial:
            raise AssertionError(f"classifier name collision on {c_name}")
        self.seen_names[c_name] = serial
        arg_sorts = tuple(sort_ctx[v] for v in frees)
        self.classifiers[serial] = (c_name, d_name, arg_sorts)
        self._emit(f, serial, sort_ctx)
        return c_name, d_name, frees

    def _atom(self, name: str, frees) -> Rel:
        return Rel(name, tuple(Var(v) for v in frees))

    def _emit(self, f, serial: str, sort_ctx: Mapping[str, str]) -> None:
        c_name, d_name, _ = self.classifiers[serial]
        frees = free_variables(f)
        ctx = tuple((v, sort_ctx[v]) for v in sorted(frees))
        c_atom = self._atom(c_name, frees)
        d_atom = self._atom(d_name, frees)
        out = self.new_axioms
        out.append(Sequent(ctx, Top(), Or((c_atom, d_atom)), label="complement"))
        out.append(Sequent(ctx, And((c_atom, d_atom)), Bot(), label="complement"))

        if isinstance(f, Top):
            out.append(Sequent(ctx, Top(), c_atom, label="case"))
        elif isinstance(f, Bot):
            out.append(Sequent(ctx, c_atom, Bot(), label="case"))
        elif isinstance(f, (Eq, Rel)):
            out.append(Sequent(ctx, c_atom, f, label="case"))
            out.append(Sequent(ctx, f, c_atom, label="case"))
        elif isinstance(f, (And, Or)):
            parts = []
            for p in f.parts:
                pc, _, pfrees = self.classify(p, sort_ctx)
                parts.append(self._atom(pc, pfrees))
            combined = And(tuple(parts)) if isinstance(f, And) else Or(tuple(parts))
            out.append(Sequent(ctx, c_atom, combined, label="case"))
            out.append(Sequent(ctx, combined, c_atom, label="case"))
        elif isinstance(f, Exists):
            inner_ctx = dict(sort_ctx)
            inner_ctx[f.var] = f.sort
            bc, _, bfrees = self.classify(f.body, inner_ctx)
            body_atom = self._atom(bc, bfrees)
            quantified = Exists(f.var, f.sort, body_atom)
            out.append(Sequent(ctx, c_atom, quantified, label="case"))
            out.append(Sequent(ctx, quantified, c_atom, label="case"))
        elif isinstance(f, Not):
            _, bd, bfrees = self.classify(f.body, sort_ctx)
            neg_atom = self._atom(bd, bfrees)
            out.append(Sequent(ctx, c_atom, neg_atom, label="case"))
            out.append(Sequent(ctx, neg_atom, c_atom, label="case"))
        elif isinstance(f, Implies):
            _, pd, pfrees = self.classify(f.premise, sort_ctx)
            qc, _, qfrees = self.classify(f.conclusion, sort_ctx)
            expansion = Or((self._atom(pd, pfrees), self._atom(qc, qfrees)))
            out.append(Sequent(ctx, c_atom, expansion, label="case"))
            out.append(Sequent(ctx, expansion, c_atom, label="case"))
        elif isinstance(f, Forall):
            inner_ctx = dict(sort_ctx)
            inner_ctx[f.var] = f.sort
            _, bd, bfrees = self.classify(f.body, inner_ctx)
            body_neg = self._atom(bd, bfrees)
            quantified = Exists(f.var, f.sort, body_neg)
            out.append(Sequent(ctx, d_atom, quantified, label="case"))
            out.append(Sequent(ctx, quantified, d_atom, label="case"))
        else:
            raise TypeError(f"not a formula: {f!r}")


def morleyize(theory: Theory) -> Theory:
    """Coherent theory over an extended signature with the same finite models.

    Accepts any finitary theory (the interesting case is first-order input);
    disjunction lists in this toolkit are always finite, so infinitary input
    cannot arise.
    """
    for seq in theory.axioms:
        for _, sort in seq.context:
            if sort not in theory.signature.sorts:
                raise NotFirstOrder(f"axiom context uses undeclared sort {sort!r}")

    counter = [0]
    renamed = [_rename_bound(seq, counter) for seq in theory.axioms]

    worker = _Morleyizer(theory)
    translated: list[Sequent] = []
    for seq in renamed:
        sort_ctx = dict(seq.context)
        pc, _, pfrees = worker.classify(seq.premise, sort_ctx)
        cc, _, cfrees = worker.classify(seq.conclusion, sort_ctx)
        translated.append(
            Sequent(
                seq.context,
                Rel(pc, tuple(Var(v) for v in pfrees)),
                Rel(cc, tuple(Var(v) for v in cfrees)),
                label="translated",
            )
        )

    new_relations = sorted(
        (name, args)
        for serial, (c_name, d_name, args) in worker.classifiers.items()
        for name in (c_name, d_name)
    )
    signature = Signature(
        theory.signature.sorts,
        theory.signature.functions,
        tuple(sorted(theory.signature.relations) + new_relations),
    )
    axioms = tuple(worker.new_axioms + translated)
    return Theory(f"{theory.name}_m", signature, axioms, COHERENT)


def restrict_structure(original: Signature, M) -> "FinStructure":
    """Forget the classifier tables, keeping the original signature only."""
    from .semantics import FinStructure

    keep_f = {name for name, _, _ in original.functions}
    keep_r = {name for name, _ in original.relations}
    return FinStructure(
        {s: M.carriers[s] for s in original.sorts},
        {f: table for f, table in M.functions.items() if f in keep_f},
        {r: rows for r, rows in M.relations.items() if r in keep_r},
    )
