"""Finite structures, Tarskian model checking and bounded enumeration.

Satisfaction is decided by exhaustive assignment enumeration; extended
nodes (negation, implication, universal quantification) get classical
semantics. Isomorphism classes are canonicalized by minimizing the full
table serialization over all per-sort carrier relabelings, which is exact
at desk scale.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Mapping

from ..errors import ExplosionGuard, FormatError, SignatureMismatch
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
)

DEFAULT_CANDIDATE_CAP = 2_000_000


class FinStructure:
    """A finite interpretation: per-sort carriers plus total tables."""

    __slots__ = ("carriers", "functions", "relations", "_key")

    def __init__(
        self,
        carriers: Mapping[str, Iterable[str]],
        functions: Mapping[str, Mapping[tuple[str, ...], str]] | None = None,
        relations: Mapping[str, Iterable[tuple[str, ...]]] | None = None,
    ):
        self.carriers = {s: tuple(es) for s, es in carriers.items()}
        self.functions = {f: dict(table) for f, table in (functions or {}).items()}
        self.relations = {r: frozenset(map(tuple, rows)) for r, rows in (relations or {}).items()}
        self._key = (
            tuple(sorted(self.carriers.items())),
            tuple(sorted((f, tuple(sorted(t.items()))) for f, t in self.functions.items())),
            tuple(sorted((r, tuple(sorted(rows))) for r, rows in self.relations.items())),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, FinStructure) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        sizes = ", ".join(f"{s}:{len(es)}" for s, es in sorted(self.carriers.items()))
        return f"FinStructure({sizes})"

    def key(self):
        return self._key


def validate_structure(sig: Signature, M: FinStructure) -> None:
    """Totality and typing of all tables against the signature."""
    for s in sig.sorts:
        if s not in M.carriers:
            raise SignatureMismatch(f"no carrier for sort {s!r}")
    for name, args, result in sig.functions:
        table = M.functions.get(name)
        if table is None:
            raise SignatureMismatch(f"no table for function {name!r}")
        domain = list(product(*(M.carriers[a] for a in args)))
        if set(table) != set(domain):
            raise SignatureMismatch(f"function {name!r} table is not total")
        for row, value in table.items():
            if value not in M.carriers[result]:
                raise SignatureMismatch(f"function {name!r} maps {row} outside its result carrier")
    for name, args in sig.relations:
        rows = M.relations.get(name)
        if rows is None:
            raise SignatureMismatch(f"no table for relation {name!r}")
        for row in rows:
            if len(row) != len(args) or any(e not in M.carriers[s] for e, s in zip(row, args)):
                raise SignatureMismatch(f"relation {name!r} row {row} is ill-typed")


def eval_term(M: FinStructure, assignment: Mapping[str, str], term) -> str:
    if isinstance(term, Var):
        return assignment[term.name]
    args = tuple(eval_term(M, assignment, a) for a in term.args)
    return M.functions[term.func][args]


def eval_formula(M: FinStructure, assignment: Mapping[str, str], formula) -> bool:
    if isinstance(formula, Top):
        return True
    if isinstance(formula, Bot):
        return False
    if isinstance(formula, Eq):
        return eval_term(M, assignment, formula.left) == eval_term(M, assignment, formula.right)
    if isinstance(formula, Rel):
        row = tuple(eval_term(M, assignment, a) for a in formula.args)
        return row in M.relations[formula.name]
    if isinstance(formula, And):
        return all(eval_formula(M, assignment, p) for p in formula.parts)
    if isinstance(formula, Or):
        return any(eval_formula(M, assignment, p) for p in formula.parts)
    if isinstance(formula, Exists):
        inner = dict(assignment)
        for e in M.carriers[formula.sort]:
            inner[formula.var] = e
            if eval_formula(M, inner, formula.body):
                return True
        return False
    if isinstance(formula, Not):
        return not eval_formula(M, assignment, formula.body)
    if isinstance(formula, Implies):
        return (not eval_formula(M, assignment, formula.premise)) or eval_formula(
            M, assignment, formula.conclusion
        )
    if isinstance(formula, Forall):
        inner = dict(assignment)
        for e in M.carriers[formula.sort]:
            inner[formula.var] = e
            if not eval_formula(M, inner, formula.body):
                return False
        return True
    raise TypeError(f"not a formula: {formula!r}")


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    sequent: Sequent | None = None
    assignment: tuple[tuple[str, str], ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def sequent_holds(M: FinStructure, seq: Sequent) -> CheckResult:
    domains = [M.carriers[sort] for _, sort in seq.context]
    names = [var for var, _ in seq.context]
    for values in product(*domains):
        assignment = dict(zip(names, values))
        if eval_formula(M, assignment, seq.premise) and not eval_formula(M, assignment, seq.conclusion):
            return CheckResult(False, seq, tuple(zip(names, values)))
    return CheckResult(True)


def model_check(target: Theory | Sequent, M: FinStructure) -> CheckResult:
    """Satisfaction of a sequent (or of every axiom of a theory) in M."""
    if isinstance(target, Theory):
        validate_structure(target.signature, M)
        for seq in target.axioms:
            result = sequent_holds(M, seq)
            if not result.holds:
                return result
        return CheckResult(True)
    return sequent_holds(M, target)


# -- enumeration -------------------------------------------------------------------

def carrier_names(sort: str, size: int) -> tuple[str, ...]:
    return tuple(f"{sort}{i}" for i in range(size))


def enumerate_structures(
    sig: Signature,
    max_size: int,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
):
    """Yield every structure with carriers of size <= max_size.

    Carriers use the canonical names ``<sort>0 .. <sort>k``; the candidate
    count is estimated up front and guarded.
    """
    sorts = sig.sorts
    for sizes in product(range(max_size + 1), repeat=len(sorts)):
        carriers = {s: carrier_names(s, n) for s, n in zip(sorts, sizes)}
        total = 1
        feasible = True
        fn_domains = {}
        for name, args, result in sig.functions:
            dom = list(product(*(carriers[a] for a in args)))
            fn_domains[name] = dom
            n_result = len(carriers[result])
            if dom and n_result == 0:
                feasible = False
                break
            total *= max(n_result, 1) ** len(dom)
        if not feasible:
            continue
        for name, args in sig.relations:
            rows = 1
            for a in args:
                rows *= len(carriers[a])
            total *= 2 ** rows
        if total > candidate_cap:
            raise ExplosionGuard(
                f"{total} candidate structures at sizes {dict(zip(sorts, sizes))}, cap is {candidate_cap}"
            )

        fn_names = [f[0] for f in sig.functions]
        fn_results = {name: carriers[result] for name, _, result in sig.functions}
        fn_choices = []
        for name in fn_names:
            dom = fn_domains[name]
            values = fn_results[name]
            fn_choices.append([dict(zip(dom, choice)) for choice in product(values, repeat=len(dom))])
        rel_names = [r[0] for r in sig.relations]
        rel_choices = []
        for name, args in sig.relations:
            rows = list(product(*(carriers[a] for a in args)))
            subsets = []
            for mask in range(1 << len(rows)):
                subsets.append(frozenset(rows[i] for i in range(len(rows)) if mask >> i & 1))
            rel_choices.append(subsets)

        for fn_tables in product(*fn_choices):
            for rel_tables in product(*rel_choices):
                yield FinStructure(
                    carriers,
                    dict(zip(fn_names, fn_tables)),
                    dict(zip(rel_names, rel_tables)),
                )


def canonical_form(sig: Signature, M: FinStructure) -> FinStructure:
    """Minimal-relabeling representative of the isomorphism class of M."""
    sorts = sig.sorts
    perms_by_sort = []
    for s in sorts:
        es = M.carriers[s]
        perms_by_sort.append(list(permutations(range(len(es)))))
    best = None
    for combo in product(*perms_by_sort):
        rename = {}
        for s, perm in zip(sorts, combo):
            es = M.carriers[s]
            for old_index, new_index in enumerate(perm):
                rename[es[old_index]] = f"{s}{new_index}"
        carriers = {s: carrier_names(s, len(M.carriers[s])) for s in sorts}
        functions = {
            f: {tuple(rename[a] for a in row): rename[v] for row, v in table.items()}
            for f, table in M.functions.items()
        }
        relations = {
            r: frozenset(tuple(rename[a] for a in row) for row in rows)
            for r, rows in M.relations.items()
        }
        candidate = FinStructure(carriers, functions, relations)
        if best is None or candidate.key() < best.key():
            best = candidate
    return best if best is not None else M


def enumerate_models(
    theory: Theory,
    max_size: int,
    up_to_iso: bool = False,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> tuple[FinStructure, ...]:
    """All bounded models of the theory, optionally one per isomorphism class."""
    found = []
    for M in enumerate_structures(theory.signature, max_size, candidate_cap):
        if all(sequent_holds(M, seq).holds for seq in theory.axioms):
            found.append(M)
    if up_to_iso:
        found = sorted({canonical_form(theory.signature, M) for M in found})
    else:
        found = sorted(found)
    return tuple(found)


# -- serialization -------------------------------------------------------------------

def structure_to_raw(M: FinStructure) -> dict:
    return {
        "carriers": {s: list(es) for s, es in sorted(M.carriers.items())},
        "functions": {
            f: [[list(row), value] for row, value in sorted(table.items())]
            for f, table in sorted(M.functions.items())
        },
        "relations": {
            r: [list(row) for row in sorted(rows)]
            for r, rows in sorted(M.relations.items())
        },
    }


def structure_from_raw(raw: Mapping) -> FinStructure:
    if not isinstance(raw, Mapping) or set(raw) - {"carriers", "functions", "relations"}:
        raise FormatError('structure file must have keys "carriers", "functions", "relations"')
    carriers = {s: tuple(es) for s, es in raw.get("carriers", {}).items()}
    functions = {}
    for f, entries in raw.get("functions", {}).items():
        table = {}
        for entry in entries:
            if len(entry) != 2:
                raise FormatError(f"function entry {entry!r} must be [args, value]")
            row, value = entry
            table[tuple(row)] = value
        functions[f] = table
    relations = {
        r: [tuple(row) for row in rows] for r, rows in raw.get("relations", {}).items()
    }
    return FinStructure(carriers, functions, relations)


def load_structure(path: str) -> FinStructure:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return structure_from_raw(raw)
