"""The geometric theory classified by a finite site, and its finite models.

The signature has one sort per object and one unary function symbol per
arrow. Axiom groups: (1) identities, (2) composites, (3) nonemptiness,
(4) span completion over all cones, (5) equalizing, (6) cover
surjectivity. Groups (3)-(5) express flatness of the corresponding
set-valued functor (filteredness of its category of elements); group (6)
expresses continuity for the covers of the topology.

``enumerate_flat_functors`` re-decides the same model class by checking
the literal functor conditions directly, independently of the theory AST;
agreement of the two enumerations is a regression oracle used in tests.
"""
from __future__ import annotations

from itertools import product

from ..fincat import FinCategory
from ..topology import GrothendieckTopology, Sieve, maximal_sieve
from .semantics import FinStructure, canonical_form, carrier_names
from .syntax import (
    And,
    App,
    Eq,
    Exists,
    GEOMETRIC,
    Or,
    Sequent,
    Signature,
    Theory,
    Top,
    Var,
)


def flat_signature(C: FinCategory) -> Signature:
    functions = tuple(sorted((f, (C.dom(f),), C.cod(f)) for f in C.arrows))
    return Signature(C.objects, functions, ())


def generating_covers(C: FinCategory, J: GrothendieckTopology, c: str) -> tuple[Sieve, ...]:
    """Inclusion-minimal non-maximal covers; they entail all other covers."""
    mx = maximal_sieve(C, c)
    proper = [S for S in J.covers[c] if S != mx]
    minimal = [
        S
        for S in proper
        if not any(T != S and T.arrow_set() < S.arrow_set() for T in proper)
    ]
    return tuple(minimal)


def flat_functor_theory(
    C: FinCategory,
    J: GrothendieckTopology,
    all_covers: bool = False,
) -> Theory:
    """Axiomatize the J-continuous flat set-valued functors on C."""
    axioms: list[Sequent] = []
    x, y, z = Var("x"), Var("y"), Var("z")

    for obj in C.objects:
        ident = C.identities[obj]
        axioms.append(
            Sequent((("x", obj),), Top(), Eq(App(ident, (x,)), x), label="identities")
        )

    for g in sorted(C.arrows):
        for h in sorted(C.arrows):
            if C.cod(g) != C.dom(h):
                continue
            f = C.then(g, h)
            axioms.append(
                Sequent(
                    (("x", C.dom(g)),),
                    Top(),
                    Eq(App(f, (x,)), App(h, (App(g, (x,)),))),
                    label="composites",
                )
            )

    axioms.append(
        Sequent(
            (),
            Top(),
            Or(tuple(Exists("x", obj, Top()) for obj in C.objects)),
            label="nonempty",
        )
    )

    for a in C.objects:
        for b in C.objects:
            cones = []
            for f in sorted(C.arrows):
                if C.cod(f) != a:
                    continue
                for g in sorted(C.arrows):
                    if C.cod(g) == b and C.dom(g) == C.dom(f):
                        cones.append((C.dom(f), f, g))
            disjuncts = tuple(
                Exists("z", apex, And((Eq(App(f, (z,)), x), Eq(App(g, (z,)), y))))
                for apex, f, g in cones
            )
            axioms.append(
                Sequent((("x", a), ("y", b)), Top(), Or(disjuncts), label="spans")
            )

    for f in sorted(C.arrows):
        for g in sorted(C.arrows):
            if f >= g or C.dom(f) != C.dom(g) or C.cod(f) != C.cod(g):
                continue
            a = C.dom(f)
            equalizers = [
                h for h in sorted(C.arrows)
                if C.cod(h) == a and C.then(h, f) == C.then(h, g)
            ]
            disjuncts = tuple(
                Exists("z", C.dom(h), Eq(App(h, (z,)), x)) for h in equalizers
            )
            axioms.append(
                Sequent(
                    (("x", a),),
                    Eq(App(f, (x,)), App(g, (x,))),
                    Or(disjuncts),
                    label="equalizers",
                )
            )

    for c in C.objects:
        covers = J.covers[c] if all_covers else generating_covers(C, J, c)
        for S in covers:
            disjuncts = tuple(
                Exists("y", C.dom(f), Eq(App(f, (y,)), x)) for f in S.arrows
            )
            axioms.append(
                Sequent((("x", c),), Top(), Or(disjuncts), label="covers")
            )

    return Theory("flat_site", flat_signature(C), tuple(axioms), GEOMETRIC)


def enumerate_flat_functors(
    C: FinCategory,
    J: GrothendieckTopology,
    max_size: int,
    up_to_iso: bool = False,
) -> tuple[FinStructure, ...]:
    """All set-valued functors with carriers <= max_size satisfying the
    literal conditions: functoriality, nonempty category of elements,
    span completion, equalizing, and surjectivity onto every cover."""
    objs = C.objects
    non_identity = C.non_identity_arrows()
    found = []
    for sizes in product(range(max_size + 1), repeat=len(objs)):
        carriers = {obj: carrier_names(obj, n) for obj, n in zip(objs, sizes)}
        table_choices = []
        feasible = True
        for f in non_identity:
            dom_els, cod_els = carriers[C.dom(f)], carriers[C.cod(f)]
            if dom_els and not cod_els:
                feasible = False
                break
            table_choices.append(
                [dict(zip(dom_els, values)) for values in product(cod_els, repeat=len(dom_els))]
            )
        if not feasible:
            continue
        for combo in product(*table_choices):
            tables = {obj_id: {e: e for e in carriers[obj]} for obj, obj_id in
                      ((o, C.identities[o]) for o in objs)}
            tables.update(dict(zip(non_identity, combo)))
            if not _functorial(C, tables):
                continue
            if not any(carriers[obj] for obj in objs):
                continue
            if not _span_complete(C, carriers, tables):
                continue
            if not _equalizing(C, carriers, tables):
                continue
            if not _covers_surjective(C, J, carriers, tables):
                continue
            found.append(
                FinStructure(
                    carriers,
                    {f: {(e,): v for e, v in t.items()} for f, t in tables.items()},
                )
            )
    if up_to_iso:
        sig = flat_signature(C)
        found = sorted({canonical_form(sig, M) for M in found})
    else:
        found = sorted(found)
    return tuple(found)


def _functorial(C: FinCategory, tables) -> bool:
    for g in C.arrows:
        for h in C.arrows:
            if C.cod(g) != C.dom(h):
                continue
            f = C.then(g, h)
            for e, mid in tables[g].items():
                if tables[f][e] != tables[h][mid]:
                    return False
    return True


def _span_complete(C: FinCategory, carriers, tables) -> bool:
    for a in C.objects:
        for b in C.objects:
            cones = [
                (f, g)
                for f in C.arrows_into(a)
                for g in C.arrows_into(b)
                if C.dom(f) == C.dom(g)
            ]
            for xa in carriers[a]:
                for yb in carriers[b]:
                    if not any(
                        tables[f][e] == xa and tables[g][e] == yb
                        for f, g in cones
                        for e in carriers[C.dom(f)]
                    ):
                        return False
    return True


def _equalizing(C: FinCategory, carriers, tables) -> bool:
    for f in C.arrows:
        for g in C.arrows:
            if f >= g or C.dom(f) != C.dom(g) or C.cod(f) != C.cod(g):
                continue
            a = C.dom(f)
            equalizers = [
                h for h in C.arrows_into(a) if C.then(h, f) == C.then(h, g)
            ]
            for e in carriers[a]:
                if tables[f][e] != tables[g][e]:
                    continue
                if not any(
                    tables[h][w] == e
                    for h in equalizers
                    for w in carriers[C.dom(h)]
                ):
                    return False
    return True


def _covers_surjective(C: FinCategory, J: GrothendieckTopology, carriers, tables) -> bool:
    for c in C.objects:
        for S in J.covers[c]:
            for e in carriers[c]:
                if not any(
                    tables[f][w] == e
                    for f in S.arrows
                    for w in carriers[C.dom(f)]
                ):
                    return False
    return True
