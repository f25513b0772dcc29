"""Sieves, Grothendieck topologies and the sieve-based proof system.

A sieve on ``c`` is a precomposition-closed set of arrows with codomain
``c``. Topologies are per-object cover families satisfying maximality,
stability and transitivity; the same three axioms, read as inference
rules (Stability, Transitivity), yield a proof system whose derivable
sieves are exactly the members of the generated topology.

Everything here is brute-force and exact: sieve sets are finite, so
fixpoints, enumerations and lattice scans terminate. ``ExplosionGuard``
protects the exponential enumerations behind a configurable fan-in bound.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .errors import (
    BaseMismatch,
    ExplosionGuard,
    FormatError,
    RightOreRequired,
)
from .fincat import FinCategory, SiteProperty, check_site_property

DEFAULT_FAN_IN_BOUND = 12


@dataclass(frozen=True, order=True)
class Sieve:
    """A sorted, deduplicated set of arrows into ``base``."""

    base: str
    arrows: tuple[str, ...]

    def __contains__(self, arrow: str) -> bool:
        return arrow in self.arrows

    def __len__(self) -> int:
        return len(self.arrows)

    def arrow_set(self) -> frozenset[str]:
        return frozenset(self.arrows)


def sieve(base: str, arrows: Iterable[str] = ()) -> Sieve:
    return Sieve(base, tuple(sorted(set(arrows))))


def empty_sieve(base: str) -> Sieve:
    return Sieve(base, ())


def maximal_sieve(C: FinCategory, c: str) -> Sieve:
    return Sieve(c, C.arrows_into(c))


def is_sieve(C: FinCategory, S: Sieve) -> bool:
    """Codomain condition plus closure under precomposition."""
    if S.base not in C.objects:
        return False
    members = set(S.arrows)
    for f in S.arrows:
        if f not in C.arrows or C.cod(f) != S.base:
            return False
        for g in C.arrows_into(C.dom(f)):
            if C.then(g, f) not in members:
                return False
    return True


def pullback_sieve(C: FinCategory, S: Sieve, f: str) -> Sieve:
    """f*(S) = {g with cod(g)=dom(f) | f∘g in S}."""
    if C.cod(f) != S.base:
        raise BaseMismatch(f"cannot pull back a sieve on {S.base!r} along {f!r} into {C.cod(f)!r}")
    members = set(S.arrows)
    d = C.dom(f)
    return sieve(d, (g for g in C.arrows_into(d) if C.then(g, f) in members))


def generated_sieve(C: FinCategory, base: str, generators: Iterable[str]) -> Sieve:
    """Smallest sieve on ``base`` containing the generators."""
    gens = tuple(generators)
    for g in gens:
        if C.cod(g) != base:
            raise BaseMismatch(f"generator {g!r} has codomain {C.cod(g)!r}, not {base!r}")
    members = set(gens)
    for g in gens:
        for h in C.arrows_into(C.dom(g)):
            members.add(C.then(h, g))
    return sieve(base, members)


def all_sieves(C: FinCategory, c: str, fan_in_bound: int = DEFAULT_FAN_IN_BOUND) -> tuple[Sieve, ...]:
    """Every sieve on ``c``, in lexicographic order of their arrow tuples."""
    into = C.arrows_into(c)
    if len(into) > fan_in_bound:
        raise ExplosionGuard(
            f"object {c!r} has {len(into)} incoming arrows, above the fan-in bound {fan_in_bound}"
        )
    found = []
    for mask in range(1 << len(into)):
        members = {into[i] for i in range(len(into)) if mask >> i & 1}
        closed = True
        for f in members:
            for g in C.arrows_into(C.dom(f)):
                if C.then(g, f) not in members:
                    closed = False
                    break
            if not closed:
                break
        if closed:
            found.append(sieve(c, members))
    return tuple(sorted(found, key=lambda s: s.arrows))


class GrothendieckTopology:
    """Normalized per-object covering-sieve families."""

    __slots__ = ("covers", "_key")

    def __init__(self, covers: Mapping[str, Iterable[Sieve]]):
        self.covers: dict[str, tuple[Sieve, ...]] = {
            c: tuple(sorted(set(ss), key=lambda s: s.arrows)) for c, ss in covers.items()
        }
        self._key = tuple(sorted(self.covers.items()))

    def sieves_on(self, c: str) -> tuple[Sieve, ...]:
        return self.covers[c]

    def has(self, S: Sieve) -> bool:
        return S in self.covers.get(S.base, ())

    def __eq__(self, other) -> bool:
        return isinstance(other, GrothendieckTopology) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        sizes = ", ".join(f"{c}:{len(ss)}" for c, ss in sorted(self.covers.items()))
        return f"GrothendieckTopology({sizes})"


def make_topology(C: FinCategory, covers: Mapping[str, Iterable[Sieve]]) -> GrothendieckTopology:
    """Normalize a candidate: insert maximal sieves, validate each sieve."""
    full: dict[str, set[Sieve]] = {c: {maximal_sieve(C, c)} for c in C.objects}
    for c, ss in covers.items():
        if c not in full:
            raise FormatError(f"covers listed for unknown object {c!r}")
        for S in ss:
            if S.base != c:
                raise BaseMismatch(f"sieve on {S.base!r} listed under object {c!r}")
            if not is_sieve(C, S):
                raise FormatError(f"not a sieve on {c!r}: {S.arrows}")
            full[c].add(S)
    return GrothendieckTopology(full)


def trivial_topology(C: FinCategory) -> GrothendieckTopology:
    return make_topology(C, {})


def contains(J_small: GrothendieckTopology, J_big: GrothendieckTopology) -> bool:
    """Whether every cover of the first topology is a cover of the second."""
    return all(
        set(ss) <= set(J_big.covers.get(c, ()))
        for c, ss in J_small.covers.items()
    )


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # "maximality" | "stability" | "transitivity"
    obj: str
    sieve: Sieve
    arrow: str | None = None
    detail: str = ""


def is_topology(
    C: FinCategory,
    J: GrothendieckTopology,
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> tuple[bool, AxiomViolation | None]:
    """Check maximality, stability and transitivity; report the first failure."""
    for c in C.objects:
        if c not in J.covers:
            return False, AxiomViolation("maximality", c, empty_sieve(c), detail="object has no covers")
        if maximal_sieve(C, c) not in J.covers[c]:
            return False, AxiomViolation("maximality", c, maximal_sieve(C, c), detail="maximal sieve missing")
    for c in C.objects:
        for S in J.covers[c]:
            for f in C.arrows_into(c):
                pulled = pullback_sieve(C, S, f)
                if not J.has(pulled):
                    return False, AxiomViolation(
                        "stability", c, S, arrow=f,
                        detail=f"pullback along {f!r} is not a cover on {C.dom(f)!r}",
                    )
    for c in C.objects:
        candidates = all_sieves(C, c, fan_in_bound)
        covered = set(J.covers[c])
        for Z in J.covers[c]:
            for R in candidates:
                if R in covered:
                    continue
                if all(J.has(pullback_sieve(C, R, f)) for f in Z.arrows):
                    return False, AxiomViolation(
                        "transitivity", c, R,
                        detail=f"forced by the cover {Z.arrows} but not itself a cover",
                    )
    return True, None


# -- proof system ---------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    """A finite proof tree in the sieve calculus.

    Leaves are axioms or maximal sieves; internal nodes apply the
    Stability rule (premise R, conclusion f*(R)) or the Transitivity
    rule (premises Z and f*(R) for every f in Z, conclusion R).
    """

    rule: str  # "axiom" | "maximal" | "stability" | "transitivity"
    conclusion: Sieve
    premises: tuple["Derivation", ...] = ()
    arrow: str | None = None

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


def validate_derivation(C: FinCategory, axioms: Iterable[Sieve], d: Derivation) -> bool:
    """Re-check a derivation tree against the rule schemas, independent of search."""
    axiom_set = set(axioms)

    def ok(node: Derivation) -> bool:
        if not is_sieve(C, node.conclusion):
            return False
        if node.rule == "axiom":
            return node.conclusion in axiom_set and not node.premises
        if node.rule == "maximal":
            return node.conclusion == maximal_sieve(C, node.conclusion.base) and not node.premises
        if node.rule == "stability":
            if len(node.premises) != 1 or node.arrow is None:
                return False
            (prem,) = node.premises
            f = node.arrow
            if f not in C.arrows or C.cod(f) != prem.conclusion.base:
                return False
            if node.conclusion != pullback_sieve(C, prem.conclusion, f):
                return False
            return ok(prem)
        if node.rule == "transitivity":
            if not node.premises:
                return False
            z_node, *rest = node.premises
            Z = z_node.conclusion
            if Z.base != node.conclusion.base:
                return False
            expected = [pullback_sieve(C, node.conclusion, f) for f in Z.arrows]
            if [p.conclusion for p in rest] != expected:
                return False
            return all(ok(p) for p in node.premises)
        return False

    return ok(d)


def _saturate(C: FinCategory, axioms: Iterable[Sieve], fan_in_bound: int):
    """Close axioms plus maximal sieves under Stability and Transitivity.

    Returns the derived sieve set together with one recorded rule event
    per sieve (premises of an event are always derived strictly earlier).
    """
    candidates = {c: all_sieves(C, c, fan_in_bound) for c in C.objects}
    events: dict[Sieve, tuple] = {}
    derived: set[Sieve] = set()

    for c in C.objects:
        m = maximal_sieve(C, c)
        derived.add(m)
        events[m] = ("maximal",)
    for S in axioms:
        if not is_sieve(C, S):
            raise FormatError(f"axiom is not a sieve: {S!r}")
        if S not in derived:
            derived.add(S)
            events[S] = ("axiom",)

    changed = True
    while changed:
        changed = False
        for S in sorted(derived, key=lambda s: (s.base, s.arrows)):
            for f in C.arrows_into(S.base):
                pulled = pullback_sieve(C, S, f)
                if pulled not in derived:
                    derived.add(pulled)
                    events[pulled] = ("stability", S, f)
                    changed = True
        for c in C.objects:
            present = [Z for Z in derived if Z.base == c]
            for R in candidates[c]:
                if R in derived:
                    continue
                for Z in sorted(present, key=lambda s: s.arrows):
                    if all(pullback_sieve(C, R, f) in derived for f in Z.arrows):
                        derived.add(R)
                        events[R] = ("transitivity", Z)
                        changed = True
                        break
    return derived, events


def generate_topology(
    C: FinCategory,
    axioms: Iterable[Sieve],
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> GrothendieckTopology:
    """Least topology containing the given sieves (fixpoint of the two rules)."""
    derived, _ = _saturate(C, axioms, fan_in_bound)
    covers: dict[str, set[Sieve]] = {c: set() for c in C.objects}
    for S in derived:
        covers[S.base].add(S)
    J = make_topology(C, covers)
    ok, violation = is_topology(C, J, fan_in_bound)
    if not ok:
        raise AssertionError(f"generated family violates {violation}")
    return J


def derives(
    C: FinCategory,
    axioms: Iterable[Sieve],
    S: Sieve,
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> Derivation | None:
    """A checkable derivation of ``S`` from the axioms, if one exists."""
    axioms = tuple(axioms)
    derived, events = _saturate(C, axioms, fan_in_bound)
    if S not in derived:
        return None

    memo: dict[Sieve, Derivation] = {}

    def build(target: Sieve) -> Derivation:
        if target in memo:
            return memo[target]
        event = events[target]
        if event[0] in ("axiom", "maximal"):
            node = Derivation(event[0], target)
        elif event[0] == "stability":
            _, premise, f = event
            node = Derivation("stability", target, (build(premise),), arrow=f)
        else:
            _, Z = event
            premises = (build(Z),) + tuple(
                build(pullback_sieve(C, target, f)) for f in Z.arrows
            )
            node = Derivation("transitivity", target, premises)
        memo[target] = node
        return node

    return build(S)


# -- enumeration and lattice structure -------------------------------------------

def enumerate_topologies(
    C: FinCategory,
    containing: GrothendieckTopology | None = None,
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> tuple[GrothendieckTopology, ...]:
    """All topologies on C (optionally those containing a given one).

    Brute force over per-object sieve-set assignments, filtered by the
    stability and transitivity axioms; deterministically ordered.
    """
    objs = C.objects
    per_object: list[list[tuple[Sieve, ...]]] = []
    for c in objs:
        sieves_c = all_sieves(C, c, fan_in_bound)
        required = {maximal_sieve(C, c)}
        if containing is not None:
            required |= set(containing.covers.get(c, ()))
        optional = [s for s in sieves_c if s not in required]
        choices = []
        for mask in range(1 << len(optional)):
            chosen = {optional[i] for i in range(len(optional)) if mask >> i & 1}
            choices.append(tuple(sorted(required | chosen, key=lambda s: s.arrows)))
        per_object.append(choices)

    found = []
    for assignment in product(*per_object):
        J = GrothendieckTopology(dict(zip(objs, assignment)))
        ok, _ = is_topology(C, J, fan_in_bound)
        if ok:
            found.append(J)
    return tuple(sorted(found, key=lambda J: J._key))


def lattice_op(
    C: FinCategory,
    op: str,
    J1: GrothendieckTopology,
    J2: GrothendieckTopology,
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> GrothendieckTopology:
    """meet / join / implies on the lattice of topologies.

    meet is objectwise intersection, join is the generated topology of
    the union, and implies is the largest K with meet(K, J1) ⊆ J2,
    found by scanning the enumerated lattice.
    """
    if op == "meet":
        covers = {
            c: set(J1.covers[c]) & set(J2.covers.get(c, ()))
            for c in C.objects
        }
        J = make_topology(C, covers)
        ok, violation = is_topology(C, J, fan_in_bound)
        if not ok:
            raise AssertionError(f"meet is not a topology: {violation}")
        return J
    if op == "join":
        axioms = [S for c in C.objects for S in J1.covers[c]]
        axioms += [S for c in C.objects for S in J2.covers[c]]
        return generate_topology(C, axioms, fan_in_bound)
    if op == "implies":
        candidates = [
            K
            for K in enumerate_topologies(C, fan_in_bound=fan_in_bound)
            if contains(lattice_op(C, "meet", K, J1, fan_in_bound), J2)
        ]
        best = max(candidates, key=lambda K: sum(len(ss) for ss in K.covers.values()))
        if not all(contains(K, best) for K in candidates):
            raise AssertionError("Heyting implication scan found no unique maximum")
        return best
    raise ValueError(f"unknown lattice operation {op!r}")


# -- J-relative closure and negation ----------------------------------------------

def j_closure(C: FinCategory, J: GrothendieckTopology, S: Sieve) -> Sieve:
    """{f | f*(S) is a J-cover}; the closure compatible with transitivity."""
    return sieve(
        S.base,
        (f for f in C.arrows_into(S.base) if J.has(pullback_sieve(C, S, f))),
    )


def j_negation(C: FinCategory, J: GrothendieckTopology, S: Sieve) -> Sieve:
    """Heyting negation of the J-closure of S in the fiber of J-closed sieves.

    f belongs to ¬S when every precomposite of f landing in the closure
    of S already lands in the closure of the empty sieve (the bottom
    closed sieve). On sites without empty covers this reads: no g with
    f∘g in the closure of S.
    """
    cl = j_closure(C, J, S)
    members = []
    for f in C.arrows_into(S.base):
        pulled = pullback_sieve(C, cl, f)
        bottom = j_closure(C, J, empty_sieve(C.dom(f)))
        if pulled.arrow_set() <= bottom.arrow_set():
            members.append(f)
    return sieve(S.base, members)


def special_topology(
    C: FinCategory,
    kind: str,
    J: GrothendieckTopology | None = None,
    fan_in_bound: int = DEFAULT_FAN_IN_BOUND,
) -> GrothendieckTopology:
    """trivial | maximal | atomic | dense_relative.

    atomic requires the right Ore condition; dense_relative(J) is the
    double-negation topology computed J-relatively, covers being all
    sieves with ¬¬S maximal.
    """
    if kind == "trivial":
        return trivial_topology(C)
    if kind == "maximal":
        return make_topology(C, {c: all_sieves(C, c, fan_in_bound) for c in C.objects})
    if kind == "atomic":
        report = check_site_property(C, SiteProperty.RIGHT_ORE)
        if not report.holds:
            raise RightOreRequired(
                f"atomic topology needs the right Ore condition; cospan {report.counterexample} fails"
            )
        covers: dict[str, list[Sieve]] = {}
        for c in C.objects:
            nonempty = [S for S in all_sieves(C, c, fan_in_bound) if S.arrows]
            covers[c] = nonempty
        J_at = make_topology(C, covers)
        for c in C.objects:
            for S in covers[c]:
                for f in C.arrows_into(c):
                    if not pullback_sieve(C, S, f).arrows:
                        raise AssertionError(
                            f"right Ore holds but {S.arrows} pulls back empty along {f!r}"
                        )
        ok, violation = is_topology(C, J_at, fan_in_bound)
        if not ok:
            raise AssertionError(f"atomic family is not a topology: {violation}")
        return J_at
    if kind == "dense_relative":
        if J is None:
            raise ValueError("dense_relative needs a base topology")
        covers = {}
        for c in C.objects:
            mx = maximal_sieve(C, c)
            covers[c] = [
                S
                for S in all_sieves(C, c, fan_in_bound)
                if j_negation(C, J, j_negation(C, J, S)) == mx
            ]
        K = make_topology(C, covers)
        ok, violation = is_topology(C, K, fan_in_bound)
        if not ok:
            raise AssertionError(f"double-negation family is not a topology: {violation}")
        if not contains(J, K):
            raise AssertionError("double-negation topology does not contain the base topology")
        return K
    raise ValueError(f"unknown special topology {kind!r}")


# -- serialization ----------------------------------------------------------------

def topology_to_raw(J: GrothendieckTopology) -> dict:
    return {
        "covers": {
            c: [list(S.arrows) for S in ss]
            for c, ss in sorted(J.covers.items())
        }
    }


def topology_from_raw(C: FinCategory, raw: Mapping) -> GrothendieckTopology:
    if not isinstance(raw, Mapping) or set(raw) != {"covers"}:
        raise FormatError('topology file must be an object with the single key "covers"')
    covers: dict[str, list[Sieve]] = {}
    for c, sieves_raw in raw["covers"].items():
        covers[c] = [sieve(c, arrows) for arrows in sieves_raw]
    return make_topology(C, covers)


def load_topology(C: FinCategory, path: str) -> GrothendieckTopology:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return topology_from_raw(C, raw)


def derivation_to_raw(d: Derivation) -> dict:
    out: dict = {
        "rule": d.rule,
        "sieve": {"base": d.conclusion.base, "arrows": list(d.conclusion.arrows)},
    }
    if d.arrow is not None:
        out["arrow"] = d.arrow
    if d.premises:
        out["premises"] = [derivation_to_raw(p) for p in d.premises]
    return out
