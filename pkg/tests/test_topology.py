import random
from itertools import product

import pytest

from finsite import (
    BaseMismatch,
    Derivation,
    RightOreRequired,
    contains,
    derives,
    enumerate_topologies,
    generate_topology,
    generated_sieve,
    is_topology,
    lattice_op,
    make_topology,
    maximal_sieve,
    pullback_sieve,
    sieve,
    special_topology,
    trivial_topology,
    validate_derivation,
)
from finsite.topology import all_sieves, j_closure, j_negation

from catgen import random_category, random_sieve_axioms


# -- sieves ----------------------------------------------------------------

def test_pullback_of_maximal_is_maximal(arrow_cat):
    mx = maximal_sieve(arrow_cat, "b")
    assert pullback_sieve(arrow_cat, mx, "f") == maximal_sieve(arrow_cat, "a")


def test_pullback_of_empty_is_empty(arrow_cat):
    assert pullback_sieve(arrow_cat, sieve("b"), "f") == sieve("a")


def test_pullback_f_of_principal_f_is_maximal(arrow_cat):
    principal = generated_sieve(arrow_cat, "b", ["f"])
    assert pullback_sieve(arrow_cat, principal, "f") == maximal_sieve(arrow_cat, "a")


def test_pullback_base_mismatch(arrow_cat):
    with pytest.raises(BaseMismatch):
        pullback_sieve(arrow_cat, sieve("a"), "f")


def test_generated_sieve_empty_and_identity(arrow_cat):
    assert generated_sieve(arrow_cat, "b", []) == sieve("b")
    assert generated_sieve(arrow_cat, "b", ["id:b"]) == maximal_sieve(arrow_cat, "b")


def test_generated_sieve_c2(c2_cat):
    # s generates the maximal sieve because s then s = id
    assert generated_sieve(c2_cat, "*", ["s"]) == maximal_sieve(c2_cat, "*")


def test_generated_sieve_idempotent(chain3_cat):
    S = generated_sieve(chain3_cat, "c", ["g"])
    assert generated_sieve(chain3_cat, "c", S.arrows) == S


# -- topology axioms ---------------------------------------------------------

def test_trivial_topology_is_topology(arrow_cat, cospan_cat, chain3_cat):
    for C in (arrow_cat, cospan_cat, chain3_cat):
        ok, violation = is_topology(C, trivial_topology(C))
        assert ok, violation


def test_stability_violation_detected(arrow_cat):
    J = make_topology(arrow_cat, {"b": [sieve("b", ["f"]), sieve("b")]})
    ok, violation = is_topology(arrow_cat, J)
    assert not ok and violation.axiom == "stability"
    assert violation.sieve == sieve("b") and violation.arrow == "f"


def test_transitivity_violation_detected(arrow_cat):
    J = make_topology(arrow_cat, {"a": [sieve("a")], "b": [sieve("b", ["f"])]})
    ok, violation = is_topology(arrow_cat, J)
    assert not ok and violation.axiom == "transitivity"
    assert violation.sieve == sieve("b")


# -- generation and the proof system -----------------------------------------

def test_generate_empty_axioms_gives_trivial(arrow_cat):
    assert generate_topology(arrow_cat, []) == trivial_topology(arrow_cat)


def test_generate_empty_sieve_on_terminal_gives_maximal(terminal_cat):
    J = generate_topology(terminal_cat, [sieve("*")])
    assert J == special_topology(terminal_cat, "maximal")


def test_generate_principal_f_gives_atomic(arrow_cat):
    J = generate_topology(arrow_cat, [sieve("b", ["f"])])
    assert J == special_topology(arrow_cat, "atomic")


def test_generated_equals_intersection_oracle():
    rng = random.Random(23)
    for _ in range(15):
        C = random_category(rng, max_objects=3, max_arrows=8)
        axioms = random_sieve_axioms(rng, C)
        J = generate_topology(C, axioms)
        above = [
            K for K in enumerate_topologies(C)
            if all(K.has(S) for S in axioms)
        ]
        intersection = {
            c: set.intersection(*(set(K.covers[c]) for K in above))
            for c in C.objects
        }
        assert J == make_topology(C, intersection)


def test_derivation_leaves(terminal_cat):
    d = derives(terminal_cat, [], maximal_sieve(terminal_cat, "*"))
    assert d is not None and d.rule == "maximal" and d.size() == 1
    d2 = derives(terminal_cat, [sieve("*")], sieve("*"))
    assert d2 is not None and d2.rule == "axiom"
    assert validate_derivation(terminal_cat, [sieve("*")], d2)


def test_two_node_stability_derivation_validates(arrow_cat):
    axioms = [sieve("b", ["f"])]
    manual = Derivation(
        "stability",
        maximal_sieve(arrow_cat, "a"),
        (Derivation("axiom", sieve("b", ["f"])),),
        arrow="f",
    )
    assert manual.size() == 2
    assert validate_derivation(arrow_cat, axioms, manual)
    found = derives(arrow_cat, axioms, maximal_sieve(arrow_cat, "a"))
    assert found is not None and validate_derivation(arrow_cat, axioms, found)


def test_tampered_derivation_rejected(arrow_cat):
    axioms = [sieve("b", ["f"])]
    bogus = Derivation(
        "stability",
        sieve("a"),  # wrong conclusion for this rule instance
        (Derivation("axiom", sieve("b", ["f"])),),
        arrow="f",
    )
    assert not validate_derivation(arrow_cat, axioms, bogus)
    not_axiom = Derivation("axiom", sieve("b"))
    assert not validate_derivation(arrow_cat, axioms, not_axiom)


def test_derives_agrees_with_membership():
    rng = random.Random(31)
    for _ in range(10):
        C = random_category(rng, max_objects=3, max_arrows=8)
        axioms = random_sieve_axioms(rng, C)
        J = generate_topology(C, axioms)
        for c in C.objects:
            for S in all_sieves(C, c):
                d = derives(C, axioms, S)
                if J.has(S):
                    assert d is not None and validate_derivation(C, axioms, d)
                else:
                    assert d is None


# -- enumeration ---------------------------------------------------------------

def test_topology_census(terminal_cat, discrete2_cat, arrow_cat):
    assert len(enumerate_topologies(terminal_cat)) == 2
    assert len(enumerate_topologies(discrete2_cat)) == 4
    assert len(enumerate_topologies(arrow_cat)) == 4


def test_enumerate_with_containment_filter(arrow_cat):
    at = special_topology(arrow_cat, "atomic")
    above = enumerate_topologies(arrow_cat, containing=at)
    assert len(above) == 2
    assert all(contains(at, K) for K in above)


def test_every_enumerated_topology_passes_axioms(cospan_cat, parallel_cat):
    for C in (cospan_cat, parallel_cat):
        for J in enumerate_topologies(C):
            ok, violation = is_topology(C, J)
            assert ok, violation


# -- lattice and Heyting structure ------------------------------------------------

def test_meet_join_unit_laws(arrow_cat):
    for J in enumerate_topologies(arrow_cat):
        assert lattice_op(arrow_cat, "meet", J, J) == J
        assert lattice_op(arrow_cat, "join", J, trivial_topology(arrow_cat)) == J


def test_join_atomic_closed_point_is_maximal(arrow_cat):
    at = special_topology(arrow_cat, "atomic")
    closed_point = make_topology(arrow_cat, {"a": [sieve("a")]})
    ok, _ = is_topology(arrow_cat, closed_point)
    assert ok
    assert lattice_op(arrow_cat, "join", at, closed_point) == special_topology(arrow_cat, "maximal")


def test_implies_atomic_trivial_is_closed_point(arrow_cat):
    at = special_topology(arrow_cat, "atomic")
    closed_point = make_topology(arrow_cat, {"a": [sieve("a")]})
    assert lattice_op(arrow_cat, "implies", at, trivial_topology(arrow_cat)) == closed_point


def test_heyting_adjunction_all_triples(arrow_cat):
    lattice = enumerate_topologies(arrow_cat)
    for J1, J2 in product(lattice, repeat=2):
        imp = lattice_op(arrow_cat, "implies", J1, J2)
        for K in lattice:
            lhs = contains(K, imp)
            rhs = contains(lattice_op(arrow_cat, "meet", K, J1), J2)
            assert lhs == rhs


def test_lattice_bounds(arrow_cat):
    lattice = enumerate_topologies(arrow_cat)
    bottom = trivial_topology(arrow_cat)
    top = special_topology(arrow_cat, "maximal")
    for J in lattice:
        assert contains(bottom, J) and contains(J, top)


# -- special topologies ------------------------------------------------------------

def test_atomic_terminal_is_trivial(terminal_cat):
    assert special_topology(terminal_cat, "atomic") == trivial_topology(terminal_cat)


def test_atomic_arrow(arrow_cat):
    at = special_topology(arrow_cat, "atomic")
    assert at.covers["a"] == (maximal_sieve(arrow_cat, "a"),)
    assert set(at.covers["b"]) == {sieve("b", ["f"]), maximal_sieve(arrow_cat, "b")}


def test_atomic_requires_right_ore(cospan_cat):
    with pytest.raises(RightOreRequired):
        special_topology(cospan_cat, "atomic")


def test_dense_relative_arrow_trivial_is_atomic(arrow_cat):
    dn = special_topology(arrow_cat, "dense_relative", J=trivial_topology(arrow_cat))
    assert dn == special_topology(arrow_cat, "atomic")


def test_dense_relative_contains_base_and_density():
    rng = random.Random(43)
    for _ in range(12):
        C = random_category(rng, max_objects=3, max_arrows=8)
        for J in enumerate_topologies(C):
            K = special_topology(C, "dense_relative", J=J)
            assert contains(J, K)
            for c in C.objects:
                if K.has(sieve(c)):
                    assert J.has(sieve(c))


def test_closure_and_negation_shape(arrow_cat):
    J = trivial_topology(arrow_cat)
    principal = sieve("b", ["f"])
    # under the trivial topology the principal sieve is already closed
    assert j_closure(arrow_cat, J, principal) == principal
    assert j_negation(arrow_cat, J, principal) == sieve("b")
    assert j_negation(arrow_cat, J, sieve("b")) == maximal_sieve(arrow_cat, "b")
    # under the atomic topology it becomes dense, hence closes to maximal
    at = special_topology(arrow_cat, "atomic")
    assert j_closure(arrow_cat, at, principal) == maximal_sieve(arrow_cat, "b")
