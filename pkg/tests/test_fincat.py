import random

import pytest

from finsite import (
    AssociativityViolation,
    DanglingEndpoint,
    FormatError,
    IdentityViolation,
    MissingComposite,
    SiteProperty,
    check_site_property,
    opposite,
    validate_category,
)
from finsite.fincat import category_to_raw

from catgen import random_category


def test_terminal_category_has_one_arrow(terminal_cat):
    assert terminal_cat.objects == ("*",)
    assert sorted(terminal_cat.arrows) == ["id:*"]


def test_arrow_category_has_three_arrows(arrow_cat):
    assert len(arrow_cat.arrows) == 3
    assert arrow_cat.dom("f") == "a" and arrow_cat.cod("f") == "b"
    assert arrow_cat.then("id:a", "f") == "f"
    assert arrow_cat.then("f", "id:b") == "f"


def test_conflicting_composite_declaration_rejected():
    with pytest.raises(AssociativityViolation):
        validate_category({
            "objects": ["a"],
            "arrows": [{"id": "s", "dom": "a", "cod": "a"}],
            "compose": [
                {"first": "s", "then": "s", "equals": "s"},
                {"first": "s", "then": "s", "equals": "id:a"},
            ],
        })


def test_nonassociative_table_rejected():
    # s then t = s, t then s = t, t then t = s fails at the triple (t, s, t)
    with pytest.raises(AssociativityViolation):
        validate_category({
            "objects": ["a"],
            "arrows": [
                {"id": "s", "dom": "a", "cod": "a"},
                {"id": "t", "dom": "a", "cod": "a"},
            ],
            "compose": [
                {"first": "s", "then": "s", "equals": "s"},
                {"first": "s", "then": "t", "equals": "s"},
                {"first": "t", "then": "s", "equals": "t"},
                {"first": "t", "then": "t", "equals": "s"},
            ],
        })


def test_missing_composite_named():
    with pytest.raises(MissingComposite) as exc:
        validate_category({
            "objects": ["a", "b", "c"],
            "arrows": [
                {"id": "f", "dom": "a", "cod": "b"},
                {"id": "g", "dom": "b", "cod": "c"},
            ],
            "compose": [],
        })
    assert "'f'" in str(exc.value) and "'g'" in str(exc.value)


def test_dangling_endpoint():
    with pytest.raises(DanglingEndpoint):
        validate_category({
            "objects": ["a"],
            "arrows": [{"id": "f", "dom": "a", "cod": "zz"}],
            "compose": [],
        })


def test_reserved_identity_prefix_rejected():
    with pytest.raises(IdentityViolation):
        validate_category({
            "objects": ["a"],
            "arrows": [{"id": "id:a", "dom": "a", "cod": "a"}],
            "compose": [],
        })


def test_unknown_keys_rejected():
    with pytest.raises(FormatError):
        validate_category({"objects": ["a"], "arrows": [], "compose": [], "extra": 1})


def test_validate_idempotent_on_own_output(c2_cat, chain3_cat):
    for C in (c2_cat, chain3_cat):
        assert validate_category(category_to_raw(C)) == C


def test_opposite_terminal_selfdual(terminal_cat):
    assert opposite(terminal_cat) == terminal_cat


def test_opposite_arrow_swaps(arrow_cat):
    op = opposite(arrow_cat)
    assert op.dom("f") == "b" and op.cod("f") == "a"
    assert opposite(op) == arrow_cat


def test_opposite_c2_same_table(c2_cat):
    assert opposite(c2_cat) == c2_cat


def test_opposite_involution_random():
    rng = random.Random(7)
    for _ in range(25):
        C = random_category(rng)
        assert opposite(opposite(C)) == C


def test_discrete2_no_joint_embedding(discrete2_cat):
    report = check_site_property(discrete2_cat, SiteProperty.JOINT_EMBEDDING)
    assert not report.holds
    assert report.counterexample == ("a", "a") or report.counterexample[0] != report.counterexample[1]


def test_discrete2_jep_counterexample_is_cross_pair(discrete2_cat):
    report = check_site_property(discrete2_cat, SiteProperty.JOINT_EMBEDDING)
    # no arrows at all across objects, so the first failing pair is (a, b)
    assert report.counterexample == ("a", "b")


def test_arrow_amalgamation_holds(arrow_cat):
    report = check_site_property(arrow_cat, SiteProperty.AMALGAMATION)
    assert report.holds
    assert report.witnesses  # one completion per span


def test_amalgamation_equals_right_ore_on_opposite():
    rng = random.Random(11)
    for _ in range(40):
        C = random_category(rng)
        ap = check_site_property(C, SiteProperty.AMALGAMATION).holds
        ore = check_site_property(opposite(C), SiteProperty.RIGHT_ORE).holds
        assert ap == ore


def test_leftzero_monoid_fails_right_ore():
    from catgen import monoid_raw

    C = validate_category(monoid_raw("leftzero"))
    assert not check_site_property(C, SiteProperty.RIGHT_ORE).holds
