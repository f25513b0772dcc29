"""Geometric-logic frontend: syntax, parsing, semantics, re-axiomatization,
and the theories classified by finite sites."""
from .syntax import (
    And,
    App,
    Bot,
    CARTESIAN_UNKNOWN,
    COHERENT,
    Eq,
    Exists,
    FIRST_ORDER,
    Forall,
    GEOMETRIC,
    Implies,
    Not,
    Or,
    REGULAR,
    Rel,
    Sequent,
    Signature,
    Theory,
    Top,
    Var,
    check_formula,
    check_sequent,
    detect_fragment,
    free_variables,
    is_geometric,
    make_theory,
    print_formula,
    print_theory,
)
from .parser import parse_theory
from .semantics import (
    CheckResult,
    FinStructure,
    canonical_form,
    enumerate_models,
    enumerate_structures,
    eval_formula,
    load_structure,
    model_check,
    structure_from_raw,
    structure_to_raw,
    validate_structure,
)
from .morley import morleyize, restrict_structure
from .flat import (
    enumerate_flat_functors,
    flat_functor_theory,
    flat_signature,
    generating_covers,
)
