"""finsite: finite sites, Grothendieck topologies and their topos invariants.

A desk-scale toolkit: finite categories with explicit composition,
sieve-based proof search, topology enumeration and lattice operations,
finite-set-valued sheaves with their classifier and invariants, a
geometric-theory DSL with bounded model enumeration, and the
site-to-theory transfers (quotients, Booleanization, DeMorganization,
amalgamation/joint-embedding analysis, equivalence fingerprints).
"""
from .errors import (
    AmbiguousMaximum,
    AssociativityViolation,
    BaseMismatch,
    DanglingEndpoint,
    ExplosionGuard,
    FinsiteError,
    FormatError,
    IdentityViolation,
    InconsistentRealization,
    MissingComposite,
    NotContaining,
    NotFirstOrder,
    RightOreRequired,
    SignatureMismatch,
    SortError,
    TheorySyntaxError,
    UnknownSymbol,
)
from .fincat import (
    FinCategory,
    PropertyReport,
    SiteProperty,
    check_site_property,
    load_category,
    opposite,
    validate_category,
)
from .topology import (
    Derivation,
    GrothendieckTopology,
    Sieve,
    all_sieves,
    contains,
    derives,
    enumerate_topologies,
    generate_topology,
    generated_sieve,
    is_topology,
    lattice_op,
    load_topology,
    make_topology,
    maximal_sieve,
    pullback_sieve,
    sieve,
    special_topology,
    trivial_topology,
    validate_derivation,
)

__version__ = "0.1.0"
