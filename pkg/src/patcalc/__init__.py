"""Exact computations with cartesian patterns on finite categories.

Finite categories and functors as integer tables, pattern validation,
Kan extensions against brute-force oracles, free pattern algebras graded
by size, Day convolution for category-valued monoids, and Morita-style
comparisons between patterns, all at a chosen truncation level.
"""

from .errors import (
    CommandError,
    DslError,
    DslSyntaxError,
    DuplicateName,
    MissingFactorization,
    NoElementaryObjects,
    PatcalcError,
    PreconditionError,
    TableError,
    TruncationEscape,
    TypeMismatch,
    UnknownCommand,
    UnknownReference,
)
from .fincat import (
    CategoryBuilder,
    FinCat,
    FinFunctor,
    check_equivalence,
    groupoid_core,
    opposite,
    product,
    terminal_category,
    validate_category,
)
from .kan import (
    Colimit,
    LanResult,
    RanResult,
    SetFunctor,
    SetNat,
    colimit,
    lan,
    limit,
    precompose,
    ran,
    representable,
)
from .patterns import (
    PatternData,
    PatternMorphism,
    check_cartesian_pattern,
    check_monoid,
    check_operad_fibration,
    check_pattern_morphism,
    commutative_monoid_functor,
    el_pattern,
    factorize,
    fiber_product_with_gamma,
    gamma_times,
    identity_morphism,
    int_pattern,
    monoid_gamma_roundtrip,
)
from .freealg import (
    GradedFreeAlgebra,
    act_groupoid,
    check_extendable_morphism,
    check_extendable_pattern,
    free_algebra,
    generators,
    lan_monoid,
)
from .day import (
    CatMonoid,
    Fibration,
    check_yoneda_monoidal,
    day_convolve,
    discrete_cat_monoid,
    fiberwise_op,
    grothendieck,
    monoid_algebra_bridge,
    one_object_cat_monoid,
)
from .morita import MoritaReport, check_morita, transport_free_algebra
from .dsl import DslDocument, parse_dsl, print_document
from .cli import Workspace
from .report import Report
from .stdlib import (
    BuilderSpec,
    MorphismSpec,
    ass,
    bimod,
    build_morphism,
    build_pattern,
    cmod,
    cut,
    cut_prime,
    delta_k_op,
    delta_op,
    delta_op_slice1,
    el_inclusion,
    f_star,
    fstar_coslice,
    int_inclusion,
    mu,
)

__version__ = "0.1.0"

__all__ = [n for n in dir() if not n.startswith("_")]
