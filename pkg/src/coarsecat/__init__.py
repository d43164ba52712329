"""Finite and symbolic kernel for generalized bornological coarse spaces."""

from .errors import (
    CapExceeded,
    CarrierMismatch,
    CoarseError,
    DocumentError,
    IncompatibleStructures,
    InvalidMorphism,
    NonClassicalInput,
    NonInvariantGenerator,
    NotAnEntourage,
    UnsupportedCombination,
    UnsupportedDiagram,
    Verdict,
)
from .relalg import (
    Carrier,
    PointSet,
    Relation,
    compose,
    equivalence_closure,
    inverse,
    is_subset,
    restrict,
    thicken,
    union,
)
from .spaces import (
    GBCSpace,
    GroupAction,
    Morphism,
    components,
    enumerate_morphisms,
    enumerate_spaces,
    from_generators,
    identity,
    is_isomorphism,
    max_empty,
    max_max,
    min_max,
    min_min,
    morphism_violations,
    pullback_structure,
    restrict_entourage,
    split,
    subspace,
    tensor,
    validate_morphism,
)
from .limits import (
    Arrow,
    Cocone,
    Cone,
    Diagram,
    admissible,
    coequalizer,
    colimit,
    coproduct,
    equalizer,
    exists_in_classical,
    limit,
    preservation_test,
    product,
    universal_property_check,
)
from .homotopy import (
    BigFamily,
    ComplementaryPair,
    are_close,
    is_coarsely_excisive,
    is_equivalence,
    is_flasque,
    is_nice,
    validate_big_family,
    validate_complementary_pair,
)
from .symnat import (
    All,
    Band,
    BornTag,
    CoarseTag,
    Diag,
    Fin,
    FinCap,
    FinGen,
    Full,
    SemilinearSet,
    SymArrow,
    SymDiagram,
    SymMap,
    SymSpace,
    Triv,
    exa_N,
    ex_PO,
    fingen,
    sym_admissible,
    sym_pushout,
    truncate_diagram,
    truncate_map,
    truncate_space,
    validate_sym_morphism,
)
from .document import (
    Document,
    build_diagram,
    fixture_document,
    parse,
    resolve_morphism,
    resolve_sym_map,
    serialize_document,
    serialize_map,
    serialize_space,
)

__version__ = "0.1.0"
