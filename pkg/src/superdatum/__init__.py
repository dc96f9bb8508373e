"""Exact arithmetic for generalized root systems, quasi-reductive root data and small Lie superalgebras."""

from .analysis import (
    Equivalence,
    Isometry,
    NotIrreducible,
    OrbitTooLarge,
    RecognitionResult,
    decompose,
    equivalence_search,
    equivalent,
    find_isometry,
    is_irreducible,
    recognize,
    weyl_orbit,
)
from .catalog import (
    FAMILIES,
    GROUP_FORMS,
    FamilyTag,
    MixedKinds,
    ParameterOutOfRange,
    build_datum,
    build_grs,
    canonical_alpha,
    d21a_orbit,
    datum_corpus,
    datum_from_grs,
    direct_sum,
    grs_corpus,
)
from .document import (
    Document,
    DocumentSyntaxError,
    Report,
    SchemaError,
    VersionError,
    dumps,
    loads,
    parse_document,
    serialize,
)
from .lattice import (
    DualityPairing,
    Lattice,
    RationalForm,
    TorsionError,
    free_lattice,
    gram_matrix,
    invariant_factors,
    lattice_basis,
    lattice_direct_sum,
    quotient_lattice,
    smith_normal_form,
    span_rank,
    spans_lattice,
    sublattice,
)
from .rootdatum import (
    GRS,
    LEMMAS,
    SPAN_MODES,
    AmbiguousReflection,
    BqrReport,
    IsotropicRoot,
    NotARoot,
    RootDatum,
    Verdict,
    coroot,
    even_reflection,
    lemma_violations,
    odd_reflection,
    verify_bqr,
    verify_classical,
)
from .superalgebra import (
    BilinearForm,
    DegenerateOnCartan,
    InvariantForms,
    IsotropicOrOdd,
    NotDiagonalizable,
    RootDecomposition,
    SuperAlgebra,
    cartan_element,
    center,
    check_jacobi,
    double_odd,
    invariant_forms,
    quotient_center,
    realize,
    root_decomposition,
    sl2_triple,
    supertrace_form,
)
from .supermatrix import (
    GrassmannElement,
    NotInvertible,
    SuperMatrix,
    berezinian,
    generator,
    grassmann_mul,
    is_invertible,
)

__version__ = "0.1.0"
