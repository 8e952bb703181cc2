"""Hadamard 2-designs and Hadamard matrices with a prime-order automorphism.

Classification up to isomorphism / monomial equivalence via circulant
quadruple search and graph canonical labeling, plus the self-dual codes over
GF(2), GF(3) and GF(5) the objects span.
"""

from .circulant import (
    CirculantQuadruple,
    CyclicSupport,
    ReductionPolicy,
    check_cross,
    check_pair,
    cross_correlation,
    enumerate_quadruples,
    paf,
)
from .construct import (
    Design,
    SignMatrix,
    VerificationError,
    circulant_matrix,
    complement_design,
    derived_design,
    dual_design,
    hadamard_3_design,
    hadamard_from_quadruple,
    incidence_matrix,
    paley_type_I,
    paley_type_II,
    verify_hadamard,
    verify_t_design,
)
from .canon import (
    CanonicalCertificate,
    ColoredGraph,
    canonical_form,
    design_aut_order,
    design_to_colored_graph,
    designs_isomorphic,
    hadamard_aut_order,
    hadamard_equivalent,
    hadamard_to_colored_graph,
)
from .codes import (
    classify_extremality,
    code_C2,
    code_C2prime,
    code_from_sign_matrix,
    count_words_of_weight,
    enumerator_template,
    min_weight_bruteforce,
    min_weight_bz,
)
from .gf import GFMatrix, LinearCode, dual_code, is_doubly_even, is_self_dual, rref
from .pipeline import ClassificationResult, classify, ingest

__version__ = "0.1.0"
