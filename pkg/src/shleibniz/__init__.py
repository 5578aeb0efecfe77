"""Exact verification of higher derived brackets on graded Leibniz algebras.

The package builds the arity-i operations induced on the suspension by a
truncated deformation of a differential and checks, exhaustively on a finite
basis and in exact rational arithmetic, that they form a strong homotopy
Leibniz structure; the dual picture (a square-zero coderivation of the cofree
dual-Leibniz coalgebra) and the gauge action on deformations are verified
against the same data.
"""

from __future__ import annotations

from .coalgebra import (
    CoderivationSpec,
    TensorElement,
    TensorPairElement,
    check_coderivation_axiom,
    check_dual_leibniz,
    check_hom_bracket_lift_agreement,
    comultiply,
    corestriction,
    decompose_k,
    evaluate_coderivation,
    hom_bracket,
    lift_coderivation,
)
from .derived import (
    DeformationFamily,
    ShLeibnizStructure,
    build_codifferential,
    build_sh_structure,
    check_codifferential,
    check_key_lemma,
    check_sh_leibniz,
    derived_bracket,
    leibniz_cohomology_check,
    partial_i,
)
from .document import AlgebraDocument, parse_document, serialize_document
from .errors import (
    DocumentError,
    DocumentIssue,
    EngineError,
    MalformedInputError,
    MCRejectionError,
    PreconditionError,
)
from .gauge import (
    GaugeFamily,
    McElement,
    build_xi,
    check_deformation,
    check_gauge_equivalence,
    exp_xi,
    gauge_transform,
    mc_to_deformation,
)
from .graded import (
    Element,
    GradedBasis,
    Permutation,
    Scalar,
    Shift,
    anti_koszul_sign,
    koszul_sign,
    shifted_degrees,
    sign_of_permutation,
    unshuffles,
)
from .multiop import (
    DgLeibnizAlgebra,
    LeibnizAlgebra,
    MultiOp,
    check_derivation,
    check_differential,
    check_leibniz_identity,
    check_rearrangement,
    check_skewsymmetry,
    commutator,
    n_i_d,
    nary_bracket,
)
from .report import CheckResult, Report, render_structured, render_text
from .results import Verdict, Violation
from .runner import RunOptions, run_command

__all__ = [name for name in dir() if not name.startswith("_")]
