"""Exact computations for 3-Lie algebras: morphism and subalgebra cohomology.

Everything is over the rationals.  The main entry points:

* :func:`make_algebra`, :func:`check_morphism`, :class:`Subspace`, :func:`quotient_split`
* :func:`adjoint_rep`, :func:`induced_quotient_rep`
* :func:`nr_bracket`, :func:`structure_mc_residual`, :class:`MorphismLInfinity`
* :class:`MorphismComplex`, :class:`RepresentationComplex`, :func:`cohomology_report`
* :func:`jet_morphism_residual`, :func:`jet_subalgebra_check`
"""
from .algebra import (LinearMap, QuotientSplit, Subspace, ThreeLieAlgebra, abelian,
                      algebra_from_brackets, bracket_eval, check_fundamental_identity,
                      check_morphism, direct_sum, make_algebra, quotient_split,
                      restrict_algebra, subspace_closure_check)
from .cohomology import (CohomologyReport, MorphismComplex, RepresentationComplex,
                         assemble_matrix, cohomology_report, delta0, delta_n,
                         graph_correspondence, partial_rep_n, pullback, rigidity,
                         stability, subalgebra_stability, tilde_partial)
from .deformation import (Dual, Jet1Map, Jet1Subspace, gauge_difference,
                          jet_morphism_residual, jet_subalgebra_check, tangent_cocycle)
from .errors import (BaseNotMorphism, DegreeOverflowGuard, DimensionMismatch,
                     FundamentalIdentityViolation, IndexOutOfRange, NotAMorphism,
                     NotASubalgebra, NotFirstOrderDeformation, RepresentationAxiomViolation,
                     SchemaError, ThreeLieError, ValidationFailure)
from .nr import (GCochain, MorphismLInfinity, derived_l1, derived_l3, morphism_mc_residual,
                 nr_bracket, nr_product, structure_mc_residual, twisted_bracket)
from .representations import (Representation, adjoint_rep, induced_quotient_rep,
                              make_representation, validate_representation)

__version__ = "0.1.0"

__all__ = [
    "LinearMap",
    "QuotientSplit",
    "Subspace",
    "ThreeLieAlgebra",
    "abelian",
    "algebra_from_brackets",
    "bracket_eval",
    "check_fundamental_identity",
    "check_morphism",
    "direct_sum",
    "make_algebra",
    "quotient_split",
    "restrict_algebra",
    "subspace_closure_check",
    "CohomologyReport",
    "MorphismComplex",
    "RepresentationComplex",
    "assemble_matrix",
    "cohomology_report",
    "delta0",
    "delta_n",
    "graph_correspondence",
    "partial_rep_n",
    "pullback",
    "rigidity",
    "stability",
    "subalgebra_stability",
    "tilde_partial",
    "Dual",
    "Jet1Map",
    "Jet1Subspace",
    "gauge_difference",
    "jet_morphism_residual",
    "jet_subalgebra_check",
    "tangent_cocycle",
    "BaseNotMorphism",
    "DegreeOverflowGuard",
    "DimensionMismatch",
    "FundamentalIdentityViolation",
    "IndexOutOfRange",
    "NotAMorphism",
    "NotASubalgebra",
    "NotFirstOrderDeformation",
    "RepresentationAxiomViolation",
    "SchemaError",
    "ThreeLieError",
    "ValidationFailure",
    "GCochain",
    "MorphismLInfinity",
    "derived_l1",
    "derived_l3",
    "morphism_mc_residual",
    "nr_bracket",
    "nr_product",
    "structure_mc_residual",
    "twisted_bracket",
    "Representation",
    "adjoint_rep",
    "induced_quotient_rep",
    "make_representation",
    "validate_representation",
]
