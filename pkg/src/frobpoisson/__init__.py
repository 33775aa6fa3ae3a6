"""Exact Poisson (co)homology, twisted duality and BV structures for finite-dimensional Frobenius Poisson algebras."""

from .algebra import (
    PoissonAlgebra,
    Presentation,
    PresentationError,
    bracket,
    load_algebra,
    multiply,
    parse_presentation,
    validate_algebra,
)
from .bv import (
    NotUnimodularError,
    bv_delta,
    bv_identity_check,
    circ,
    cohomology_bv,
    delta_via_star,
    modular_vector,
    schouten,
    unimodularity,
    wedge_md,
)
from .cohomology import (
    MultiDerivation,
    bivector,
    coboundary,
    evaluate,
    hom_space,
    multiderivation_space,
    phi_duality_check,
    poisson_cohomology,
)
from .fields import GF, QQ, parse_field
from .frobenius import FrobeniusError, FrobeniusForm, frobenius_form, sigma_module
from .homology import boundary, poisson_homology
from .kaehler import d_element, de_rham_d, kaehler_module, wedge_forms
from .linalg import Matrix, homology_dim, kernel_basis, rank
from .modules import PoissonModule, dual_module, dual_regular_module, regular_module, twisted_module, validate_module

from . import presets

__all__ = [
    "PoissonAlgebra",
    "Presentation",
    "PresentationError",
    "bracket",
    "load_algebra",
    "multiply",
    "parse_presentation",
    "validate_algebra",
    "NotUnimodularError",
    "bv_delta",
    "bv_identity_check",
    "circ",
    "cohomology_bv",
    "delta_via_star",
    "modular_vector",
    "schouten",
    "unimodularity",
    "wedge_md",
    "MultiDerivation",
    "bivector",
    "coboundary",
    "evaluate",
    "hom_space",
    "multiderivation_space",
    "phi_duality_check",
    "poisson_cohomology",
    "GF",
    "QQ",
    "parse_field",
    "FrobeniusError",
    "FrobeniusForm",
    "frobenius_form",
    "sigma_module",
    "boundary",
    "poisson_homology",
    "d_element",
    "de_rham_d",
    "kaehler_module",
    "wedge_forms",
    "Matrix",
    "homology_dim",
    "kernel_basis",
    "rank",
    "PoissonModule",
    "dual_module",
    "dual_regular_module",
    "regular_module",
    "twisted_module",
    "validate_module",
    "presets",
]
