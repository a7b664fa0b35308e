"""arrfree: exact computations with complex hyperplane arrangements.

Construct arrangements over cyclotomic fields, compute intersection
lattices and Poincare polynomials in exact arithmetic, and verify or search
for induction-table certificates of inductive freeness.
"""

from .exactnum import CycNum, Rational, cyclotomic_polynomial, euler_phi, reduce_mod_cyclotomic
from .geometry import (
    Arrangement,
    CoordinateMap,
    LinearForm,
    Triple,
    arrangement_from_forms,
    delete,
    empty,
    forms_equal_as_sets,
    localization,
    normalize_form,
    product,
    restrict,
    triple,
)
from .lattice import (
    IntegerPolynomial,
    LatticeElement,
    exponents_from_factorization,
    intersection_lattice,
    mobius_values,
    poincare_polynomial,
)
from .freeness import (
    CertificateError,
    CertStep,
    HifReport,
    InductionCertificate,
    NonFreeWitness,
    SearchEngine,
    Status,
    Verdict,
    check_hif,
    derive_certificate,
    nonfree_witness,
    not_if_by_restriction,
    replay_certificate,
    search_if,
    verify_step,
)
from . import catalog, formats

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "CertStep",
    "CertificateError",
    "CoordinateMap",
    "CycNum",
    "HifReport",
    "InductionCertificate",
    "IntegerPolynomial",
    "LatticeElement",
    "LinearForm",
    "NonFreeWitness",
    "Rational",
    "SearchEngine",
    "Status",
    "Triple",
    "Verdict",
    "arrangement_from_forms",
    "catalog",
    "check_hif",
    "cyclotomic_polynomial",
    "delete",
    "derive_certificate",
    "empty",
    "euler_phi",
    "exponents_from_factorization",
    "formats",
    "forms_equal_as_sets",
    "intersection_lattice",
    "localization",
    "mobius_values",
    "nonfree_witness",
    "normalize_form",
    "not_if_by_restriction",
    "poincare_polynomial",
    "product",
    "reduce_mod_cyclotomic",
    "replay_certificate",
    "restrict",
    "search_if",
    "triple",
    "verify_step",
]
