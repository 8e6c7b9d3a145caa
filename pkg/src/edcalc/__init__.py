"""Exact essential-dimension calculator for quotients of products of odd spin groups."""

from .core import (
    STATUS_BOUNDS,
    STATUS_EXACT,
    EdResult,
    EmptySpecError,
    GroupSpecB,
    KnownCase,
    NotABasisError,
    NotReducedError,
    SpecFormatError,
    TraceEntry,
    brute_min_basis,
    compare_greedy_brute,
    compute_ed,
    diagonal_mu,
    greedy_min_basis,
    group_dim,
    is_small_product,
    known_cases,
    maximal_mu,
    random_group_spec,
    spec_from_doc,
    spec_to_doc,
    upper_bound_for_basis,
    validate,
    weight_of,
)
from .extraspecial import (
    Certificate,
    CertReport,
    CliffordTuple,
    CliffordUnit,
    NonAbelianQuotientError,
    builtin_certificate,
    centralizer_finite,
    certificate_from_doc,
    certificate_to_doc,
    closure,
    quotient_rank,
    verify_certificate,
)
from .gf2 import (
    BitVec,
    DimensionMismatchError,
    EnumerationTooLargeError,
    SubspaceF2,
    annihilator,
    count_bases,
    enumerate_bases,
    enumerate_elements,
    rref,
)

__version__ = "0.1.0"

__all__ = [
    "BitVec",
    "Certificate",
    "CertReport",
    "CliffordTuple",
    "CliffordUnit",
    "DimensionMismatchError",
    "EdResult",
    "EmptySpecError",
    "EnumerationTooLargeError",
    "GroupSpecB",
    "KnownCase",
    "NonAbelianQuotientError",
    "NotABasisError",
    "NotReducedError",
    "SpecFormatError",
    "STATUS_BOUNDS",
    "STATUS_EXACT",
    "SubspaceF2",
    "TraceEntry",
    "annihilator",
    "brute_min_basis",
    "builtin_certificate",
    "centralizer_finite",
    "certificate_from_doc",
    "certificate_to_doc",
    "closure",
    "compare_greedy_brute",
    "compute_ed",
    "count_bases",
    "diagonal_mu",
    "enumerate_bases",
    "enumerate_elements",
    "greedy_min_basis",
    "group_dim",
    "is_small_product",
    "known_cases",
    "maximal_mu",
    "quotient_rank",
    "random_group_spec",
    "rref",
    "spec_from_doc",
    "spec_to_doc",
    "upper_bound_for_basis",
    "validate",
    "verify_certificate",
    "weight_of",
]
