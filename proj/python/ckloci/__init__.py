"""p-adic polylogarithms and refined Chabauty-Kim loci."""

from ._core import (
    DomainError,
    InsufficientBound,
    Padic,
    ParseError,
    PrecisionError,
    coeffs_z16,
    dcw_coefficient,
    default_decomposition,
    depth2_locus,
    depth4_locus,
    f4_eval,
    is_wieferich,
    locus_11,
    padic_log,
    polylog,
    resolve_a_q2,
    steinberg_decompose,
    survey,
    teichmuller,
    verify_kim,
    zp_roots,
)

__all__ = [
    "DomainError",
    "InsufficientBound",
    "Padic",
    "ParseError",
    "PrecisionError",
    "coeffs_z16",
    "dcw_coefficient",
    "default_decomposition",
    "depth2_locus",
    "depth4_locus",
    "f4_eval",
    "is_wieferich",
    "locus_11",
    "padic_log",
    "polylog",
    "resolve_a_q2",
    "steinberg_decompose",
    "survey",
    "teichmuller",
    "verify_kim",
    "zp_roots",
]
