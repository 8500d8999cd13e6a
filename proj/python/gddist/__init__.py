"""Gamma difference distribution: densities, distribution functions and statistics."""

from ._gddist import (
    GDDError,
    GDDParams,
    bench,
    cdf,
    cdf_at_zero,
    mm_gdd_params,
    mode,
    moments,
    pdf,
    pdf_at_location,
    pdf_derivative,
    reference,
    reflect,
    six_sigma_interval,
)

__all__ = [
    "GDDError",
    "GDDParams",
    "bench",
    "cdf",
    "cdf_at_zero",
    "mm_gdd_params",
    "mode",
    "moments",
    "pdf",
    "pdf_at_location",
    "pdf_derivative",
    "reference",
    "reflect",
    "six_sigma_interval",
]
