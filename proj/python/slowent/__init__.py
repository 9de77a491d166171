"""Exact-arithmetic slow entropy experiments for rotations, interval exchanges and special flows."""

from fractions import Fraction

from ._slowent import (
    ConstructionError,
    ContinuedFraction,
    DomainError,
    InsufficientDataError,
    IntervalExchange,
    Param,
    PrecisionError,
    ResourceError,
    cf_of_rational,
    complexity_exact,
    complexity_windowed,
    convergents,
    cover_count,
    cylinder_measures,
    exponent_fit,
    flow_covering,
    gap_structure,
    geometric_grid,
    metric_entropy,
    partition_endpoints,
    skew_covering,
    sorted_gaps,
    sturmian_word,
)

__all__ = [
    "ConstructionError",
    "ContinuedFraction",
    "DomainError",
    "Fraction",
    "InsufficientDataError",
    "IntervalExchange",
    "Param",
    "PrecisionError",
    "ResourceError",
    "cf_of_rational",
    "complexity_exact",
    "complexity_windowed",
    "convergents",
    "cover_count",
    "cylinder_measures",
    "exponent_fit",
    "flow_covering",
    "gap_structure",
    "geometric_grid",
    "metric_entropy",
    "partition_endpoints",
    "skew_covering",
    "sorted_gaps",
    "sturmian_word",
]
