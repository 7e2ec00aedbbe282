"""Capacity and exact string counts of discrete noiseless channels.

A channel is a weighted alphabet plus a constraint on which strings may be
sent. This package computes the channel's counting generating function in
closed form, extracts exact coefficients, locates the dominant singularity
with certified enclosures, and cross-checks everything against brute-force
enumeration. Weights may be arbitrary positive reals; exponents are kept
exact as integer combinations of named weight atoms.
"""

from .chanspec import (
    ChannelSpec,
    Concat,
    Epsilon,
    ForbiddenPatterns,
    Free,
    Regex,
    Star,
    Symbol,
    SymbolDef,
    Union,
    load_spec,
    parse_regex,
    parse_spec,
    render_regex,
    render_spec,
)
from .errors import (
    BasisMismatchError,
    DncError,
    EvalOverflowError,
    ExpansionError,
    InsufficientDataError,
    ResourceLimitError,
    SolverError,
    SpecError,
    UnsupportedChannelError,
)
from .genpoly import (
    CoefficientSeries,
    GeneralizedPolynomial,
    RationalGF,
    WeightAtom,
    WeightBasis,
    WeightVector,
    expand_series,
)
from .gf_builder import (
    autocorrelation,
    build_gf,
    gf_free_monoid,
    gf_from_regex,
    gf_pattern_avoidance,
)
from .oracle import (
    EnumerationResult,
    enumerate_by_weight,
    enumerate_channel,
    estimate_capacity,
)
from .solver import (
    CapacityReport,
    DensityReport,
    RootResult,
    capacity_from_characteristic,
    check_density,
    complex_roots_integer_exponents,
    smallest_positive_pole,
    smallest_positive_root,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatchError",
    "CapacityReport",
    "ChannelSpec",
    "CoefficientSeries",
    "Concat",
    "DensityReport",
    "DncError",
    "EnumerationResult",
    "Epsilon",
    "EvalOverflowError",
    "ExpansionError",
    "ForbiddenPatterns",
    "Free",
    "GeneralizedPolynomial",
    "InsufficientDataError",
    "RationalGF",
    "Regex",
    "ResourceLimitError",
    "RootResult",
    "SolverError",
    "SpecError",
    "Star",
    "Symbol",
    "SymbolDef",
    "Union",
    "UnsupportedChannelError",
    "WeightAtom",
    "WeightBasis",
    "WeightVector",
    "autocorrelation",
    "build_gf",
    "capacity_from_characteristic",
    "check_density",
    "complex_roots_integer_exponents",
    "enumerate_by_weight",
    "enumerate_channel",
    "estimate_capacity",
    "expand_series",
    "gf_free_monoid",
    "gf_from_regex",
    "gf_pattern_avoidance",
    "load_spec",
    "parse_regex",
    "parse_spec",
    "render_regex",
    "render_spec",
    "smallest_positive_pole",
    "smallest_positive_root",
]
