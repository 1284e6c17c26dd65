"""Exact distinct-pattern counting in permutations, the W_n and pi_k families, and small-n h(n) searches."""

from .census import CensusResult, census, census_of_length, census_streamed
from .constructions import (
    ColemanPermutation,
    coleman_permutation,
    perigees,
    record15,
    wilf_permutation,
)
from .core import (
    CapacityError,
    InvalidInputError,
    PatternFingerprint,
    ResourceLimitError,
    as_permutation,
    complement,
    contains,
    decode_fingerprint,
    descents,
    encode_fingerprint,
    format_permutation,
    identically_ordered,
    inverse,
    parse_permutation,
    reduce,
    reverse,
)
from .search import SearchRecord, distance_score, h_difference_report, heuristic_top, search_h
from .theorem import (
    BoundReport,
    bound_chain,
    restricted_family,
    theorem_bound,
    verify_distinctness,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "CensusResult",
    "ColemanPermutation",
    "InvalidInputError",
    "PatternFingerprint",
    "ResourceLimitError",
    "SearchRecord",
    "as_permutation",
    "bound_chain",
    "census",
    "census_of_length",
    "census_streamed",
    "coleman_permutation",
    "complement",
    "contains",
    "decode_fingerprint",
    "descents",
    "distance_score",
    "encode_fingerprint",
    "format_permutation",
    "h_difference_report",
    "heuristic_top",
    "identically_ordered",
    "inverse",
    "parse_permutation",
    "perigees",
    "record15",
    "reduce",
    "restricted_family",
    "reverse",
    "search_h",
    "theorem_bound",
    "verify_distinctness",
    "wilf_permutation",
]
