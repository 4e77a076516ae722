"""Merge tree edit distance via path mappings.

Core objects: MergeTree, the one-degree edit operations, and the
deformation distance delta_1 together with optimal path mappings.
Scalar field extraction and ensemble analysis live in mtdist.grid and
mtdist.analysis.
"""

from ._backend import backend_name
from .distance import (
    PathMapping,
    distance,
    distance_with_mapping,
    mapping_cost,
    mapping_to_edit_sequence,
    normalize_mapping,
    validate_mapping,
    write_pmap,
)
from .edits import (
    Contract,
    EditError,
    Relabel,
    Uncontract,
    apply_edit,
    apply_sequence,
    is_one_degree,
    sequence_cost,
)
from .tree import (
    EMPTY,
    MergeTree,
    ParseError,
    load_mt,
    parse_mt,
    save_mt,
    write_mt,
)

__version__ = "0.1.0"

__all__ = [
    "MergeTree",
    "ParseError",
    "EMPTY",
    "parse_mt",
    "write_mt",
    "load_mt",
    "save_mt",
    "Relabel",
    "Contract",
    "Uncontract",
    "EditError",
    "apply_edit",
    "apply_sequence",
    "sequence_cost",
    "is_one_degree",
    "distance",
    "distance_with_mapping",
    "PathMapping",
    "validate_mapping",
    "mapping_cost",
    "normalize_mapping",
    "mapping_to_edit_sequence",
    "write_pmap",
    "backend_name",
    "__version__",
]
