"""Strong-clan decompositions of Gaifman graphs, clan implications and graph reconstruction."""

from .core import EdgeRegistry, GuardError, InputError, Item, TwoStructure, UnsupportedError
from .decomposition import (
    COMPLETE,
    LEAF,
    OTHERS,
    PRIMITIVE,
    ClanNode,
    DecompositionTree,
    canonical_form,
    canonical_text,
    classify_visibility,
    decompose,
    group_others,
    pack,
    split,
)
from .gaifman import (
    CooccurrenceCounts,
    Dataset,
    apply_lower_threshold,
    build_exponential,
    build_linear,
    build_standard,
    build_thresholded,
    count_cooccurrences,
    filter_items,
    ingest_relational,
    ingest_transactional,
)
from .implications import (
    ClosureLattice,
    ImplicationSet,
    closure,
    distinguishing_set,
    enumerate_closed_sets,
    generate_implications,
    infer_clan_type,
    lattice_to_tree,
    strong_closed_sets,
)
from .reconstruction import PairGraph, ReconstructionError, build_pair_graph, pair_path, reconstruct, verify_roundtrip

__version__ = "0.1.0"
