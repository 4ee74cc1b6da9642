"""Bit-parallel string matching on text and level DAGs, with track-table
simulations of the corresponding quantum algorithms."""

from .bitvec import BitVector, MatchMatrix, build_match_matrix
from .bitshift import shift_and_level_dag, shift_and_text
from .errors import (
    GenerationError,
    NotADag,
    NotLevelDag,
    ParseError,
    ScratchNotClean,
    SmlgError,
    StateCorruption,
    UsageError,
)
from .graph import LevelDag, from_degenerate_string, pad_classical, parse_ldag, serialize_ldag, validate_levels
from .grover import failure_bound, full_grover_oracle, period, run_randomized_search, success_probability
from .oracle import dp_match, enumerate_paths_match, gen_level_dag, gen_pattern
from .qcore import QramArray, TrackTable
from .qgraph import run_quantum_smlg
from .qtext import run_quantum_text

__version__ = "0.1.0"
