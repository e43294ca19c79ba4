"""Pair-correlation and gap statistics for sequences on the unit torus.

Sequences are held as :class:`SequenceRecord` (exact dyadic or binary64); the
counting, gap and construction modules all take records.
"""

from .construction import (
    ConstructionConfig,
    QSpec,
    block_of,
    block_schedule,
    construct_sequence,
    derive_ab,
    deterministic_block,
    explicit_config,
    gap_bound,
    grid_inclusion,
    halving_config,
    random_component,
    validate_config,
)
from .errors import ConfigError, FormatError, PpcError, RangeError, UsageError
from .gaps import GapProfile, gap_profile, gap_series
from .generators import GOLDEN, RngState, derive_seeds, equispaced, iid_uniform, kronecker
from .oracles import expected_F, gamma_k, mc_moments, variance_F, variance_F_exact
from .pair_correlation import (
    PcQuery,
    Predicate,
    Scaling,
    pair_count_brute,
    pair_count_fast,
    pc_curve,
    pc_statistic,
)
from .torus import (
    DyadicPoint,
    SequenceRecord,
    arc_gap,
    dyadic_make,
    read_sequence,
    torus_distance,
    write_sequence,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
