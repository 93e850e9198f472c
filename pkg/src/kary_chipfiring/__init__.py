"""Labeled chip-firing on infinite directed k-ary trees."""

from .engine import (
    Configuration,
    FireEvent,
    RunResult,
    Strategy,
    canonical_strategy,
    fire,
    initial_configuration,
    random_strategy,
    run_strategy,
    unlabeled_fire_counts,
)
from .errors import ChipFiringError
from .formulas import (
    chip_lands_at,
    extreme_range_lengths,
    extreme_spreads,
    group_boundaries,
    group_partition,
    landing_range,
    largest_chip,
    smallest_chip,
    spread_profile,
)
from .oracle import EnumerationScope, enumerate_stable, is_reachable, reachable_chips
from .tree import (
    GameParams,
    LandingOrder,
    dominates,
    landing_order_index,
    parse_traversal,
    reflect,
    vertex_index,
)
from .witness import assignment_to_fires, layer2_assignment, witness_strategy

__version__ = "0.1.0"
