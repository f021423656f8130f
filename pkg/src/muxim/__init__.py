"""Influence maximization on multiplex networks with heterogeneous diffusion.

The core library is importable directly; the HTTP service lives under
muxim.service and the thin-client CLI under muxim.cli.
"""

from .baselines import best_single_network, even_seed
from .diffusion import (
    PropagationConfig,
    SpreadEstimate,
    WorldRealization,
    enumerate_realizations,
    exact_dimension_count,
    propagate_deterministic,
    sigma_exact,
    sigma_layer,
    sigma_layer_exact,
    sigma_mc,
    simulate_once,
    spread_report,
)
from .errors import (
    EnumerationLimitError,
    InfeasibleError,
    ManifestError,
    MultiplexError,
    UnsupportedModelError,
)
from .experiment import RunRecord, run_cell, run_experiment
from .isf import greedy_select, isf_select
from .ksn import KsnReport, SeedingTable, TableEntry, build_table, ksn_select
from .manifest import load_multiplex, save_multiplex
from .mckp import (
    MckpInstance,
    MckpItem,
    MckpSolution,
    make_instance,
    mckp_brute_force,
    mckp_exact_dp,
    mckp_greedy_half,
)
from .model import (
    FIXED_THRESHOLD,
    IC,
    LT,
    MLT,
    DiffusionModelSpec,
    Layer,
    Multiplex,
    SeedSet,
    build_multiplex,
    make_layer,
    overlap_count,
    restrict_to_layer,
    single_layer_multiplex,
)
from .netgen import (
    LayerSkeleton,
    assign_models,
    gen_ba_layer,
    gen_er_layer,
    generate_multiplex,
    wire_overlap,
)
from .single_layer import (
    BruteForceSeeder,
    CelfSeeder,
    RisSeeder,
    brute_force_seed_layer,
    make_seeder,
    ris_seed_layer,
    seed_layer,
)

__version__ = "0.1.0"
