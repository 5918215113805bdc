"""Lattice-gas quasicrystal toolkit.

Thin Python layer over the C++ core: Wang tile sets and their
determinism/aperiodicity gates, the induced 1D automaton, the
Toom-protected 3D stack, noisy PCA sampling, Gibbs-side energies and
conditionals, and window analyses (clusters, periods, majorities).
"""

from ._latgas import (  # noqa: F401
    INTERACTION_SUPPORT,
    NEIGHBORHOOD,
    Alphabet,
    Boundary1D,
    BoundaryI,
    BoundaryKind1D,
    BoundaryKindI,
    CaRule,
    Cell4,
    Cluster,
    ClusterReport,
    Config1D,
    Config3D,
    DeterminismReport,
    Direction,
    DisagreementSet,
    ErosionResult,
    ErrorSetResult,
    Extent4,
    Flip,
    InteractionParams,
    MajorityField,
    Metric,
    NoiseParams,
    Patch,
    PatchSearchResult,
    PeriodEntry,
    PeriodReport,
    ReferenceRun,
    SeaIslandVerdict,
    SearchStatus,
    SpaceTimeConfig,
    StreamExhausted,
    TemperatureMap,
    Tile,
    TileSet,
    TilesetError,
    Trajectory1D,
    TrajectoryWindow,
    TruncatedSupport,
    ammann16_text,
    beta_to_epsilon,
    blank_cone,
    check_deterministic,
    clone_config,
    clusters,
    default_window,
    disagreements,
    empirical_majority_field,
    erosion_probe,
    error_set,
    expected_update,
    find_patch,
    find_torus_tiling,
    full_support_region,
    gibbs_conditional,
    load_tileset,
    patch_is_valid,
    patch_to_trajectory,
    periodicity_scan,
    phi,
    phi_match,
    phi_mismatch,
    psi,
    reference_run_from_patch,
    run1d,
    sample_trajectory,
    sea_island_check,
    stacked_rule,
    stacked_step,
    step1d,
    theta,
    tileset_from_text,
    toom_correct,
    toom_majority,
    torus_patch_is_valid,
    validate_interaction,
    window_energy,
)

__version__ = "0.1.0"
