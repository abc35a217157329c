"""Certification and simulation of disturbance propagation in coupled LTI networks."""

import os as _os

# optional THREADS override caps the BLAS pools; must land before numpy loads
if "THREADS" in _os.environ:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["THREADS"])

from .errors import (
    DimensionMismatch,
    GraphTooLarge,
    NoIncomingEdges,
    NonPositiveWeight,
    NotPlanarTemplate,
    NotSeparating,
    NotSISO,
    NotStronglyConnected,
    PropstabError,
    SchemaError,
    SelfLoop,
    SingularAtS,
    SourceVertex,
    StepTooLarge,
    Unreachable,
    UnstableLoop,
)
from .lti import (
    FrequencyGrid,
    Pole,
    StateSpace,
    eval_transfer,
    eval_transfer_siso,
    foh_discretize,
    frequency_response,
    is_hurwitz,
    poles,
    simulate_lti,
    simulate_lti_foh,
    spectral_radius,
    zoh_discretize,
)
from .graphs import (
    CutsetPartition,
    LaplacianSpectrum,
    WeightedDigraph,
    enumerate_separating_cutsets,
    graph_distance,
    is_strongly_connected,
    laplacian,
    monotone_path_exists,
    reachable_from,
    validate_cutset,
)
from .analysis import (
    GainResult,
    ImperviousReport,
    LocalLoop,
    ManifoldReport,
    NetworkModel,
    PlanarThreshold,
    RealPartCondition,
    StabilityReport,
    VertexGainCheck,
    certify,
    certify_impervious,
    check_local_requirement,
    is_positive_real,
    local_loop,
    manifold_stable,
    manifold_stable_dense,
    planar_damping,
    planar_damping_threshold,
    planar_subsystem,
    real_part_threshold,
    siso_real_part_condition,
    subsystem_pole_screen,
    sup_gain,
)
from .simulation import (
    Chirp,
    DistanceProfile,
    DisturbanceSignal,
    EnergyProfile,
    FilteringCheck,
    MajorizationViolation,
    Pulse,
    SampledSignal,
    SimulationResult,
    Tone,
    build_stacked_system,
    check_majorization,
    check_monotone_paths,
    distance_energy_profile,
    energy_profile,
    filtering_identity_check,
    sample_disturbance,
    simulate,
)
from .netfile import (
    AnalysisOptions,
    ParsedNetwork,
    network_to_json,
    parse_network,
    parse_network_text,
    serialize_network,
)

__version__ = "0.1.0"
