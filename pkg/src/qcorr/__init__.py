"""Quantum-correlation toolkit: measures, state families, detector X-states."""

from .detector import (
    DetectorParams,
    SweepRow,
    XStateElements,
    assemble_rho,
    compute_elements,
    correlation_coefficient,
    discord_closed_form,
    erf_complex,
    sweep,
    xstate_concurrence,
    xstate_entanglement_flags,
)
from .errors import DimensionMismatchError, InvalidStateError
from .linalg import (
    Spectrum,
    eig_hermitian,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    tensor_product,
    validate_density,
)
from .measures import (
    CQVerdict,
    PPTResult,
    SchmidtDecomposition,
    chsh_max,
    concurrence,
    dephase_local,
    dephasing_discord,
    discord_for_measurement,
    discord_projective_opt,
    ensemble_classicality_witness,
    entanglement_entropy,
    fidelity,
    is_classical_quantum,
    local_eigenbasis,
    measurement_info_gain,
    mutual_information,
    ppt_check,
    schmidt_decompose,
    vn_entropy,
)
from .states import (
    bell_state,
    bound_entangled_tiles,
    classical_bipartite,
    cq_state,
    maximally_mixed,
    pseudo_pure,
    random_channel,
    random_density,
    random_pure,
    singlet,
    tile_basis,
    werner,
)

__version__ = "0.1.0"
