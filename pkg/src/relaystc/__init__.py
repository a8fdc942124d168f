"""Distributed space-time codes for MIMO amplify-and-forward relay networks.

Construction of the silver/golden/MIDO lattices and their block-diagonal
relay forms, exact determinant analysis, sphere decoding with
fast-decodability reports, the relay transmission model, and seeded Monte
Carlo performance sweeps.
"""

__version__ = "0.1.0"

from .exactfield import (
    FieldElement,
    FieldError,
    NumberFieldSpec,
    cyclotomic5_field,
    golden_field,
    load_field_spec,
    silver_field,
)
from .algebra import (
    CyclicAlgebraSpec,
    FieldMatrix,
    IterationSpec,
    ScaledFieldMatrix,
    distribute,
    iterate_alpha,
    left_regular_rep,
    reshape_to_naf_frames,
)
from .codes import (
    CODE_NAMES,
    BudgetExceededError,
    DegenerateLatticeError,
    DetStats,
    DiversityReport,
    STCodeLattice,
    build_lattice,
    det_statistics,
    diversity_check,
    golden_codeword,
    mido_codeword,
    normalize_unit_volume,
    select_convention,
    silver_codeword,
)
from .mldecode import (
    DegenerateChannelError,
    FdReport,
    RealizedLattice,
    complexity_profile,
    exhaustive_ml,
    fd_analyze,
    qr_factor,
    sphere_decode,
    vectorize_real,
)
from .relaychannel import (
    ChannelRealization,
    EquivalentChannel,
    NafConfig,
    equivalent_channel,
    load_naf_config,
    naf_transmit,
    quasi_static_mimo,
    sample_channels,
)
from .simharness import (
    SimConfig,
    SimPoint,
    SimResult,
    bler_crossing_snr,
    derive_trial_seed,
    run_ber_sweep,
    run_det_report,
)

__all__ = [
    "__version__",
    "FieldElement", "FieldError", "NumberFieldSpec",
    "cyclotomic5_field", "golden_field", "silver_field", "load_field_spec",
    "CyclicAlgebraSpec", "FieldMatrix", "IterationSpec", "ScaledFieldMatrix",
    "distribute", "iterate_alpha", "left_regular_rep", "reshape_to_naf_frames",
    "CODE_NAMES", "BudgetExceededError", "DegenerateLatticeError",
    "DetStats", "DiversityReport", "STCodeLattice",
    "build_lattice", "det_statistics", "diversity_check",
    "golden_codeword", "mido_codeword", "silver_codeword",
    "normalize_unit_volume", "select_convention",
    "DegenerateChannelError", "FdReport", "RealizedLattice",
    "complexity_profile", "exhaustive_ml", "fd_analyze",
    "qr_factor", "sphere_decode", "vectorize_real",
    "ChannelRealization", "EquivalentChannel", "NafConfig",
    "equivalent_channel", "load_naf_config", "naf_transmit",
    "quasi_static_mimo", "sample_channels",
    "SimConfig", "SimPoint", "SimResult",
    "bler_crossing_snr", "derive_trial_seed", "run_ber_sweep", "run_det_report",
]
