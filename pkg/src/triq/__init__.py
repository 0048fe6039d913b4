"""Three-qubit entanglement decay, decoupling, and tomography toolkit.

Conventions used throughout: qubit 1 is the leftmost tensor factor
(most significant bit of the computational index), angles are radians,
times are seconds, rates are rad/s. Density matrices are 8x8 complex
numpy arrays with unit trace.
"""

from .core import (
    HERM_ATOL,
    ID2,
    SX,
    SY,
    SZ,
    NonHermitianError,
    PhysicalityError,
    check_density,
    hermitian_eigs,
    kron,
    load_matrix,
    matrix_exp_hermitian,
    partial_trace,
    partial_transpose,
    save_matrix,
)
from .states import (
    Gate,
    PseudopureParams,
    THETA_W,
    THETA_WWBAR,
    apply_circuit,
    cnot,
    controlled_rotation,
    crusher,
    parse_circuit,
    prepare_ghz,
    prepare_pseudopure_sequence,
    prepare_w,
    prepare_wwbar,
    pseudopure,
    pseudopure_delays,
    read_circuit,
    rotation,
    thermal_state,
)
from .noise import (
    NoiseModel,
    SpinSystem,
    evolve_correlated,
    evolve_markovian,
    hamiltonian,
    lindblad_rhs,
    sample_ou_path,
)
from .analytic import (
    RateSet,
    decay_times,
    ghz_analytic,
    w_analytic,
    wwbar_analytic,
)
from .measures import (
    DecayCurve,
    curve_from_states,
    disentanglement_time,
    fidelity,
    fit_decay_rate,
    negativity,
    purity,
    tripartite_negativity,
)
from .ddseq import (
    DDSchedule,
    Pulse,
    build_cpmg,
    build_kddxy,
    build_xy16s,
    cycle_duration,
    expand_schedule,
    min_interpulse_delay,
    pulse_unitary,
    run_protected,
    schedule_table,
)
from .tomo import (
    SETTING_LABELS,
    ReadoutSetting,
    TomoRecord,
    fidelity_report,
    make_setting,
    mle_reconstruct,
    observable_list,
    read_records,
    simulate_readout,
    tomograph,
    write_records,
)

__version__ = "0.1.0"

__all__ = [
    "HERM_ATOL",
    "ID2",
    "SX",
    "SY",
    "SZ",
    "NonHermitianError",
    "PhysicalityError",
    "check_density",
    "hermitian_eigs",
    "kron",
    "load_matrix",
    "matrix_exp_hermitian",
    "partial_trace",
    "partial_transpose",
    "save_matrix",
    "Gate",
    "PseudopureParams",
    "THETA_W",
    "THETA_WWBAR",
    "apply_circuit",
    "cnot",
    "controlled_rotation",
    "crusher",
    "parse_circuit",
    "prepare_ghz",
    "prepare_pseudopure_sequence",
    "prepare_w",
    "prepare_wwbar",
    "pseudopure",
    "pseudopure_delays",
    "read_circuit",
    "rotation",
    "thermal_state",
    "NoiseModel",
    "SpinSystem",
    "evolve_correlated",
    "evolve_markovian",
    "hamiltonian",
    "lindblad_rhs",
    "sample_ou_path",
    "RateSet",
    "decay_times",
    "ghz_analytic",
    "w_analytic",
    "wwbar_analytic",
    "DecayCurve",
    "curve_from_states",
    "disentanglement_time",
    "fidelity",
    "fit_decay_rate",
    "negativity",
    "purity",
    "tripartite_negativity",
    "DDSchedule",
    "Pulse",
    "build_cpmg",
    "build_kddxy",
    "build_xy16s",
    "cycle_duration",
    "expand_schedule",
    "min_interpulse_delay",
    "pulse_unitary",
    "run_protected",
    "schedule_table",
    "SETTING_LABELS",
    "ReadoutSetting",
    "TomoRecord",
    "fidelity_report",
    "make_setting",
    "mle_reconstruct",
    "observable_list",
    "read_records",
    "simulate_readout",
    "tomograph",
    "write_records",
    "__version__",
]
