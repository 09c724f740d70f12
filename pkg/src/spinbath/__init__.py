"""Exact simulation of a central qubit dephasing against a thermal Ising ring.

The package computes the decoherence function of the qubit from complex-field
transfer-matrix partition sums, relates its zeros to the Lee-Yang zeros of
the bath partition function, evaluates non-Markovianity witnesses (trace
distance and the conditional past-future correlator), and analyzes how much
system information bath fragments store (mutual-information curves and
broadcast-structure diagnostics).  Brute-force enumeration oracles back every
closed form.
"""

__version__ = "0.1.0"

from .bath import (
    BathParams,
    LogComplex,
    SpinConfig,
    bath_purity,
    energy,
    gibbs_weight,
    log_complex_partition_function,
    log_partition_function,
    transfer_matrix,
)
from .dephasing import (
    SystemParams,
    decoherence_function,
    decoherence_rate,
    evolve_qubit,
    kraus_channel,
    loschmidt_amplitude,
    recoherence_period,
    validate_density,
)
from .envinfo import (
    FragmentSpec,
    JointBlockState,
    PipCurve,
    SBSReport,
    fragment_decoherence_function,
    joint_state_general,
    joint_state_noninteracting,
    mutual_information,
    pip_curve,
    sbs_diagnostics,
    von_neumann_entropy,
)
from .errors import InternalConsistencyError, NumericError, UndefinedConditionalError
from .leeyang import (
    FugacityPolynomial,
    LeeYangZero,
    critical_times,
    fugacity_polynomial,
    zeros_interacting,
    zeros_numeric,
)
from .witnesses import (
    CPFResult,
    WitnessSeries,
    blp_witness_series,
    cpf_formula,
    cpf_oracle,
    cpf_sequence_distribution,
    probe_pair,
    trace_distance,
)

__all__ = [
    "__version__",
    "BathParams", "SpinConfig", "LogComplex", "energy", "gibbs_weight",
    "log_partition_function", "log_complex_partition_function",
    "transfer_matrix", "bath_purity",
    "SystemParams", "recoherence_period", "decoherence_function",
    "loschmidt_amplitude", "decoherence_rate", "evolve_qubit",
    "kraus_channel", "validate_density",
    "LeeYangZero", "FugacityPolynomial", "fugacity_polynomial",
    "zeros_interacting", "zeros_numeric", "critical_times",
    "WitnessSeries", "CPFResult", "trace_distance", "probe_pair",
    "blp_witness_series", "cpf_formula", "cpf_oracle",
    "cpf_sequence_distribution",
    "FragmentSpec", "JointBlockState", "PipCurve", "SBSReport",
    "fragment_decoherence_function", "joint_state_noninteracting",
    "joint_state_general", "von_neumann_entropy", "mutual_information",
    "pip_curve", "sbs_diagnostics",
    "InternalConsistencyError", "NumericError", "UndefinedConditionalError",
]
