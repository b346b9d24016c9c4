"""One-mode bosonic Gaussian channel analysis and entanglement activation."""

from .activation import (
    ActivationParams,
    BracketError,
    CircuitSpec,
    TMSStep,
    build_activation_circuit,
    eac_channel,
    eac_environment_photons,
    eac_noise_m,
    extract_induced_channel,
    optimal_gprime,
    rejected_af_channel,
)
from .channels import (
    ChannelInvariants,
    GaussianChannel1M,
    NonCPTPError,
    amplification,
    apply_channel,
    classify,
    compose,
    g_entropy,
    loss,
    phase_conjugation,
    q_lower_bound,
    random_displacement,
)
from .symplectic import (
    CovarianceState,
    SymplecticOp,
    apply,
    omega,
    partial_trace,
    symplectic_eigenvalues,
    thermal,
    tms_symplectic,
    vacuum,
)
from .transducer import EOParams, cooperativity, gain_from_cooperativity, transduction_qlb

__version__ = "0.1.0"
