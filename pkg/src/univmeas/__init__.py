"""Universal measurement sequences attaining quantum relative entropy via Schur-Weyl duality."""

from .divergence import kl_divergence, measured_divergence, pinched_divergence, quantum_relative_entropy
from .experiment import SweepConfig, SweepRecord, check_sandwich_bound, run_sweep, universal_pvm
from .matkernel import comm_norm, herm_eig, kron, mat_log_on_support
from .measurement import Povm, Pvm, measure, pinch, product_pvm, refines, width
from .quantum_state import (
    DensityMatrix,
    random_state,
    spectral_pvm,
    spectral_pvm_of_power,
    tensor_power,
    validate_state,
)
from .schur_weyl import isotypic_pvm, spin_coupling_pvm

__version__ = "0.1.0"
