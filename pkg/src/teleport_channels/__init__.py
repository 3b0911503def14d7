"""Exact simulation of single- and two-pair teleportation and the channels it induces."""

from .channels import (
    KrausChannel, apply, choi, choi_distance, completeness_defect, compose,
    correlated_channel, correlated_channel_coherent, uncorrelated_channel,
)
from .qmath import (
    BlochCoefficients, DensityMatrix, PureState, bloch_coefficients, hermitian_eigenvalues,
    kron, partial_trace, partial_transpose,
)
from .reversal import (
    averaged_fmax, fmax_correlated_closed, fmax_uncorrelated_closed, fmax_werner_closed,
    optimal_reversal, teleported_entanglement,
)
from .states import (
    ResourceSpec, bell_state, fidelity_pure, input_state, negativity, resource_state,
)
from .teleport import (
    OUTCOMES, extract_kraus, permutation_unitary, probability_closed_form,
    simulate_double, simulate_single,
)

__version__ = "0.1.0"
