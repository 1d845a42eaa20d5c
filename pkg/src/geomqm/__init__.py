"""Quantum mechanics of finite-level systems in geometric form.

States are points of the realified Hilbert space, observables are
expectation-value functions, and their algebra, spectra and dynamics are
read off from the Kahler tensors on that space and on its projective
quotient.
"""

__version__ = "0.1.0"

from .bloch import (
    BlochState,
    DensityMatrix,
    PauliCoefficients,
    anticommutator_function,
    bloch_tensor_eval,
    commutator_function,
    density_to_bloch,
    pauli_expectation,
    state_to_bloch,
)
from .dynamics import Trajectory, bloch_evolve, ehrenfest_residual, evolve_state, expectation_trajectory
from .errors import (
    DegenerateStateError,
    DimensionMismatchError,
    FocalPointError,
    GeomQMError,
    InvalidStateError,
    NonHermitianError,
    NumericalConsistencyError,
)
from .expectation import (
    commutator,
    covariance,
    differential,
    expectation,
    jordan_product,
    poisson_bracket,
    projected_tensor_eval,
    variance,
)
from .hilbert import (
    HermitianOperator,
    RealifiedState,
    apply_complex_structure,
    complexify,
    euler_fields,
    hermitian_product,
    metric,
    projector,
    realify,
    symplectic_form,
)
from .interference import (
    FiducialProjector,
    TangentVector,
    exp_map,
    induced_inner_product,
    lift,
    log_map,
    star_compose,
    superpose,
    transition_probability,
)
from .kernels import BACKEND
from .spectral import SearchConfig, critical_values, find_critical_points, is_critical, qubit_spectrum_closed_form
from .uncertainty import UncertaintyReport, uncertainty_report

