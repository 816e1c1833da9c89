"""Time-dependent weak values, PT / anti-PT symmetry of weak interaction
Hamiltonians, and von Neumann pointer predictions."""

from .config import DEFAULT, Tolerances
from .coupling import (
    ClosedFormExample,
    CouplingKind,
    CouplingProfile,
    GridCoverageError,
    aligned_grid,
    closed_form_translation,
    coefficient_series,
    coupling_eval,
    example_weak_value,
    pointer_translation,
    simpson_uniform,
)
from .pointer import (
    PointerMomentReport,
    PointerObservable,
    PointerState,
    exact_pointer,
    free_evolve,
    gaussian_pointer,
    momentum_representation,
    pointer_from_samples,
    pointer_moments,
    predict_mean,
    predict_variance,
    weak_approx_pointer,
    weak_hamiltonian_action,
)
from .pps import (
    ContractViolation,
    NearOrthogonalError,
    PpsScenario,
    TimeGrid,
    WeakValueSeries,
    evolve_pps,
    finite_difference_derivative,
    weak_energy,
    weak_value,
    weak_value_derivative,
    weak_value_of,
    weak_value_series,
)
from .quantum import Observable, StateVector, evolve, expectation, inner, ket
from .symmetry import (
    CoefficientSeries,
    Picture,
    SymmetryReport,
    Vanishing,
    Verdict,
    classify,
    even_odd_decompose,
    is_anti_pt_symmetric,
    is_pt_symmetric,
    pt_transform,
)

__version__ = "0.1.0"
