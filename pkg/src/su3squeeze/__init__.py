"""Squeezing of collective qutrit (SU(3)) ensembles: exact and semiclassical."""

from .evolution import (
    DiagonalHamiltonian,
    NoMinimumError,
    ScalingStudy,
    SqueezingCurve,
    default_time_window,
    evolve,
    find_minimum,
    hamiltonian,
    initial_coset_point,
    scaling_study,
    squeezing_curve,
)
from .groupops import (
    CosetPoint,
    StabilizerElement,
    coherent_state,
    coherent_state_closed_form,
    displacement,
    mean_vector,
    stabilizer_operator,
    su2_rotation,
)
from .irrep import (
    BasisState,
    IrrepSpace,
    LinearOperator,
    StateVector,
    cartan,
    commutator,
    enumerate_basis,
    expectation,
    generator,
    generator_triplets,
    highest_weight_state,
    space_for,
    variance,
)
from .kernel import (
    QuadratureGrid,
    TensorBasis,
    WignerKernel,
    approx_wigner,
    build_invariant_tensors,
    build_kernel,
    build_quadrature,
    integrate,
    kernel_for,
    quantum_wigner_slice,
    symbol,
    symbol_field,
    traciality_check,
    wigner_highest_weight,
)
from .semiclassical import (
    ClassicalFlow,
    TransportedWigner,
    cos_beta_bar,
    epsilon,
    flow_consistency_check,
    poisson_bracket,
    semiclassical_moment,
    semiclassical_squeezing_curve,
    transported_wigner,
)
from .squeezing import (
    Direction,
    SqueezingResult,
    isotropy_check,
    k_operator,
    k_perp,
    minimize_variance,
)

__version__ = "0.1.0"
