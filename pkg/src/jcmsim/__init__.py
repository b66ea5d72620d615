"""Monte Carlo simulator of a Jaynes-Cummings sign-shift gate under a
stochastic dipole-coupled field.

The compiled ensemble machinery lives in :mod:`jcmsim.engine`, which is
imported on demand (``from jcmsim import engine``) so that light uses of the
package do not pay the numba import.
"""
from .dephasing import apply_atom_rotation, rotation_angle
from .dynamics import (
    DEFAULT_COUPLING,
    JcmParams,
    JcmStepOperator,
    apply_jcm_step,
    build_step_operator,
    exact_evolve,
    ns_gate_coeffs,
    recorded_steps,
    reference_trajectory,
)
from .fitting import FitResult, intercept_shift, loglog_fit
from .noise import (
    FieldPath,
    NoiseParams,
    fourth_moment_theory,
    generate_path,
    next_field,
    normality_histogram,
    path_moment_stats,
    reduced_chi2,
    sample_stream,
    variance_theory,
)
from .perturbation import (
    PerturbativePrediction,
    perturbative_prediction,
    predicted_fidelity,
    predicted_intercept,
    second_order_coefficient,
    validity_window,
)
from .states import (
    BlochVector,
    DressedIndex,
    StateVector,
    bare_to_dressed,
    basis_state,
    bloch_from_density,
    bloch_of_state,
    dressed_to_bare,
    inner_product,
    make_initial_state,
    reduced_atom_density,
)

__version__ = "0.1.0"
