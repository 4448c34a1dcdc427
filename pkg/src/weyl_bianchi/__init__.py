"""Evolution operators for massless two-component spinor modes in planar
power-law anisotropic backgrounds.

The package provides an analytic Bessel-kernel propagator, an
independent ODE ground truth, truncated time-ordered series, and two
exactly solvable benchmark models, plus a CLI harness for sweeps and
validation.
"""

from .background import (
    BackgroundParams,
    ClosedFormInputs,
    DerivedParams,
    TimeWindow,
    WaveVector,
    closed_form_inputs,
    derived_params,
    gamma_coupling,
    k_plus,
    physical_momentum,
)
from .closedform import (
    QuadControl,
    approx_In,
    asymptotic_propagator,
    chirality_flip,
    closed_propagator,
    short_time_propagator,
)
from .errors import (
    BranchError,
    ConfigError,
    ConvergenceError,
    DomainError,
    NumericalError,
    PoleError,
    QuadratureError,
    SpecfunError,
    ToleranceError,
    WeylBianchiError,
    ZeroDenominatorError,
)
from .exact_models import (
    RW_BACKGROUND,
    STIFF_BACKGROUND,
    SpinorPair,
    StiffParams,
    asymptotic_match_report,
    rw_propagator,
    rw_solution_fixture,
    stiff_limits,
    stiff_ode_residual,
    stiff_propagator,
    stiff_solutions,
)
from .propagation import (
    OdeControl,
    Propagator,
    PropagatorResult,
    dyson_In,
    dyson_partial_K,
    evolve_ode,
    evolve_ode_checkpoints,
    omega_matrix,
)
from .specfun import (
    SeriesControl,
    bessel_j,
    complex_gamma,
    hyp0f1,
    kummer_m,
    log_gamma,
    reciprocal_gamma,
    whittaker_w,
)

__version__ = "0.1.0"
