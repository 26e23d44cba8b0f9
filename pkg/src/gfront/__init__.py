"""Level-set front propagation and turbulent flame speeds in cellular flows.

The package solves the four G-equation variants (basic advected front,
curvature, linearized-viscous, and strain) on the unit torus using monotone
Hamiltonians with WENO reconstructions, explicit TVD Runge-Kutta or
semi-implicit stepping, value-periodic reinitialization, and two independent
front-speed estimators plus a cell-problem solver for the viscous model.
"""

from .corrector import (
    CorrectorState,
    IterationReport,
    contraction_bound,
    corrector_iterate,
    effective_hamiltonian_residual,
    solve_mean_zero,
)
from .driver import (
    RunConfig,
    RunResult,
    parse_config,
    run_corrector,
    run_single,
    run_sweep,
    simulate,
    write_config,
)
from .errors import (
    ConfigError,
    EstimationError,
    GFrontError,
    IntegrationError,
    SolveError,
)
from .flow import (
    FlowSpec,
    VelocitySample,
    eval_cellular,
    front_stretch_rate,
    segment_stretch_oracle,
    strain_rate,
    stretch_rate_curl_form,
    stretch_rate_general,
)
from .grid import (
    AffineField,
    Grid,
    StencilSet,
    central_gradient,
    evaluate_stencils,
    floor_integral,
    laplacian,
    read_snapshot,
    second_derivatives,
    write_snapshot,
)
from .hamiltonian import (
    HamiltonianValue,
    curvature_term,
    hamiltonian_inviscid,
    hamiltonian_strain,
    infinity_laplacian,
    strain_rate_field,
)
from .metrics import (
    DiagnosticsSeries,
    SpeedEstimate,
    detect_quench,
    estimate_pointwise,
    estimate_window_average,
    extract_zero_level,
    record_diagnostics,
)
from .reinit import (
    ReinitProfile,
    ReinitReport,
    reinit_field,
    smooth_sweep,
    squeezing_field,
)
from .stepping import (
    LinearSolveReport,
    SimState,
    StepPlan,
    compute_dt,
    rk_step_explicit,
    semi_implicit_curvature_step,
    semi_implicit_viscous_step,
    solve_helmholtz_periodic,
)
from .weno import OneSidedGradients, weno_derivatives

__version__ = "0.1.0"
