"""Pseudo-spectral stability laboratory for 2D Couette flow.

Spectral work is done in frame-adapted (sheared) labels, so the linear
evolution is an exact per-mode decay and the nonlinear terms are plain
pseudo-spectral products. The package splits into:

- `grid`: frequency grids, transforms, frame-adapted symbols
- `kelvin`: the exact linear oracle and its decay envelopes
- `weights`: ghost-multiplier weights and weighted norms
- `solver`: Lawson-RK4 time stepping (full / linear / quasi-linear)
- `initial_data`: the calibrated random initial-data family
- `toy`: the echo-cascade shell model and amplification sweeps
- `diagnostics`: norm probes, decay fits, stability verdicts
- `sweep`: reproducible run campaigns, bisection, threshold fits
- `checkpoint`: the binary state snapshot format
- `cli`: the `couette` command-line entry point
"""
from .errors import (
    BracketInvalid,
    CouetteError,
    NumericalError,
    OffGridShiftError,
    QuadratureError,
    StepRejected,
    ValidationError,
    WeightOverflowError,
)
from .grid import (
    FrequencyGrid,
    MovingFrameState,
    SpectralField,
    biot_savart_velocity,
    gradient_moving,
    laplacian_moving,
    make_grid,
    transform_forward,
    transform_inverse,
)
from .kelvin import (
    envelope_enhanced,
    envelope_inviscid,
    kelvin_exponent,
    kelvin_solve,
    offgrid_keep_mask,
    viscous_integral,
)
from .weights import (
    MultiplierParams,
    WeightedNorm,
    c_kappa,
    lambda_rate,
    lemma21_check_m1,
    m1,
    m2,
    m2_transport,
    m3,
    theorem_preset,
    upsilon,
    upsilon_finite_difference,
    weight_theorem_norm,
    weight_values,
)
from .solver import (
    QuasiState,
    SolverConfig,
    Trajectory,
    convolution_direct,
    dealias_mask,
    max_velocity,
    nonlinear_rhs,
    quasilinear_rhs,
    run,
    step,
    step_quasilinear,
)
from .initial_data import (
    calibrated_amplitude,
    family_envelope,
    make_initial_data,
    smallness_norm,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .toy import (
    AmplificationReport,
    AmplificationRow,
    ToyConfig,
    ToyState,
    coupling_kernel,
    log_l_grid,
    run_amplification,
    run_toy,
    shell_amplification,
    toy_rhs,
    transfer_time_profile,
)
from .diagnostics import (
    ClassifyThresholds,
    NormProbeSpec,
    NormSeries,
    StabilityVerdict,
    classify,
    enstrophy_nonzero,
    fit_decay,
    norm_probe,
    stream_gradient_field,
    stream_gradient_norm,
)
from .sweep import (
    RunConfig,
    SweepResult,
    bisect_threshold,
    execute_run,
    fit_beta,
    flag_monotonicity_violations,
    make_pipeline_classifier,
    sweep_campaign,
)

__version__ = "0.1.0"
