"""Numerical toolkit for mixed-norm estimates of singular integral operators.

Builds an explicit family of Schwartz-class wave packets whose stacked
double-Riesz images grow without bound in the inner-L2 outer-sup mixed norm
while the reversed mixed norm of the inputs stays bounded, and ships the
supporting machinery: calibrated Fourier transforms, multiplier operators,
kernel-condition checks, mixed and weak Lebesgue norms, layer-cake
integration, dyadic stopping-time decompositions, and reproducible
experiment runners behind a CLI.
"""

from .errors import (
    ConfigurationError,
    DecompositionError,
    EvaluationError,
    FormatError,
    MixedNormError,
    ParameterError,
    SamplingError,
)
from .grid_field import (
    Field1D,
    Field2D,
    UniformGrid1D,
    field_from_fn,
    integrate,
    make_grid,
    read_field,
    trapezoid_weights,
    write_field,
)
from .fourier import (
    Spectrum1D,
    Spectrum2D,
    dual_source_grid,
    frequency_grid,
    ft1,
    ft2,
    ft_axis,
    ift1,
    ift2,
    ift_axis,
)
from .bumps import (
    CounterexampleFamily,
    SmoothBump,
    band_window,
    dyadic_bump,
    gaussian_envelope,
    make_bump,
    mirrored_band,
    smooth_step,
    transform_peak_bound,
)
from .operators import (
    CZKernelSpec,
    MultiplierSymbol,
    SliceParams,
    apply_multiplier,
    cross_window_bound,
    double_riesz_kernel,
    slice_magnitude,
    slice_params,
    slice_spectrum,
    symbol,
    verify_kernel_conditions,
    window_floor_constant,
    window_interval,
    window_margin,
)
from .norms import (
    MixedNormSpec,
    distribution,
    interpolation_constant,
    layer_cake,
    mixed_norm,
    p_norm,
    p_norm2,
    truncation_split,
    weak_norm,
)
from .decomposition import (
    CZDecomposition,
    DyadicInterval,
    GoodBadLift,
    cz_decompose,
    double_interval,
    lift,
    majorant,
    weak11_witness,
)
from .harness import (
    CexRow,
    growth_csv,
    growth_svg,
    run_counterexample,
    run_interpolation_check,
    run_path_validation,
    run_weak11,
)

__version__ = "0.1.0"
