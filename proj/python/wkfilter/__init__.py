"""Mean-square optimal and minimax-robust filtering of functionals of
stationary sequences observed in additive uncorrelated noise.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    BandContaminationClass,
    EmpiricalMse,
    FactorCoeffs,
    FilterDiagnostics,
    FilterSolution,
    FourierSeries,
    GridMaxParams,
    GridMaxResult,
    JointMinimalClass,
    MinimalityReport,
    MinimaxOptions,
    MinimaxResiduals,
    MinimaxSolution,
    PowerPairClass,
    SaddlePointReport,
    SamplePath,
    SpectralDensity,
    ToeplitzProjection,
    empirical_mse,
    estimate_point,
    evaluate_density,
    factor_product,
    fourier_coefficients,
    grid_maximize_delta,
    least_favorable_band_eps,
    least_favorable_given_f,
    least_favorable_joint,
    least_favorable_power,
    minimality_check,
    mse,
    simulate_ma,
    smoothing,
    solve_filter,
    solve_filter_factorized,
    spectral_factorize,
    toeplitz_projection,
    verify_saddle_point,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
