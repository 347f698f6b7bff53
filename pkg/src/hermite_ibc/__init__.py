"""Computable information-based complexity for weighted Hermite spaces."""
from .errors import (DivergenceError, DomainError, QuadratureError, SchemaError, ToleranceError,
                     UnsupportedCombination)
from .weights import (Constant, Explicit, Family, FourierWeightSpec, Geometric, MultiIndex, PolyDecay,
                      fourier_weight, fourier_weight_1d)
from .spectra import (SpaceSpec, complexity_report, count_large_eigenvalues, eigenvalue_stream,
                      minimal_errors, nth_minimal_error, tractability_report, trace)
from .kernels import (KernelEvalOptions, kernel_anchored, kernel_anova_integral, kernel_mehler,
                      kernel_series)
from .analysis import (CubatureRule, HermiteCoefficients, hermite_coefficients, norm_in_space,
                       sobolev_norm_1d, spectral_truncation, wce_integration, wce_lower_bound)

__version__ = "0.1.0"
