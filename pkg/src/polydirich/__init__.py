"""Numerics for Dirichlet-type spaces D_alpha on the bidisc and their multipliers."""
from ._accel import backend
from .errors import ConfigurationError, DomainError, PolydirichError, PreconditionError
from .harness import CATALOG, CheckReport, SuiteReport, Verdict, full_suite, run_check
from .integral import (QuadratureRule, beta_radial_weight, equivalence_constants, hardy_asymptotic_ratio,
                       hardy_norm_sup, integral_norm_exact, integral_norm_quadrature, quadrature_rule)
from .multipliers import (FiniteSectionOperator, NormEstimate, boundary_envelope, convolution_weight_bound,
                          finite_section, hinf_norm_estimate, interpolate_weights,
                          interpolation_inequality_check, operator_norm, pointwise_bound_check)
from .series import (FamilyId, NamedFamily, TruncatedSeries, UnivariateSeries, cauchy_product, evaluate,
                     evaluate1d, generate, read_csv, slice_w, slice_z, tensor_product, to_csv)
from .space import (WeightVector, compare, eval_functional_norm, hinf_sup_bound, inner_product,
                    kernel_series, norm, norm_sq, succ, succeq)
from .trend import Classification, DivergenceVerdict, divergence_trend

__version__ = "0.1.0"
